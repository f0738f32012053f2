#include "erysegm/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

using nlohmann::json;

json path_or_null(const std::filesystem::path& p) {
  return p.empty() ? json(nullptr) : json(p.string());
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json config_echo(const PipelineConfig& c) {
  json doc;
  doc["input"] = path_or_null(c.input);
  doc["reference"] = path_or_null(c.reference);
  doc["labelmask"] = path_or_null(c.labelmask);
  doc["class_map"] = path_or_null(c.class_map);
  doc["mask"] = path_or_null(c.mask);
  doc["valid_mask"] = path_or_null(c.valid_mask);
  doc["delta_map"] = path_or_null(c.delta_map);
  doc["out_dir"] = c.out_dir.string();
  doc["k"] = c.k;
  doc["ratio_max"] = c.ratio_max;
  doc["inlier_px"] = c.inlier_px;
  doc["ransac_iters"] = c.ransac_iters;
  doc["seed"] = c.seed;
  doc["max_keypoints"] = c.max_keypoints;
  doc["crop_coverage"] = c.crop_coverage;
  doc["open_radius"] = c.open_radius;
  doc["close_radius"] = c.close_radius;
  doc["min_area_fraction"] = c.min_area_fraction;
  doc["histogram_bins"] = c.histogram_bins;
  doc["overlay_color"] = {c.overlay_color[0], c.overlay_color[1], c.overlay_color[2]};
  doc["overlay_alpha"] = c.overlay_alpha;
  doc["skin_mask"] = c.skin_mask;
  doc["max_unknown_label_fraction"] = c.max_unknown_label_fraction;
  doc["adapter_steps"] = c.adapter.steps;
  doc["adapter_guidance"] = c.adapter.guidance;
  doc["adapter_seed"] = c.adapter.seed;
  return doc;
}

}  // namespace

std::string Report::to_json() const {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = command;
  doc["started_at"] = started_at;
  doc["finished_at"] = finished_at;
  doc["config"] = config_echo(config);

  const AlignmentSummary* al = alignment ? &*alignment : nullptr;
  doc["keypoints_a"] = al ? json(al->keypoints_a) : json(nullptr);
  doc["keypoints_b"] = al ? json(al->keypoints_b) : json(nullptr);
  doc["match_count"] = al ? json(al->match_count) : json(nullptr);
  doc["inlier_count"] = al ? json(al->inlier_count) : json(nullptr);
  doc["reprojection_rmse"] = al ? json(al->reprojection_rmse) : json(nullptr);
  doc["mse_pre"] = al ? json(al->mse_pre) : json(nullptr);
  doc["mse_post"] = al ? json(al->mse_post) : json(nullptr);
  if (al) {
    doc["crop_rect"] = {{"x", al->crop_rect.x},
                        {"y", al->crop_rect.y},
                        {"width", al->crop_rect.width},
                        {"height", al->crop_rect.height}};
    doc["homography"] = json::array();
    for (int r = 0; r < 3; ++r) {
      doc["homography"].push_back({al->homography[r * 3], al->homography[r * 3 + 1],
                                   al->homography[r * 3 + 2]});
    }
  } else {
    doc["crop_rect"] = nullptr;
    doc["homography"] = nullptr;
  }

  const SegmentationSummary* sg = segmentation ? &*segmentation : nullptr;
  doc["mu"] = sg ? json(sg->mu) : json(nullptr);
  doc["sigma"] = sg ? json(sg->sigma) : json(nullptr);
  doc["k"] = sg ? json(sg->k) : json(nullptr);
  doc["tau"] = sg ? json(sg->tau) : json(nullptr);
  doc["domain_pixels"] = sg ? json(sg->domain_pixels) : json(nullptr);
  doc["mask_pixels"] = sg ? json(sg->mask_pixels) : json(nullptr);
  doc["mask_area_fraction"] = sg ? json(sg->mask_area_fraction) : json(nullptr);
  doc["delta_l_mean"] = sg ? opt(sg->delta_l_mean) : json(nullptr);
  doc["delta_b_mean"] = sg ? opt(sg->delta_b_mean) : json(nullptr);

  doc["artifacts"] = artifacts;

  if (adapter) {
    doc["adapter"] = {{"command", adapter->command},
                      {"source_prompt", adapter->source_prompt},
                      {"edit_prompt", adapter->edit_prompt},
                      {"steps", adapter->steps},
                      {"guidance", adapter->guidance},
                      {"seed", adapter->seed},
                      {"model_ids", adapter->model_ids},
                      {"elapsed_s", adapter->elapsed_s}};
  } else {
    doc["adapter"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t secs = system_clock::to_time_t(now);
  const auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(millis));
  return buf;
}

void write_report(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write report " + path.string());
  out << report.to_json();
  if (!out) throw Error(ErrorKind::Io, "failed writing report " + path.string());
}

}  // namespace erysegm
