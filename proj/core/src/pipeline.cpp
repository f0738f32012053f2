#include "erysegm/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <utility>
#include <vector>

#include "erysegm/adapter.hpp"
#include "erysegm/align.hpp"
#include "erysegm/color.hpp"
#include "erysegm/io.hpp"
#include "erysegm/labels.hpp"
#include "erysegm/mask.hpp"
#include "erysegm/render.hpp"

namespace erysegm {

namespace fs = std::filesystem;

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Config: return "config";
    case Stage::Io: return "io";
    case Stage::Adapter: return "adapter";
    case Stage::Alignment: return "alignment";
    case Stage::Masking: return "masking";
    case Stage::Segmentation: return "segmentation";
  }
  return "unknown";
}

int exit_code(Stage stage) noexcept {
  switch (stage) {
    case Stage::Config: return 1;
    case Stage::Io: return 2;
    case Stage::Adapter: return 3;
    case Stage::Alignment: return 4;
    case Stage::Masking: return 5;
    case Stage::Segmentation: return 6;
  }
  return 1;
}

StageError::StageError(Stage stage, ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(stage)) + " stage: " + message),
      stage_(stage),
      kind_(kind) {}

int StageError::exit_code() const noexcept {
  if (is_io_kind(kind_)) return 2;
  if (kind_ == ErrorKind::Config) return 1;
  return erysegm::exit_code(stage_);
}

namespace {

template <typename F>
auto in_stage(Stage stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.kind(), e.what());
  }
}

[[noreturn]] void config_error(const std::string& message) {
  throw StageError(Stage::Config, ErrorKind::Config, message);
}

fs::path prepare(const PipelineConfig& config, Report& report, const char* command) {
  report.command = command;
  report.started_at = utc_timestamp();
  report.config = config;
  in_stage(Stage::Config, [&] { config.validate(); });
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) config_error("out_dir " + config.out_dir.string() + " is not creatable: " + ec.message());
  return config.out_dir;
}

void finish(Report& report, const fs::path& out) {
  const fs::path path = out / artifact::kReport;
  report.artifacts["report"] = path.string();
  report.finished_at = utc_timestamp();
  in_stage(Stage::Io, [&] { write_report(report, path); });
}

RasterImage load_input(const fs::path& path, const char* what) {
  if (path.empty()) config_error(std::string("missing --") + what);
  return in_stage(Stage::Io, [&] { return load_image(path); });
}

AlignParams align_params(const PipelineConfig& c) {
  AlignParams p;
  p.features.max_keypoints = c.max_keypoints;
  p.ratio_max = c.ratio_max;
  p.ransac.inlier_px = c.inlier_px;
  p.ransac.max_iters = c.ransac_iters;
  p.ransac.seed = c.seed;
  p.crop_coverage = c.crop_coverage;
  return p;
}

AlignmentSummary summarize(const AlignmentResult& al) {
  AlignmentSummary s;
  s.keypoints_a = al.keypoints_a;
  s.keypoints_b = al.keypoints_b;
  s.match_count = al.match_count;
  s.inlier_count = al.inlier_count;
  s.reprojection_rmse = al.reprojection_rmse;
  s.mse_pre = al.mse_pre;
  s.mse_post = al.mse_post;
  s.crop_rect = al.crop;
  s.homography = al.homography.matrix();
  return s;
}

BinaryMask skin_from_labels(const fs::path& labelmask, const fs::path& class_map_path,
                            const PipelineConfig& c, int width, int height) {
  return in_stage(Stage::Masking, [&] {
    const fs::path table = class_map_path.empty() ? default_class_map_path() : class_map_path;
    const ClassMap map = load_class_map(table);
    const LabelMask labels = load_label_mask(labelmask, map, c.max_unknown_label_fraction);
    if (labels.width != width || labels.height != height) {
      throw Error(ErrorKind::DimensionMismatch,
                  "label mask is " + std::to_string(labels.width) + "x" +
                      std::to_string(labels.height) + ", image is " + std::to_string(width) +
                      "x" + std::to_string(height));
    }
    return select_skin(labels);
  });
}

BinaryMask rect_mask(int width, int height, const Rect& r) {
  BinaryMask m(width, height);
  for (int y = r.y; y < r.y + r.height; ++y) {
    for (int x = r.x; x < r.x + r.width; ++x) m.set(x, y, true);
  }
  return m;
}

BinaryMask full_mask(int width, int height) { return rect_mask(width, height, {0, 0, width, height}); }

void put_png(const RasterImage& img, const fs::path& out, const char* name, const char* key,
             Report& report) {
  const fs::path path = out / name;
  in_stage(Stage::Io, [&] { encode_png(img, path); });
  report.artifacts[key] = path.string();
}

void put_mask(const BinaryMask& m, const fs::path& out, const char* name, const char* key,
              Report& report) {
  const fs::path path = out / name;
  in_stage(Stage::Io, [&] { encode_mask_png(m, path); });
  report.artifacts[key] = path.string();
}

// Histogram, mask and overlay artifacts common to pipeline/segment/histogram.
void emit_segmentation(const Segmentation& seg, const RasterImage* original,
                       const PipelineConfig& c, const fs::path& out, Report& report,
                       std::optional<ChannelMeans> lb) {
  const fs::path csv = out / artifact::kHistogramCsv;
  in_stage(Stage::Io, [&] {
    std::ofstream f(csv, std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + csv.string());
    f << histogram_csv(seg.histogram);
    if (!f) throw Error(ErrorKind::Io, "failed writing " + csv.string());
  });
  report.artifacts["histogram_csv"] = csv.string();
  put_png(render_histogram(seg.histogram), out, artifact::kHistogramPng, "histogram_png", report);
  put_mask(seg.mask, out, artifact::kErythemaMask, "erythema_mask", report);
  if (original != nullptr) {
    put_png(render_overlay(*original, seg.mask, c.overlay_color, c.overlay_alpha), out,
            artifact::kOverlay, "overlay", report);
  }

  SegmentationSummary s;
  s.mu = seg.stats.mu;
  s.sigma = seg.stats.sigma;
  s.k = seg.stats.k;
  s.tau = seg.stats.tau;
  s.domain_pixels = seg.delta.domain.count();
  s.mask_pixels = seg.mask.count();
  s.mask_area_fraction =
      static_cast<double>(s.mask_pixels) / static_cast<double>(s.domain_pixels);
  if (lb) {
    s.delta_l_mean = lb->delta_l;
    s.delta_b_mean = lb->delta_b;
  }
  report.segmentation = s;
}

void emit_delta(const Segmentation& seg, const fs::path& out, Report& report) {
  put_png(render_heatmap(seg.delta), out, artifact::kHeatmap, "delta_a_heatmap", report);
  const fs::path dmap = out / artifact::kDeltaMap;
  in_stage(Stage::Io, [&] { save_delta_map(seg.delta, dmap); });
  report.artifacts["delta_map"] = dmap.string();
}

void check_subset_chain(const Segmentation& seg, const BinaryMask& skin, const BinaryMask& valid) {
  if (!is_subset(seg.mask, seg.delta.domain) || !is_subset(seg.delta.domain, skin) ||
      !is_subset(seg.delta.domain, valid)) {
    throw StageError(Stage::Segmentation, ErrorKind::DimensionMismatch,
                     "internal: erythema mask escaped the analysis domain");
  }
}

AdapterProvenance provenance(const AdapterConfig& ad, const SynthResponse& resp) {
  AdapterProvenance p;
  p.command = resolve_adapter_command(ad);
  p.source_prompt = ad.source_prompt;
  p.edit_prompt = ad.edit_prompt;
  p.steps = ad.steps;
  p.guidance = ad.guidance;
  p.seed = ad.seed;
  p.model_ids = resp.model_ids;
  p.elapsed_s = resp.elapsed_s;
  return p;
}

SynthResponse call_adapter(const PipelineConfig& c, const fs::path& out,
                           const std::vector<std::string>& tasks) {
  if (resolve_adapter_command(c.adapter).empty()) {
    config_error(std::string("no reference/label mask given and no adapter configured "
                             "(use --adapter-command or set ") +
                 kAdapterEnvVar + ")");
  }
  if (c.input.empty()) config_error("missing --input");
  return in_stage(Stage::Adapter,
                  [&] { return invoke_synthesizer(c.adapter, c.input, out / "adapter", tasks); });
}

}  // namespace

SegmentParams segment_params(const PipelineConfig& c) {
  SegmentParams p;
  p.k = c.k;
  p.open_radius = c.open_radius;
  p.close_radius = c.close_radius;
  p.min_area_fraction = c.min_area_fraction;
  p.histogram_bins = c.histogram_bins;
  return p;
}

Segmentation segment_delta(DeltaMap delta, const SegmentParams& params) {
  Segmentation seg;
  seg.stats = delta_stats(delta, params.k);
  seg.raw_mask = threshold_mask(delta, seg.stats);
  seg.min_area = static_cast<std::size_t>(
      std::llround(params.min_area_fraction * static_cast<double>(seg.stats.n)));
  const BinaryMask cleaned =
      postprocess(seg.raw_mask, {params.open_radius, params.close_radius, seg.min_area});
  seg.mask = mask_and(cleaned, delta.domain);
  seg.histogram = histogram(delta, seg.stats, params.histogram_bins);
  seg.delta = std::move(delta);
  return seg;
}

Segmentation segment_images(const LabImage& original, const LabImage& reference,
                            const BinaryMask& domain, const SegmentParams& params) {
  return segment_delta(delta_a(original, reference, domain), params);
}

Report run_pipeline(const PipelineConfig& config) {
  Report report;
  const fs::path out = prepare(config, report, "pipeline");
  const RasterImage original = load_input(config.input, "input");

  fs::path reference_path = config.reference;
  fs::path labelmask_path = config.labelmask;
  fs::path class_map_path = config.class_map;
  const bool need_reference = reference_path.empty();
  const bool need_labels = config.skin_mask && labelmask_path.empty();
  if (need_reference || need_labels) {
    std::vector<std::string> tasks;
    if (need_reference) tasks.emplace_back(kTaskSynthesize);
    if (need_labels) tasks.emplace_back(kTaskParseFace);
    const SynthResponse resp = call_adapter(config, out, tasks);
    report.adapter = provenance(config.adapter, resp);
    if (need_reference) reference_path = resp.reference;
    if (need_labels) {
      labelmask_path = resp.labelmask;
      if (class_map_path.empty()) class_map_path = resp.class_map;
    }
  }

  const RasterImage reference = load_input(reference_path, "reference");
  put_png(reference, out, artifact::kReference, "reference", report);

  const AlignmentResult al =
      in_stage(Stage::Alignment, [&] { return align(original, reference, align_params(config)); });
  report.alignment = summarize(al);
  put_png(al.warped_reference, out, artifact::kAligned, "aligned", report);
  put_mask(al.valid_mask, out, artifact::kValidMask, "valid_mask", report);

  const int w = original.width();
  const int h = original.height();
  const BinaryMask skin = config.skin_mask
                              ? skin_from_labels(labelmask_path, class_map_path, config, w, h)
                              : full_mask(w, h);
  put_mask(skin, out, artifact::kSkinMask, "skin_mask", report);
  const BinaryMask domain = mask_and(mask_and(skin, al.valid_mask), rect_mask(w, h, al.crop));

  ChannelMeans lb;
  const Segmentation seg = in_stage(Stage::Segmentation, [&] {
    const LabImage lab_o = srgb_to_lab(original);
    const LabImage lab_r = srgb_to_lab(al.warped_reference);
    Segmentation s = segment_images(lab_o, lab_r, domain, segment_params(config));
    lb = delta_lb_means(lab_o, lab_r, domain);
    return s;
  });
  check_subset_chain(seg, skin, al.valid_mask);

  emit_delta(seg, out, report);
  emit_segmentation(seg, &original, config, out, report, lb);
  finish(report, out);
  return report;
}

Report run_align(const PipelineConfig& config) {
  Report report;
  const fs::path out = prepare(config, report, "align");
  const RasterImage original = load_input(config.input, "input");
  const RasterImage reference = load_input(config.reference, "reference");
  const AlignmentResult al =
      in_stage(Stage::Alignment, [&] { return align(original, reference, align_params(config)); });
  report.alignment = summarize(al);
  put_png(al.warped_reference, out, artifact::kAligned, "aligned", report);
  put_mask(al.valid_mask, out, artifact::kValidMask, "valid_mask", report);
  finish(report, out);
  return report;
}

Report run_segment(const PipelineConfig& config) {
  Report report;
  const fs::path out = prepare(config, report, "segment");
  if (config.skin_mask && config.mask.empty() && config.labelmask.empty()) {
    config_error("segment needs --mask or --labelmask (or --no-skin-mask)");
  }
  const RasterImage original = load_input(config.input, "input");
  const RasterImage reference = load_input(config.reference, "reference");
  const int w = original.width();
  const int h = original.height();
  in_stage(Stage::Segmentation, [&] {
    if (!original.same_size(reference)) {
      throw Error(ErrorKind::DimensionMismatch,
                  "input is " + std::to_string(w) + "x" + std::to_string(h) +
                      ", reference is " + std::to_string(reference.width()) + "x" +
                      std::to_string(reference.height()) + " (segment expects an aligned pair)");
    }
  });

  auto load_plain_mask = [&](const fs::path& path) {
    return in_stage(Stage::Masking, [&] {
      BinaryMask m = load_mask_png(path);
      if (m.width() != w || m.height() != h) {
        throw Error(ErrorKind::DimensionMismatch, path.string() + " does not match the input size");
      }
      return m;
    });
  };
  BinaryMask skin = full_mask(w, h);
  if (!config.mask.empty()) {
    skin = load_plain_mask(config.mask);
  } else if (config.skin_mask) {
    skin = skin_from_labels(config.labelmask, config.class_map, config, w, h);
  }
  const BinaryMask valid = config.valid_mask.empty() ? full_mask(w, h)
                                                     : load_plain_mask(config.valid_mask);
  put_mask(skin, out, artifact::kSkinMask, "skin_mask", report);
  const BinaryMask domain = mask_and(skin, valid);

  ChannelMeans lb;
  const Segmentation seg = in_stage(Stage::Segmentation, [&] {
    const LabImage lab_o = srgb_to_lab(original);
    const LabImage lab_r = srgb_to_lab(reference);
    Segmentation s = segment_images(lab_o, lab_r, domain, segment_params(config));
    lb = delta_lb_means(lab_o, lab_r, domain);
    return s;
  });
  check_subset_chain(seg, skin, valid);

  emit_delta(seg, out, report);
  emit_segmentation(seg, &original, config, out, report, lb);
  finish(report, out);
  return report;
}

Report run_histogram(const PipelineConfig& config) {
  Report report;
  const fs::path out = prepare(config, report, "histogram");
  if (config.delta_map.empty()) config_error("missing --delta-map");
  DeltaMap delta = in_stage(Stage::Io, [&] { return load_delta_map(config.delta_map); });

  std::optional<RasterImage> original;
  if (!config.input.empty()) {
    original = load_input(config.input, "input");
    in_stage(Stage::Segmentation, [&] {
      if (original->width() != delta.width || original->height() != delta.height) {
        throw Error(ErrorKind::DimensionMismatch, "input does not match the delta map size");
      }
    });
  }
  const Segmentation seg = in_stage(
      Stage::Segmentation, [&] { return segment_delta(std::move(delta), segment_params(config)); });
  emit_segmentation(seg, original ? &*original : nullptr, config, out, report, std::nullopt);
  finish(report, out);
  return report;
}

Report run_synth(const PipelineConfig& config) {
  Report report;
  const fs::path out = prepare(config, report, "synth");
  std::vector<std::string> tasks{kTaskSynthesize};
  if (config.skin_mask) tasks.emplace_back(kTaskParseFace);
  const SynthResponse resp = call_adapter(config, out, tasks);
  report.adapter = provenance(config.adapter, resp);

  auto copy_out = [&](const fs::path& from, const char* name, const char* key) {
    const fs::path to = out / name;
    in_stage(Stage::Io, [&] {
      std::error_code ec;
      if (fs::absolute(from, ec) != fs::absolute(to, ec)) {
        fs::copy_file(from, to, fs::copy_options::overwrite_existing, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot copy " + from.string() + ": " + ec.message());
      }
    });
    report.artifacts[key] = to.string();
  };
  copy_out(resp.reference, artifact::kReference, "reference");
  if (!resp.labelmask.empty()) copy_out(resp.labelmask, artifact::kLabelMask, "labelmask");
  if (!resp.class_map.empty()) copy_out(resp.class_map, artifact::kClassMap, "class_map");
  finish(report, out);
  return report;
}

}  // namespace erysegm
