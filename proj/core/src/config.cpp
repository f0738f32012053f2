#include "erysegm/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

template <typename T>
void read_key(const nlohmann::json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("config key '") + key + "': " + e.what());
  }
}

void read_path(const nlohmann::json& doc, const char* key, std::filesystem::path& out) {
  std::string s;
  if (!doc.contains(key)) return;
  read_key(doc, key, s);
  out = s;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!std::isfinite(k)) bad("k must be finite");
  if (!(ratio_max > 0.0 && ratio_max <= 1.0)) bad("ratio-max must be in (0, 1]");
  if (!(inlier_px > 0.0) || !std::isfinite(inlier_px)) bad("inlier-px must be positive");
  if (ransac_iters < 1) bad("ransac-iters must be >= 1");
  if (max_keypoints < 4) bad("max-keypoints must be >= 4");
  if (!(crop_coverage > 0.0 && crop_coverage <= 1.0)) bad("crop-coverage must be in (0, 1]");
  if (open_radius < 0 || close_radius < 0) bad("morphology radii must be >= 0");
  if (!(min_area_fraction >= 0.0 && min_area_fraction <= 1.0)) {
    bad("min-area-fraction must be in [0, 1]");
  }
  if (histogram_bins < 1) bad("histogram-bins must be >= 1");
  if (!(overlay_alpha >= 0.0 && overlay_alpha <= 1.0)) bad("overlay-alpha must be in [0, 1]");
  if (!(max_unknown_label_fraction >= 0.0 && max_unknown_label_fraction <= 1.0)) {
    bad("max-unknown-label-fraction must be in [0, 1]");
  }
  if (out_dir.empty()) bad("out-dir must not be empty");
  if (adapter.steps < 1) bad("steps must be >= 1");
  if (!(adapter.guidance >= 0.0) || !std::isfinite(adapter.guidance)) {
    bad("guidance must be finite and >= 0");
  }
}

Rgb parse_rgb(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  Rgb out{};
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) bad("color '" + text + "' must have three components");
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0' || v < 0 || v > 255) {
      bad("color component '" + item + "' must be an integer in [0, 255]");
    }
    out[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(v);
  }
  if (i != 3) bad("color '" + text + "' must have three components");
  return out;
}

PipelineConfig merge_config_file(const PipelineConfig& base, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    bad("config file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) bad("config file " + path.string() + " must hold a JSON object");

  PipelineConfig cfg = base;
  read_path(doc, "input", cfg.input);
  read_path(doc, "reference", cfg.reference);
  read_path(doc, "labelmask", cfg.labelmask);
  read_path(doc, "class-map", cfg.class_map);
  read_path(doc, "mask", cfg.mask);
  read_path(doc, "valid-mask", cfg.valid_mask);
  read_path(doc, "delta-map", cfg.delta_map);
  read_path(doc, "out-dir", cfg.out_dir);
  read_key(doc, "k", cfg.k);
  read_key(doc, "ratio-max", cfg.ratio_max);
  read_key(doc, "inlier-px", cfg.inlier_px);
  read_key(doc, "ransac-iters", cfg.ransac_iters);
  read_key(doc, "seed", cfg.seed);
  read_key(doc, "max-keypoints", cfg.max_keypoints);
  read_key(doc, "crop-coverage", cfg.crop_coverage);
  read_key(doc, "open-radius", cfg.open_radius);
  read_key(doc, "close-radius", cfg.close_radius);
  read_key(doc, "min-area-fraction", cfg.min_area_fraction);
  read_key(doc, "histogram-bins", cfg.histogram_bins);
  if (doc.contains("overlay-color")) {
    std::string color;
    read_key(doc, "overlay-color", color);
    cfg.overlay_color = parse_rgb(color);
  }
  read_key(doc, "overlay-alpha", cfg.overlay_alpha);
  if (doc.contains("no-skin-mask")) {
    bool no_skin = false;
    read_key(doc, "no-skin-mask", no_skin);
    cfg.skin_mask = !no_skin;
  }
  read_key(doc, "max-unknown-label-fraction", cfg.max_unknown_label_fraction);
  read_key(doc, "adapter-command", cfg.adapter.command);
  read_key(doc, "source-prompt", cfg.adapter.source_prompt);
  read_key(doc, "edit-prompt", cfg.adapter.edit_prompt);
  read_key(doc, "steps", cfg.adapter.steps);
  read_key(doc, "guidance", cfg.adapter.guidance);
  read_key(doc, "adapter-seed", cfg.adapter.seed);
  return cfg;
}

std::string resolve_adapter_command(const AdapterConfig& adapter) {
  if (adapter.command_from_cli) return adapter.command;
  if (const char* env = std::getenv(kAdapterEnvVar); env != nullptr && *env != '\0') return env;
  return adapter.command;
}

}  // namespace erysegm
