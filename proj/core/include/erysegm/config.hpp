#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "erysegm/render.hpp"

namespace erysegm {

/// Settings forwarded to the external synthesis adapter.
struct AdapterConfig {
  std::string command;  ///< empty: no adapter configured
  /// Set when the command came from a command-line flag; the environment
  /// override then does not apply.
  bool command_from_cli = false;
  std::string source_prompt =
      "a photograph of a person's face with red inflamed patches of erythema and rash";
  std::string edit_prompt = "a photograph of a person with clear skin, no redness or rash";
  int steps = 50;
  double guidance = 7.5;
  std::uint64_t seed = 0;
};

/// Environment variable that overrides the configured adapter command.
inline constexpr const char* kAdapterEnvVar = "ERYSEGM_ADAPTER";

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path reference;  ///< empty: synthesise via the adapter
  std::filesystem::path labelmask;  ///< empty: parse via the adapter
  std::filesystem::path class_map;  ///< empty: adapter's table or the shipped default
  std::filesystem::path mask;       ///< `segment`: analysis mask PNG (nonzero = analyse)
  std::filesystem::path valid_mask; ///< `segment`: optional alignment-valid mask PNG
  std::filesystem::path delta_map;  ///< `histogram`: stored delta map
  std::filesystem::path out_dir = "erysegm_out";

  double k = 1.5;
  double ratio_max = 0.75;
  double inlier_px = 3.0;
  int ransac_iters = 2000;
  std::uint64_t seed = 0;
  int max_keypoints = 3000;
  double crop_coverage = 0.999;

  int open_radius = 1;
  int close_radius = 2;
  double min_area_fraction = 0.0005;
  int histogram_bins = 64;

  Rgb overlay_color{255, 0, 0};
  double overlay_alpha = 0.45;
  bool skin_mask = true;
  double max_unknown_label_fraction = 0.01;

  AdapterConfig adapter;

  /// Throws Error(Config) naming the first invalid field.
  void validate() const;
};

/// Overlays the keys present in a JSON config file (kebab-case names, as on
/// the command line) onto `base`. Throws FileNotFound or Config.
PipelineConfig merge_config_file(const PipelineConfig& base, const std::filesystem::path& path);

/// Parses "r,g,b" with each component in [0, 255]. Throws Config.
Rgb parse_rgb(const std::string& text);

/// Adapter command after precedence: CLI flag > ERYSEGM_ADAPTER > config.
std::string resolve_adapter_command(const AdapterConfig& adapter);

}  // namespace erysegm
