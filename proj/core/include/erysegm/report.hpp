#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "erysegm/config.hpp"
#include "erysegm/image.hpp"

namespace erysegm {

inline constexpr int kReportSchemaVersion = 1;

struct AlignmentSummary {
  int keypoints_a = 0;
  int keypoints_b = 0;
  int match_count = 0;
  int inlier_count = 0;
  double reprojection_rmse = 0.0;
  double mse_pre = 0.0;
  double mse_post = 0.0;
  Rect crop_rect;
  std::array<double, 9> homography{};  ///< reference -> original, row-major
};

struct SegmentationSummary {
  double mu = 0.0;
  double sigma = 0.0;
  double k = 0.0;
  double tau = 0.0;
  std::size_t domain_pixels = 0;
  std::size_t mask_pixels = 0;
  double mask_area_fraction = 0.0;
  std::optional<double> delta_l_mean;
  std::optional<double> delta_b_mean;
};

struct AdapterProvenance {
  std::string command;
  std::string source_prompt;
  std::string edit_prompt;
  int steps = 0;
  double guidance = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> model_ids;
  double elapsed_s = 0.0;
};

/// Machine-readable record of one CLI run. Sections that a subcommand does
/// not produce are serialised as null.
struct Report {
  std::string command;
  std::string started_at;
  std::string finished_at;
  PipelineConfig config;
  std::optional<AlignmentSummary> alignment;
  std::optional<SegmentationSummary> segmentation;
  std::optional<AdapterProvenance> adapter;
  std::map<std::string, std::string> artifacts;  ///< name -> path

  std::string to_json() const;
};

/// Current UTC time as ISO-8601 with millisecond precision.
std::string utc_timestamp();

void write_report(const Report& report, const std::filesystem::path& path);

}  // namespace erysegm
