#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "erysegm/config.hpp"
#include "erysegm/erythema.hpp"
#include "erysegm/error.hpp"
#include "erysegm/image.hpp"
#include "erysegm/report.hpp"

namespace erysegm {

enum class Stage { Config, Io, Adapter, Alignment, Masking, Segmentation };

std::string_view to_string(Stage stage) noexcept;

/// Process exit status for a stage: 1 config, 2 io, 3 adapter,
/// 4 alignment, 5 masking, 6 segmentation.
int exit_code(Stage stage) noexcept;

/// An Error annotated with the stage it escaped from. File and codec
/// failures report exit 2 and configuration failures exit 1 whichever stage
/// raised them; everything else takes the stage's own code.
class StageError : public std::runtime_error {
 public:
  StageError(Stage stage, ErrorKind kind, const std::string& message);

  Stage stage() const noexcept { return stage_; }
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept;

 private:
  Stage stage_;
  ErrorKind kind_;
};

/// Fixed artifact file names inside out_dir.
namespace artifact {
inline constexpr const char* kReference = "reference.png";
inline constexpr const char* kAligned = "aligned.png";
inline constexpr const char* kValidMask = "valid_mask.png";
inline constexpr const char* kSkinMask = "skin_mask.png";
inline constexpr const char* kHeatmap = "delta_a_heatmap.png";
inline constexpr const char* kHistogramCsv = "histogram.csv";
inline constexpr const char* kHistogramPng = "histogram.png";
inline constexpr const char* kErythemaMask = "erythema_mask.png";
inline constexpr const char* kOverlay = "overlay.png";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kDeltaMap = "delta_a.dmap";
inline constexpr const char* kLabelMask = "labelmask.png";
inline constexpr const char* kClassMap = "class_map.json";
}  // namespace artifact

struct SegmentParams {
  double k = kDefaultK;
  int open_radius = 1;
  int close_radius = 2;
  double min_area_fraction = kDefaultMinAreaFraction;
  int histogram_bins = 64;
};

struct Segmentation {
  DeltaMap delta;
  DeltaStats stats;
  BinaryMask raw_mask;  ///< threshold only
  BinaryMask mask;      ///< post-processed, restricted to the domain
  HistogramData histogram;
  std::size_t min_area = 0;
};

/// Threshold and clean a stored delta map (no colour conversion).
Segmentation segment_delta(DeltaMap delta, const SegmentParams& params);

/// ΔA* segmentation of an aligned pair over `domain`. Throws
/// DimensionMismatch or EmptyDomain.
Segmentation segment_images(const LabImage& original, const LabImage& reference,
                            const BinaryMask& domain, const SegmentParams& params);

SegmentParams segment_params(const PipelineConfig& config);

/// Subcommands. Each writes its artifacts and report.json into out_dir and
/// throws StageError on failure.
Report run_pipeline(const PipelineConfig& config);
Report run_align(const PipelineConfig& config);
Report run_segment(const PipelineConfig& config);
Report run_synth(const PipelineConfig& config);
Report run_histogram(const PipelineConfig& config);

}  // namespace erysegm
