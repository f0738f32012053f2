#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "erysegm/image.hpp"

namespace erysegm {

/// Signed a* difference (original - reference) on a pixel domain. Positive
/// values mean the original is redder.
struct DeltaMap {
  int width = 0;
  int height = 0;
  std::vector<float> delta_a;
  BinaryMask domain;

  int domain_pixels() const { return static_cast<int>(domain.count()); }
};

struct DeltaStats {
  double mu = 0.0;
  double sigma = 0.0;  ///< population standard deviation (divisor n)
  double k = 0.0;
  double tau = 0.0;    ///< mu + k * sigma
  std::size_t n = 0;
};

struct HistogramData {
  std::vector<double> bin_edges;  ///< ascending, size = counts.size() + 1
  std::vector<std::size_t> counts;
  double mu = 0.0;
  double tau = 0.0;

  std::size_t total() const;
};

struct PostprocessParams {
  int open_radius = 1;
  int close_radius = 2;
  std::size_t min_area = 0;
};

/// Default minimum component area as a fraction of the analysis domain.
inline constexpr double kDefaultMinAreaFraction = 0.0005;

inline constexpr double kDefaultK = 1.5;

/// Throws DimensionMismatch when the images and mask disagree in size.
DeltaMap delta_a(const LabImage& original, const LabImage& reference, const BinaryMask& mask);

/// Mean and population standard deviation over the domain (compensated
/// summation). Throws EmptyDomain.
DeltaStats delta_stats(const DeltaMap& map, double k = kDefaultK);

/// Domain pixels with delta_a strictly greater than tau.
BinaryMask threshold_mask(const DeltaMap& map, const DeltaStats& stats);

/// Open, close, then drop 8-connected components below `min_area`.
BinaryMask postprocess(const BinaryMask& mask, const PostprocessParams& params);

/// Equal-width bins over [min, max] of the domain values; a single-valued
/// domain yields one degenerate bin. Throws EmptyDomain; bins must be >= 1.
HistogramData histogram(const DeltaMap& map, const DeltaStats& stats, int bins = 64);

/// CSV with header `bin_lo,bin_hi,count`.
std::string histogram_csv(const HistogramData& hist);

/// Mean L* and b* differences over a domain, for diagnostics only.
struct ChannelMeans {
  double delta_l = 0.0;
  double delta_b = 0.0;
};
ChannelMeans delta_lb_means(const LabImage& original, const LabImage& reference,
                            const BinaryMask& domain);

/// Binary serialisation of a DeltaMap (`ERYDMAP1`, little-endian u32 width,
/// u32 height, f32 values, u8 domain flags).
void save_delta_map(const DeltaMap& map, const std::filesystem::path& path);
DeltaMap load_delta_map(const std::filesystem::path& path);

}  // namespace erysegm
