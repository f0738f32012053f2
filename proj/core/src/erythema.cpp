#include "erysegm/erythema.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "erysegm/error.hpp"
#include "erysegm/mask.hpp"

namespace erysegm {

namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_lab_size(const LabImage& a, const LabImage& b, const BinaryMask& mask) {
  if (a.width != b.width || a.height != b.height || mask.width() != a.width ||
      mask.height() != a.height) {
    throw Error(ErrorKind::DimensionMismatch,
                "delta operands differ: " + std::to_string(a.width) + "x" +
                    std::to_string(a.height) + ", " + std::to_string(b.width) + "x" +
                    std::to_string(b.height) + ", mask " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()));
  }
}

}  // namespace

std::size_t HistogramData::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

DeltaMap delta_a(const LabImage& original, const LabImage& reference, const BinaryMask& mask) {
  require_lab_size(original, reference, mask);
  DeltaMap map{original.width, original.height, std::vector<float>(original.a.size()), mask};
  for (std::size_t i = 0; i < map.delta_a.size(); ++i) {
    map.delta_a[i] = original.a[i] - reference.a[i];
  }
  return map;
}

DeltaStats delta_stats(const DeltaMap& map, double k) {
  const auto bits = map.domain.bits();
  CompensatedSum sum;
  std::size_t n = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    sum.add(map.delta_a[i]);
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::EmptyDomain, "delta map domain is empty");
  const double mu = sum.value() / static_cast<double>(n);
  CompensatedSum sq;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    const double d = map.delta_a[i] - mu;
    sq.add(d * d);
  }
  DeltaStats stats;
  stats.mu = mu;
  stats.sigma = std::sqrt(std::max(0.0, sq.value() / static_cast<double>(n)));
  stats.k = k;
  stats.tau = mu + k * stats.sigma;
  stats.n = n;
  return stats;
}

BinaryMask threshold_mask(const DeltaMap& map, const DeltaStats& stats) {
  BinaryMask out(map.width, map.height);
  auto dst = out.bits();
  const auto dom = map.domain.bits();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = (dom[i] && static_cast<double>(map.delta_a[i]) > stats.tau) ? 1 : 0;
  }
  return out;
}

BinaryMask postprocess(const BinaryMask& mask, const PostprocessParams& params) {
  if (params.open_radius < 0 || params.close_radius < 0) {
    throw std::invalid_argument("postprocess radii must be >= 0");
  }
  BinaryMask out = morph_open(mask, params.open_radius);
  out = morph_close(out, params.close_radius);
  return remove_small_components(out, params.min_area);
}

HistogramData histogram(const DeltaMap& map, const DeltaStats& stats, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  const auto dom = map.domain.bits();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (!dom[i]) continue;
    lo = std::min(lo, static_cast<double>(map.delta_a[i]));
    hi = std::max(hi, static_cast<double>(map.delta_a[i]));
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::EmptyDomain, "histogram of an empty domain");

  HistogramData hist;
  hist.mu = stats.mu;
  hist.tau = stats.tau;
  if (!(hi > lo)) {
    hist.bin_edges = {lo, hi};
    hist.counts = {n};
    return hist;
  }
  const double width = (hi - lo) / bins;
  hist.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i < bins; ++i) hist.bin_edges[static_cast<std::size_t>(i)] = lo + i * width;
  hist.bin_edges.back() = hi;
  hist.counts.assign(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (!dom[i]) continue;
    const double v = map.delta_a[i];
    auto b = static_cast<long long>(std::floor((v - lo) / width));
    b = std::clamp<long long>(b, 0, bins - 1);
    ++hist.counts[static_cast<std::size_t>(b)];
  }
  return hist;
}

std::string histogram_csv(const HistogramData& hist) {
  std::string out = "bin_lo,bin_hi,count\n";
  char line[128];
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%zu\n", hist.bin_edges[i], hist.bin_edges[i + 1],
                  hist.counts[i]);
    out += line;
  }
  return out;
}

ChannelMeans delta_lb_means(const LabImage& original, const LabImage& reference,
                            const BinaryMask& domain) {
  require_lab_size(original, reference, domain);
  CompensatedSum dl;
  CompensatedSum db;
  std::size_t n = 0;
  const auto bits = domain.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    dl.add(static_cast<double>(original.L[i]) - reference.L[i]);
    db.add(static_cast<double>(original.b[i]) - reference.b[i]);
    ++n;
  }
  if (n == 0) return {};
  return ChannelMeans{dl.value() / static_cast<double>(n), db.value() / static_cast<double>(n)};
}

}  // namespace erysegm
