#include "erysegm/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

constexpr int kSampleSize = 4;

// Uniform index in [0, n) from raw engine output, independent of the
// standard library's distribution implementation.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = 0;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<std::size_t>(v % n);
}

struct Score {
  int count = 0;
  double sse = 0.0;
};

double squared_error(const Homography& h, const PointPair& p) {
  const Vec2 q = h.apply(p.src);
  const double dx = q.x - p.dst.x;
  const double dy = q.y - p.dst.y;
  const double e = dx * dx + dy * dy;
  return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

Score score_model(const Homography& h, std::span<const PointPair> pairs, double threshold_sq) {
  Score s;
  for (const auto& p : pairs) {
    const double e = squared_error(h, p);
    if (e <= threshold_sq) {
      ++s.count;
      s.sse += e;
    }
  }
  return s;
}

}  // namespace

int adaptive_iterations(double inlier_ratio, double confidence, int max_iters) {
  if (confidence >= 1.0 || inlier_ratio <= 0.0) return max_iters;
  if (inlier_ratio >= 1.0) return 1;
  const double p_good = std::pow(inlier_ratio, kSampleSize);
  const double denom = std::log1p(-p_good);
  if (!(denom < 0.0)) return max_iters;
  const double needed = std::ceil(std::log1p(-confidence) / denom);
  if (!std::isfinite(needed) || needed >= max_iters) return max_iters;
  return std::max(1, static_cast<int>(needed));
}

RansacResult ransac_homography(std::span<const PointPair> pairs, const RansacParams& params) {
  const std::size_t n = pairs.size();
  if (n < kSampleSize) {
    throw Error(ErrorKind::InsufficientMatches,
                "RANSAC needs at least 4 matches, got " + std::to_string(n));
  }
  const double threshold_sq = params.inlier_px * params.inlier_px;
  std::mt19937_64 rng(params.seed);

  Homography best_model;
  Score best{};
  bool have_model = false;
  int iterations = 0;
  int limit = std::max(1, params.max_iters);
  long long attempts = 0;
  const long long max_attempts = static_cast<long long>(limit) * 100;

  std::array<std::size_t, kSampleSize> idx{};
  std::array<PointPair, kSampleSize> sample{};
  while (iterations < limit && attempts < max_attempts) {
    ++attempts;
    for (int k = 0; k < kSampleSize; ++k) {
      bool fresh = false;
      while (!fresh) {
        idx[k] = draw_index(rng, n);
        fresh = std::find(idx.begin(), idx.begin() + k, idx[k]) == idx.begin() + k;
      }
      sample[k] = pairs[idx[k]];
    }
    const std::array<Vec2, 4> src{sample[0].src, sample[1].src, sample[2].src, sample[3].src};
    const std::array<Vec2, 4> dst{sample[0].dst, sample[1].dst, sample[2].dst, sample[3].dst};
    if (has_collinear_triple(src, 1e-3) || has_collinear_triple(dst, 1e-3)) continue;

    Homography model;
    try {
      model = estimate_homography_dlt(std::span<const PointPair>(sample));
    } catch (const Error&) {
      continue;
    }
    ++iterations;
    const Score s = score_model(model, pairs, threshold_sq);
    if (!have_model || s.count > best.count || (s.count == best.count && s.sse < best.sse)) {
      best = s;
      best_model = model;
      have_model = true;
      const int needed = adaptive_iterations(static_cast<double>(best.count) / n,
                                             params.confidence, params.max_iters);
      limit = std::min(limit, needed);
    }
  }

  if (!have_model || best.count < kSampleSize) {
    throw Error(ErrorKind::NoConsensus,
                "best hypothesis has " + std::to_string(best.count) + " inliers among " +
                    std::to_string(n) + " matches");
  }

  RansacResult result;
  result.consensus_model = best_model;
  result.iterations = iterations;
  std::vector<PointPair> inlier_pairs;
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_error(best_model, pairs[i]) <= threshold_sq) {
      result.inliers.push_back(static_cast<int>(i));
      inlier_pairs.push_back(pairs[i]);
    }
  }
  try {
    result.homography = estimate_homography_dlt(std::span<const PointPair>(inlier_pairs));
  } catch (const Error&) {
    result.homography = best_model;
  }
  double sse = 0.0;
  for (const auto& p : inlier_pairs) {
    const double e = transfer_error(result.homography, p);
    sse += e * e;
  }
  result.rmse = std::sqrt(sse / static_cast<double>(inlier_pairs.size()));
  return result;
}

RansacResult ransac_homography(std::span<const Match> matches, std::span<const Keypoint> kp_a,
                               std::span<const Keypoint> kp_b, const RansacParams& params) {
  std::vector<PointPair> pairs;
  pairs.reserve(matches.size());
  for (const auto& m : matches) {
    if (m.index_a < 0 || m.index_b < 0 || static_cast<std::size_t>(m.index_a) >= kp_a.size() ||
        static_cast<std::size_t>(m.index_b) >= kp_b.size()) {
      throw Error(ErrorKind::OutOfBounds, "match references a keypoint outside its list");
    }
    const Keypoint& a = kp_a[static_cast<std::size_t>(m.index_a)];
    const Keypoint& b = kp_b[static_cast<std::size_t>(m.index_b)];
    pairs.push_back(PointPair{Vec2{b.x, b.y}, Vec2{a.x, a.y}});
  }
  return ransac_homography(std::span<const PointPair>(pairs), params);
}

}  // namespace erysegm
