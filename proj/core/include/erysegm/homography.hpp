#pragma once

#include <array>
#include <span>

namespace erysegm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
};

/// Correspondence `src` -> `dst` in pixel coordinates.
struct PointPair {
  Vec2 src;
  Vec2 dst;
};

/// Correspondence in homogeneous coordinates.
struct HomogeneousPair {
  Vec3 src;
  Vec3 dst;
};

/// 3x3 projective transform, row-major, kept normalised: h[8] == 1 unless
/// that entry is ~0, in which case the Frobenius norm is 1.
class Homography {
 public:
  Homography() : h_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
  explicit Homography(const std::array<double, 9>& h);

  static Homography identity() { return Homography(); }
  static Homography translation(double tx, double ty);

  double operator()(int row, int col) const { return h_[static_cast<std::size_t>(row * 3 + col)]; }
  const std::array<double, 9>& matrix() const { return h_; }

  /// Projects a point; the result is non-finite when it maps to infinity.
  Vec2 apply(Vec2 p) const;
  Vec3 apply(Vec3 p) const;

  double determinant() const;
  /// Throws SingularHomography when |det| is negligible.
  Homography inverse() const;
  Homography compose(const Homography& rhs) const;  ///< this * rhs

 private:
  std::array<double, 9> h_;
};

/// Normalised Direct Linear Transform. Points are Hartley-normalised
/// (centroid at origin, mean distance sqrt(2)) before solving for the null
/// space of the 2n x 9 design matrix. Exact for four non-degenerate pairs,
/// least-squares (algebraic) otherwise.
/// Throws InsufficientPoints (< 4 pairs) or DegenerateConfiguration.
Homography estimate_homography_dlt(std::span<const PointPair> pairs);
Homography estimate_homography_dlt(std::span<const HomogeneousPair> pairs);

/// True if any three of the four points are (numerically) collinear.
bool has_collinear_triple(const std::array<Vec2, 4>& pts, double tolerance = 1e-6);

/// Euclidean distance between H*src and dst (infinity if H*src is at infinity).
double transfer_error(const Homography& h, const PointPair& pair);

}  // namespace erysegm
