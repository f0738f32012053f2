#include "erysegm/homography.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "erysegm/error.hpp"

namespace erysegm {

namespace {

constexpr double kTinyCorner = 1e-12;

std::array<double, 9> normalise(const std::array<double, 9>& m) {
  std::array<double, 9> out = m;
  double frob = 0.0;
  for (double v : m) frob += v * v;
  frob = std::sqrt(frob);
  if (!(frob > 0.0) || !std::isfinite(frob)) return out;
  if (std::abs(m[8]) > kTinyCorner * frob) {
    for (auto& v : out) v /= m[8];
  } else {
    for (auto& v : out) v /= frob;
  }
  return out;
}

struct Similarity {
  double scale = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

Similarity hartley(const std::vector<Vec2>& pts) {
  Similarity t;
  for (const auto& p : pts) {
    t.cx += p.x;
    t.cy += p.y;
  }
  t.cx /= static_cast<double>(pts.size());
  t.cy /= static_cast<double>(pts.size());
  double mean = 0.0;
  for (const auto& p : pts) mean += std::hypot(p.x - t.cx, p.y - t.cy);
  mean /= static_cast<double>(pts.size());
  if (!(mean > 0.0)) {
    throw Error(ErrorKind::DegenerateConfiguration, "all points coincide");
  }
  t.scale = std::sqrt(2.0) / mean;
  return t;
}

Eigen::Matrix3d to_matrix(const Similarity& t) {
  Eigen::Matrix3d m;
  m << t.scale, 0, -t.scale * t.cx, 0, t.scale, -t.scale * t.cy, 0, 0, 1;
  return m;
}

Vec2 dehomogenise(const Vec3& p) {
  if (p.w == 0.0 || !std::isfinite(p.w)) {
    throw Error(ErrorKind::DegenerateConfiguration, "point at infinity in DLT input");
  }
  return Vec2{p.x / p.w, p.y / p.w};
}

}  // namespace

Homography::Homography(const std::array<double, 9>& h) : h_(normalise(h)) {}

Homography Homography::translation(double tx, double ty) {
  return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Vec2 Homography::apply(Vec2 p) const {
  const double x = h_[0] * p.x + h_[1] * p.y + h_[2];
  const double y = h_[3] * p.x + h_[4] * p.y + h_[5];
  const double w = h_[6] * p.x + h_[7] * p.y + h_[8];
  if (w == 0.0) {
    return Vec2{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return Vec2{x / w, y / w};
}

Vec3 Homography::apply(Vec3 p) const {
  return Vec3{h_[0] * p.x + h_[1] * p.y + h_[2] * p.w, h_[3] * p.x + h_[4] * p.y + h_[5] * p.w,
              h_[6] * p.x + h_[7] * p.y + h_[8] * p.w};
}

double Homography::determinant() const {
  const auto& m = h_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  const auto& m = h_;
  const double det = determinant();
  double frob = 0.0;
  for (double v : m) frob += v * v;
  if (!(std::abs(det) > 1e-12 * frob * std::sqrt(frob)) || !std::isfinite(det)) {
    throw Error(ErrorKind::SingularHomography, "determinant " + std::to_string(det));
  }
  // Adjugate; the overall scale is irrelevant after normalisation.
  return Homography({m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8],
                     m[1] * m[5] - m[2] * m[4], m[5] * m[6] - m[3] * m[8],
                     m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
                     m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7],
                     m[0] * m[4] - m[1] * m[3]});
}

Homography Homography::compose(const Homography& rhs) const {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += (*this)(r, k) * rhs(k, c);
      out[static_cast<std::size_t>(r * 3 + c)] = acc;
    }
  }
  return Homography(out);
}

bool has_collinear_triple(const std::array<Vec2, 4>& pts, double tolerance) {
  static constexpr int kTriples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : kTriples) {
    const Vec2& a = pts[t[0]];
    const Vec2& b = pts[t[1]];
    const Vec2& c = pts[t[2]];
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double scale = std::max({std::hypot(b.x - a.x, b.y - a.y),
                                   std::hypot(c.x - a.x, c.y - a.y),
                                   std::hypot(c.x - b.x, c.y - b.y)});
    if (!(scale > 0.0) || std::abs(cross) <= tolerance * scale * scale) return true;
  }
  return false;
}

Homography estimate_homography_dlt(std::span<const PointPair> pairs) {
  const std::size_t n = pairs.size();
  if (n < 4) {
    throw Error(ErrorKind::InsufficientPoints,
                "homography needs at least 4 correspondences, got " + std::to_string(n));
  }
  std::vector<Vec2> src(n), dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(pairs[i].src.x) || !std::isfinite(pairs[i].src.y) ||
        !std::isfinite(pairs[i].dst.x) || !std::isfinite(pairs[i].dst.y)) {
      throw Error(ErrorKind::DegenerateConfiguration, "non-finite correspondence");
    }
    src[i] = pairs[i].src;
    dst[i] = pairs[i].dst;
  }
  if (n == 4) {
    const std::array<Vec2, 4> s{src[0], src[1], src[2], src[3]};
    const std::array<Vec2, 4> d{dst[0], dst[1], dst[2], dst[3]};
    if (has_collinear_triple(s) || has_collinear_triple(d)) {
      throw Error(ErrorKind::DegenerateConfiguration, "three of four points are collinear");
    }
  }

  const Similarity ts = hartley(src);
  const Similarity td = hartley(dst);

  Eigen::MatrixXd a(2 * static_cast<Eigen::Index>(n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (src[i].x - ts.cx) * ts.scale;
    const double y = (src[i].y - ts.cy) * ts.scale;
    const double u = (dst[i].x - td.cx) * td.scale;
    const double v = (dst[i].y - td.cy) * td.scale;
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(r + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }

  // For n == 4 the system is 8x9; pad with a zero row so the SVD exposes a
  // full 9-column basis.
  if (a.rows() < 9) {
    a.conservativeResize(9, Eigen::NoChange);
    a.row(8).setZero();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // A one-dimensional null space is required: the second-smallest singular
  // value must be clearly non-zero.
  if (!(sv(7) > 1e-10 * sv(0))) {
    throw Error(ErrorKind::DegenerateConfiguration, "rank-deficient DLT system");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d full = to_matrix(td).inverse() * hn * to_matrix(ts);

  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[static_cast<std::size_t>(r * 3 + c)] = full(r, c);
  }
  Homography result(m);
  const double det = result.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-14) {
    throw Error(ErrorKind::DegenerateConfiguration, "estimated homography is singular");
  }
  return result;
}

Homography estimate_homography_dlt(std::span<const HomogeneousPair> pairs) {
  std::vector<PointPair> plain;
  plain.reserve(pairs.size());
  for (const auto& p : pairs) plain.push_back(PointPair{dehomogenise(p.src), dehomogenise(p.dst)});
  return estimate_homography_dlt(std::span<const PointPair>(plain));
}

double transfer_error(const Homography& h, const PointPair& pair) {
  const Vec2 p = h.apply(pair.src);
  const double e = std::hypot(p.x - pair.dst.x, p.y - pair.dst.y);
  return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

}  // namespace erysegm
