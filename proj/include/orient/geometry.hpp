#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "orient/error.hpp"

namespace orient {

/// Displacement in either image or field space.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Pixel coordinates, origin at the top-left of the frame, y growing down.
struct ImagePoint {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator-(ImagePoint a, ImagePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const ImagePoint&, const ImagePoint&) = default;
};

/// Field coordinates in meters. Origin at the bottom-left corner of the pitch
/// template, x along the touchline towards the right goal, y towards the top
/// touchline.
struct FieldPoint {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator-(FieldPoint a, FieldPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend FieldPoint operator+(FieldPoint p, Vec2 v) { return {p.x + v.x, p.y + v.y}; }
  friend bool operator==(const FieldPoint&, const FieldPoint&) = default;
};

inline double distance(FieldPoint a, FieldPoint b) { return (a - b).norm(); }

inline double normalize_degrees(double deg) {
  double v = std::fmod(deg, 360.0);
  if (v < 0.0) v += 360.0;
  if (v >= 360.0) v -= 360.0;  // -tiny + 360 rounds up to 360
  return v;
}

/// Angle in degrees, always kept in [0, 360).
class AngleDeg {
 public:
  constexpr AngleDeg() = default;
  explicit AngleDeg(double deg) : value_(normalize_degrees(deg)) {}

  double value() const { return value_; }
  AngleDeg operator+(double deg) const { return AngleDeg(value_ + deg); }
  AngleDeg operator-(double deg) const { return AngleDeg(value_ - deg); }
  friend bool operator==(const AngleDeg&, const AngleDeg&) = default;

 private:
  double value_ = 0.0;
};

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;
inline constexpr double kRadPerDeg = std::numbers::pi / 180.0;

/// 0 deg = +x, counterclockwise positive (towards +y).
inline AngleDeg angle_of(Vec2 v) {
  if (v.x == 0.0 && v.y == 0.0) throw Error(ErrorKind::ZeroVector, "angle of the zero vector");
  return AngleDeg(std::atan2(v.y, v.x) * kDegPerRad);
}

inline Vec2 rotate(Vec2 v, double deg) {
  const double c = std::cos(deg * kRadPerDeg);
  const double s = std::sin(deg * kRadPerDeg);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 unit_vector(AngleDeg a) {
  return {std::cos(a.value() * kRadPerDeg), std::sin(a.value() * kRadPerDeg)};
}

/// Shortest distance on the circle, in [0, 180].
inline double circular_diff(AngleDeg a, AngleDeg b) {
  const double d = std::abs(a.value() - b.value());
  return std::min(d, 360.0 - d);
}

/// Signed difference a - b wrapped to (-180, 180].
inline double signed_diff(AngleDeg a, AngleDeg b) {
  double d = a.value() - b.value();
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

struct Correspondence {
  ImagePoint image;
  FieldPoint field;
};

/// Projective map from image pixels to field meters. The stored matrix is
/// scaled so that its bottom-right entry is 1.
class Homography {
 public:
  Homography() : m_(Eigen::Matrix3d::Identity()) {}

  /// Throws SingularSolution when `m` cannot be normalized or is singular.
  static Homography from_matrix(const Eigen::Matrix3d& m) {
    if (!m.allFinite()) throw Error(ErrorKind::SingularSolution, "non-finite homography entries");
    if (std::abs(m(2, 2)) < 1e-12)
      throw Error(ErrorKind::SingularSolution, "bottom-right entry is zero, cannot normalize");
    Eigen::Matrix3d n = m / m(2, 2);
    const double scale = n.cwiseAbs().maxCoeff();
    if (std::abs(n.determinant()) < 1e-12 * scale * scale * scale)
      throw Error(ErrorKind::SingularSolution, "homography matrix is singular");
    Homography h;
    h.m_ = n;
    return h;
  }

  const Eigen::Matrix3d& matrix() const { return m_; }

  /// The field-to-image map, with the same normalization.
  Eigen::Matrix3d inverse_matrix() const {
    Eigen::Matrix3d inv = m_.inverse();
    return inv / inv(2, 2);
  }

 private:
  Eigen::Matrix3d m_;
};

inline Vec2 apply_projective(const Eigen::Matrix3d& m, double x, double y) {
  const Eigen::Vector3d r = m * Eigen::Vector3d(x, y, 1.0);
  if (std::abs(r.z()) < 1e-12)
    throw Error(ErrorKind::PointAtInfinity, "point maps to infinity");
  return {r.x() / r.z(), r.y() / r.z()};
}

inline FieldPoint project(const Homography& h, ImagePoint p) {
  const Vec2 r = apply_projective(h.matrix(), p.x, p.y);
  return {r.x, r.y};
}

/// Inverse of project(), used to synthesize image observations.
inline ImagePoint back_project(const Homography& h, FieldPoint p) {
  const Vec2 r = apply_projective(h.inverse_matrix(), p.x, p.y);
  return {r.x, r.y};
}

namespace detail {

/// Similarity taking the points to centroid 0 and mean distance sqrt(2).
inline Eigen::Matrix3d hartley_normalizer(std::span<const Vec2, 4> pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= 4.0;
  cy /= 4.0;
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
  mean_dist /= 4.0;
  const double s = std::numbers::sqrt2 / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cx,
       0.0, s, -s * cy,
       0.0, 0.0, 1.0;
  return t;
}

inline void check_general_position(std::span<const Vec2, 4> pts, const char* which) {
  double scale = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) scale = std::max(scale, (pts[i] - pts[j]).norm());
  if (scale == 0.0 || !std::isfinite(scale))
    throw Error(ErrorKind::DegenerateCorrespondences, std::string(which) + " points coincide");
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if ((pts[i] - pts[j]).norm() <= 1e-9 * scale)
        throw Error(ErrorKind::DegenerateCorrespondences, std::string(which) + " points coincide");
    }
  }
  // Any 3 of 4 points: twice the triangle area against the squared extent.
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::array<Vec2, 3> t{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != skip) t[n++] = pts[i];
    const double cross = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
    if (std::abs(cross) <= 1e-9 * scale * scale)
      throw Error(ErrorKind::DegenerateCorrespondences, std::string(which) + " points contain a collinear triple");
  }
}

}  // namespace detail

/// Four-point DLT with Hartley normalization. The 8x9 system is solved for
/// its null vector through the SVD.
inline Homography estimate_homography(std::span<const Correspondence, 4> corr) {
  std::array<Vec2, 4> img{}, fld{};
  for (std::size_t i = 0; i < 4; ++i) {
    img[i] = {corr[i].image.x, corr[i].image.y};
    fld[i] = {corr[i].field.x, corr[i].field.y};
  }
  detail::check_general_position(img, "image");
  detail::check_general_position(fld, "field");

  const Eigen::Matrix3d t_img = detail::hartley_normalizer(img);
  const Eigen::Matrix3d t_fld = detail::hartley_normalizer(fld);

  Eigen::Matrix<double, 8, 9> a;
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector3d p = t_img * Eigen::Vector3d(img[i].x, img[i].y, 1.0);
    const Eigen::Vector3d q = t_fld * Eigen::Vector3d(fld[i].x, fld[i].y, 1.0);
    const double x = p.x() / p.z(), y = p.y() / p.z();
    const double u = q.x() / q.z(), v = q.y() / q.z();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
    a.row(r + 1) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
  }

  // Pad to square so the full V is available for the null vector.
  Eigen::Matrix<double, 9, 9> sq = Eigen::Matrix<double, 9, 9>::Zero();
  sq.topRows<8>() = a;
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(sq, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) <= 1e-10 * sv(0))
    throw Error(ErrorKind::SingularSolution, "rank-deficient DLT system");

  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2),
        h(3), h(4), h(5),
        h(6), h(7), h(8);
  const Eigen::Matrix3d m = t_fld.inverse() * hn * t_img;
  return Homography::from_matrix(m);
}

inline Homography estimate_homography(const std::array<Correspondence, 4>& corr) {
  return estimate_homography(std::span<const Correspondence, 4>(corr));
}

}  // namespace orient
