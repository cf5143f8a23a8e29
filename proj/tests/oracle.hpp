#pragma once

// Scalar reference implementations written without the library. Angles are
// whole degrees and fractions are whole tenths, so everything stays in
// integer arithmetic.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace oracle {

inline int bin_of_degree(int alpha) {
  for (int k = 0; k < 24; ++k) {
    const int lo = (270 + 15 * k) % 360;
    if (alpha >= lo && alpha < lo + 15) return k;
  }
  return -1;
}

inline int pose_support(int c_tenths) {
  const int n = 24 * (10 - c_tenths) / 20;  // floor for non-negative operands
  return std::max(n, 1);
}

inline int ball_support_literal(int d_tenths) { return 6 * std::min(d_tenths / 10, 1) + 3; }

inline int ball_support_smooth(int d_tenths) {
  const int r = std::min(d_tenths, 10);
  return (6 * r + 5) / 10 + 3;  // 6r/10 never lands on .5
}

/// Bins covered when `n` bins sit around `center`, the odd one out going
/// below the center.
inline std::set<int> support_bins(int center, int n) {
  std::set<int> out;
  int below = n / 2;
  int above = n - below - 1;
  for (int off = -below; off <= above; ++off) out.insert(((center + off) % 24 + 24) % 24);
  return out;
}

struct P {
  double x, y;
};

inline bool on_segment(P p, P a, P b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  if (std::abs(cross) > 1e-9 * std::max(len, 1.0)) return false;
  return p.x >= std::min(a.x, b.x) - 1e-9 && p.x <= std::max(a.x, b.x) + 1e-9 && p.y >= std::min(a.y, b.y) - 1e-9 &&
         p.y <= std::max(a.y, b.y) + 1e-9;
}

/// Crossing-number test, boundary counted as inside.
inline bool inside(P p, const std::vector<P>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if (on_segment(p, poly[j], poly[i])) return true;
    const P a = poly[j], b = poly[i];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

inline double circ(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace oracle
