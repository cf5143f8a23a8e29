#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string_view>

#include "orient/geometry.hpp"

namespace orient {

inline constexpr int kNumBins = 24;
inline constexpr double kBinWidthDeg = 360.0 / kNumBins;  // 15
/// Bin 0 starts here; see bin_lower_edge().
inline constexpr double kBinZeroStartDeg = 270.0;

enum class PdfSource { Pose, Ball, Fused };

inline std::string_view to_string(PdfSource s) {
  switch (s) {
    case PdfSource::Pose: return "pose";
    case PdfSource::Ball: return "ball";
    case PdfSource::Fused: return "fused";
  }
  return "?";
}

enum class Side { Left, Right };

inline std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Right half = angles in [270, 360) u [0, 90) = bins 0..11.
inline Side side_of(AngleDeg a) {
  const double v = a.value();
  return (v < 90.0 || v >= 270.0) ? Side::Right : Side::Left;
}

inline Side side_of_bin(int bin) { return bin < kNumBins / 2 ? Side::Right : Side::Left; }

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

/// Center bin of an angle. The quarter-turn offset re-indexes the circle so
/// that bin 0 begins at 270 deg; angles from 270 deg on wrap back to the
/// start of the histogram.
inline int center_bin(AngleDeg a) {
  const double q = a.value() / kBinWidthDeg;
  const int shifted = static_cast<int>(std::floor(q + kNumBins / 4.0));
  return q < 18.0 ? shifted : shifted - kNumBins;
}

inline double bin_lower_edge(int bin) { return normalize_degrees(kBinZeroStartDeg + kBinWidthDeg * bin); }

inline double bin_center(int bin) {
  return normalize_degrees(kBinZeroStartDeg + kBinWidthDeg * bin + kBinWidthDeg / 2.0);
}

inline int wrap_bin(int bin) { return ((bin % kNumBins) + kNumBins) % kNumBins; }

/// Probability mass over the 24 orientation bins.
struct OrientationPdf {
  std::array<double, kNumBins> weights{};
  PdfSource source = PdfSource::Pose;

  double operator[](int bin) const { return weights[static_cast<std::size_t>(bin)]; }

  double total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

  int support_size() const {
    return static_cast<int>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
  }

  /// True when the non-zero bins form one run on the circle.
  bool contiguous_support() const {
    int runs = 0;
    for (int k = 0; k < kNumBins; ++k) {
      const bool on = (*this)[k] > 0.0;
      const bool prev_on = (*this)[wrap_bin(k - 1)] > 0.0;
      if (on && !prev_on) ++runs;
    }
    const int n = support_size();
    return n == kNumBins || runs == 1;
  }

  bool is_normalized(double tol = 1e-9) const {
    return std::all_of(weights.begin(), weights.end(), [](double w) { return w >= 0.0 && std::isfinite(w); }) &&
           std::abs(total() - 1.0) <= tol;
  }

  /// Structural check for pose and ball PDFs. Fused PDFs may have two runs.
  bool is_valid(double tol = 1e-9) const {
    return is_normalized(tol) && (source == PdfSource::Fused || contiguous_support());
  }

  static OrientationPdf delta(int bin, PdfSource src) {
    OrientationPdf p;
    p.source = src;
    p.weights[static_cast<std::size_t>(wrap_bin(bin))] = 1.0;
    return p;
  }
};

/// Discretized Gaussian over `support` consecutive bins around `center`.
/// The support spans center - floor(n/2) .. center + ceil(n/2) - 1, and the
/// weights follow a Gaussian in bin offset with sigma = max(n/3, 0.5).
inline OrientationPdf discretized_gaussian(int center, int support, PdfSource src) {
  support = std::clamp(support, 1, kNumBins);
  const int lo = -(support / 2);
  const int hi = (support + 1) / 2 - 1;
  const double sigma = std::max(support / 3.0, 0.5);
  OrientationPdf p;
  p.source = src;
  double sum = 0.0;
  for (int off = lo; off <= hi; ++off) {
    const double w = std::exp(-0.5 * (off / sigma) * (off / sigma));
    p.weights[static_cast<std::size_t>(wrap_bin(center + off))] = w;
    sum += w;
  }
  for (auto& w : p.weights) w /= sum;
  return p;
}

}  // namespace orient
