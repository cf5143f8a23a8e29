#pragma once

#include <algorithm>
#include <string>

#include "orient/orientation_pdf.hpp"

namespace orient {

/// Share of the pose PDF in the merged estimate.
inline constexpr double kDefaultPoseWeight = 0.7;

struct FusedEstimate {
  OrientationPdf pdf;
  AngleDeg theta;
  int argmax_bin = 0;
  double w = 1.0;
};

/// w * pose + (1 - w) * ball, bin by bin.
inline OrientationPdf merge(const OrientationPdf& pose, const OrientationPdf& ball, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorKind::WeightOutOfRange, "w = " + std::to_string(w));
  OrientationPdf out;
  out.source = PdfSource::Fused;
  for (std::size_t k = 0; k < out.weights.size(); ++k) {
    const double p = pose.weights[k], b = ball.weights[k];
    // Clamping only removes round-off; equal inputs stay equal.
    out.weights[k] = std::clamp(w * p + (1.0 - w) * b, std::min(p, b), std::max(p, b));
  }
  return out;
}

struct Selection {
  AngleDeg theta;
  int argmax_bin = 0;
};

/// Highest bin wins, lowest index on ties; theta is that bin's center.
inline Selection select_orientation(const OrientationPdf& h) {
  int best = 0;
  for (int k = 1; k < kNumBins; ++k)
    if (h[k] > h[best]) best = k;
  return {AngleDeg(bin_center(best)), best};
}

inline FusedEstimate fuse(const OrientationPdf& pose, const OrientationPdf& ball, double w) {
  FusedEstimate f;
  f.pdf = merge(pose, ball, w);
  const auto s = select_orientation(f.pdf);
  f.theta = s.theta;
  f.argmax_bin = s.argmax_bin;
  f.w = w;
  return f;
}

}  // namespace orient
