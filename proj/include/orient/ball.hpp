#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>

#include "orient/geometry.hpp"
#include "orient/orientation_pdf.hpp"

namespace orient {

inline constexpr double kDefaultMaxBallDistance = 30.0;

/// Literal: N_B = 6 * floor(1 - (MD - d) / MD) + 3, with the floor term
/// capped at 1 so that N_B is 3 inside MD and 9 beyond it.
/// Smooth: N_B = round(6 * min(d / MD, 1)) + 3.
enum class BallSupportMode { Literal, Smooth };

inline std::string_view to_string(BallSupportMode m) { return m == BallSupportMode::Literal ? "literal" : "smooth"; }

inline AngleDeg ball_angle(FieldPoint player, FieldPoint ball) {
  if (player == ball) throw Error(ErrorKind::CoincidentWithBall, "player stands on the ball");
  return angle_of(ball - player);
}

inline int ball_support_size(double d, double md, BallSupportMode mode = BallSupportMode::Literal) {
  if (!(md > 0.0)) throw Error(ErrorKind::InvalidConfig, "maximum ball distance must be positive");
  if (mode == BallSupportMode::Smooth)
    return static_cast<int>(std::lround(6.0 * std::min(d / md, 1.0))) + kNumBins / 8;
  const double term = std::floor(1.0 - (md - d) / md);
  return (kNumBins / 4) * static_cast<int>(std::clamp(term, 0.0, 1.0)) + kNumBins / 8;
}

/// Ball PDF for a ball seen at angle `beta` and distance `d`.
inline OrientationPdf ball_pdf(AngleDeg beta, double d, double md, BallSupportMode mode = BallSupportMode::Literal) {
  return discretized_gaussian(center_bin(beta), ball_support_size(d, md, mode), PdfSource::Ball);
}

inline OrientationPdf ball_pdf(FieldPoint player, FieldPoint ball, double md,
                               BallSupportMode mode = BallSupportMode::Literal) {
  return ball_pdf(ball_angle(player, ball), distance(player, ball), md, mode);
}

}  // namespace orient
