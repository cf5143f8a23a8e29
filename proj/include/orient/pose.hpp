#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

#include "orient/geometry.hpp"
#include "orient/orientation_pdf.hpp"
#include "orient/records.hpp"

namespace orient {

/// Default confidence gap under which a shoulder/hip side disagreement is
/// settled by the face direction.
inline constexpr double kDefaultTiebreakThreshold = 0.4;

struct TorsoProjection {
  FieldPoint l_shoulder, r_shoulder, l_hip, r_hip;
  double c_sh = 0.0;
  double c_hi = 0.0;
  bool hip_substituted = false;
};

enum class TorsoBasis { Shoulders, Hips };

inline std::string_view to_string(TorsoBasis b) { return b == TorsoBasis::Shoulders ? "shoulders" : "hips"; }

struct PoseEstimate {
  AngleDeg alpha_p;
  double c_p = 0.0;
  Side lr = Side::Right;
  TorsoBasis basis = TorsoBasis::Shoulders;
  bool tiebreak_used = false;
};

/// Projects shoulders and hips into the field. A missing left or right hip is
/// replaced by MidHip, and c_hi then multiplies the confidences actually used.
inline TorsoProjection extract_torso(const Keypoints25& k, const Homography& h) {
  const Keypoint& ls = k[BodyPart::LShoulder];
  const Keypoint& rs = k[BodyPart::RShoulder];
  if (!ls.detected() || !rs.detected()) throw Error(ErrorKind::MissingShoulders, "a shoulder keypoint is undetected");

  const Keypoint& lh = k[BodyPart::LHip];
  const Keypoint& rh = k[BodyPart::RHip];
  const Keypoint& mh = k[BodyPart::MidHip];
  if (!lh.detected() && !rh.detected() && !mh.detected())
    throw Error(ErrorKind::MissingHips, "no hip keypoint is detected");

  TorsoProjection t;
  auto pick_hip = [&](const Keypoint& side) -> const Keypoint& {
    if (side.detected()) return side;
    if (!mh.detected()) throw Error(ErrorKind::MissingHips, "hip side undetected and no MidHip to substitute");
    t.hip_substituted = true;
    return mh;
  };
  const Keypoint& l_hip = pick_hip(lh);
  const Keypoint& r_hip = pick_hip(rh);

  t.l_shoulder = project(h, ls.point());
  t.r_shoulder = project(h, rs.point());
  t.l_hip = project(h, l_hip.point());
  t.r_hip = project(h, r_hip.point());
  t.c_sh = ls.c * rs.c;
  t.c_hi = l_hip.c * r_hip.c;
  return t;
}

struct Facing {
  AngleDeg angle;
  Side side = Side::Right;
};

/// Torso normal: the left-to-right vector turned a quarter turn
/// counterclockwise. A player whose left shoulder has the larger y faces +x.
inline Facing facing_angle(FieldPoint left, FieldPoint right) {
  if (left == right) throw Error(ErrorKind::CoincidentParts, "left and right parts coincide");
  const Vec2 lr = right - left;
  const Vec2 normal{-lr.y, lr.x};
  const AngleDeg a = angle_of(normal);
  return {a, side_of(a)};
}

/// Majority vote over the detected face parts relative to the neck in image x.
/// Parts to the left of the neck vote Left. Returns nothing on a tie, with
/// fewer than two face parts, or without a neck.
inline std::optional<Side> face_direction(const Keypoints25& k, bool invert_x = false) {
  const Keypoint& neck = k[BodyPart::Neck];
  if (!neck.detected()) return std::nullopt;
  constexpr std::array kFace{BodyPart::Nose, BodyPart::REye, BodyPart::LEye, BodyPart::REar, BodyPart::LEar};
  int detected = 0, towards_origin = 0, away = 0;
  for (const auto part : kFace) {
    const Keypoint& p = k[part];
    if (!p.detected()) continue;
    ++detected;
    const double dx = p.x - neck.x;
    if (dx < 0.0) ++towards_origin;
    else if (dx > 0.0) ++away;
  }
  if (detected < 2) return std::nullopt;
  std::optional<Side> out;
  if (2 * towards_origin > detected) out = Side::Left;
  else if (2 * away > detected) out = Side::Right;
  if (out && invert_x) out = opposite(*out);
  return out;
}

inline PoseEstimate resolve_pose(const TorsoProjection& t, std::optional<Side> face,
                                 double tiebreak_threshold = kDefaultTiebreakThreshold) {
  const Facing sh = facing_angle(t.l_shoulder, t.r_shoulder);
  // Hips collapse to one point when MidHip stands in for both sides.
  std::optional<Facing> hi;
  if (!(t.l_hip == t.r_hip)) hi = facing_angle(t.l_hip, t.r_hip);

  auto make = [&](TorsoBasis basis, bool tiebreak) {
    const Facing& f = basis == TorsoBasis::Shoulders ? sh : *hi;
    PoseEstimate e;
    e.alpha_p = f.angle;
    e.c_p = std::clamp(basis == TorsoBasis::Shoulders ? t.c_sh : t.c_hi, 0.0, 1.0);
    e.lr = f.side;
    e.basis = basis;
    e.tiebreak_used = tiebreak;
    return e;
  };
  auto by_confidence = [&] { return make(t.c_sh >= t.c_hi ? TorsoBasis::Shoulders : TorsoBasis::Hips, false); };

  if (!hi) return make(TorsoBasis::Shoulders, false);
  if (sh.side == hi->side) return by_confidence();
  if (std::abs(t.c_sh - t.c_hi) < tiebreak_threshold && face) {
    return make(sh.side == *face ? TorsoBasis::Shoulders : TorsoBasis::Hips, true);
  }
  return by_confidence();
}

/// Support size of the pose PDF: max(floor(24 (1 - C_P) / 2), 1).
inline int pose_support_size(double c_p) {
  return std::max(static_cast<int>(std::floor(kNumBins * ((1.0 - c_p) / 2.0))), 1);
}

inline OrientationPdf pose_pdf(const PoseEstimate& e) {
  return discretized_gaussian(center_bin(e.alpha_p), pose_support_size(e.c_p), PdfSource::Pose);
}

}  // namespace orient
