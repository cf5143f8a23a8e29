#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orient/geometry.hpp"

namespace orient {

/// Indices into the 25-point body layout.
enum class BodyPart : std::size_t {
  Nose = 0,
  Neck = 1,
  RShoulder = 2,
  LShoulder = 5,
  MidHip = 8,
  RHip = 9,
  LHip = 12,
  REye = 15,
  LEye = 16,
  REar = 17,
  LEar = 18,
};

inline constexpr std::size_t kNumKeypoints = 25;

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double c = 0.0;  // 0 means undetected

  bool detected() const { return c > 0.0; }
  ImagePoint point() const { return {x, y}; }
  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct Keypoints25 {
  std::array<Keypoint, kNumKeypoints> parts{};

  const Keypoint& operator[](BodyPart p) const { return parts[static_cast<std::size_t>(p)]; }
  Keypoint& operator[](BodyPart p) { return parts[static_cast<std::size_t>(p)]; }
  friend bool operator==(const Keypoints25&, const Keypoints25&) = default;
};

enum class Team { Home, Away, Unknown };

inline std::string_view to_string(Team t) {
  switch (t) {
    case Team::Home: return "home";
    case Team::Away: return "away";
    case Team::Unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<Team> parse_team(std::string_view s) {
  if (s == "home") return Team::Home;
  if (s == "away") return Team::Away;
  if (s == "unknown") return Team::Unknown;
  return std::nullopt;
}

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  /// Ground contact point: bottom center of the box.
  ImagePoint foot() const { return {x + w / 2.0, y + h}; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct PlayerDetection {
  std::string player_id;
  Team team = Team::Unknown;
  BoundingBox bbox;
  std::optional<Keypoints25> keypoints;  // absent: the pose stage found nothing
  std::optional<std::string> role;       // e.g. "goalkeeper"

  bool is_goalkeeper() const { return role && *role == "goalkeeper"; }
  friend bool operator==(const PlayerDetection&, const PlayerDetection&) = default;
};

/// Ordered top-left, top-right, bottom-right, bottom-left as seen in the
/// frame. They pair with field corners (0,W), (L,W), (L,0), (0,0).
using ImageCorners = std::array<ImagePoint, 4>;

struct FrameRecord {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  ImageCorners corners_image{};
  std::vector<PlayerDetection> players;
  std::optional<FieldPoint> ball_field;

  const PlayerDetection* find_player(std::string_view id) const {
    for (const auto& p : players)
      if (p.player_id == id) return &p;
    return nullptr;
  }
  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct FieldDims {
  double length = 105.0;
  double width = 68.0;
};

inline std::array<FieldPoint, 4> field_corners(const FieldDims& dims) {
  return {FieldPoint{0.0, dims.width}, FieldPoint{dims.length, dims.width}, FieldPoint{dims.length, 0.0},
          FieldPoint{0.0, 0.0}};
}

inline std::array<Correspondence, 4> corner_correspondences(const ImageCorners& corners, const FieldDims& dims) {
  const auto field = field_corners(dims);
  std::array<Correspondence, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) c[i] = {corners[i], field[i]};
  return c;
}

inline Homography frame_homography(const FrameRecord& f, const FieldDims& dims) {
  return estimate_homography(corner_correspondences(f.corners_image, dims));
}

using TruthKey = std::pair<std::int64_t, std::string>;
using GroundTruth = std::map<TruthKey, AngleDeg>;

enum class AttackDirection { PositiveX, NegativeX };

inline std::string_view to_string(AttackDirection d) { return d == AttackDirection::PositiveX ? "+x" : "-x"; }

struct PassEvent {
  std::string event_id;
  std::string passer_id;
  std::string receiver_id;
  std::int64_t frame_kick = 0;
  std::int64_t frame_receive = 0;
  bool success = false;
  std::optional<double> epv_start;
  std::optional<double> epv_end;
  AttackDirection attacking_direction = AttackDirection::PositiveX;

  bool has_epv() const { return epv_start.has_value() && epv_end.has_value(); }
  std::optional<double> added_epv() const {
    if (!has_epv()) return std::nullopt;
    return *epv_end - *epv_start;
  }
  friend bool operator==(const PassEvent&, const PassEvent&) = default;
};

}  // namespace orient
