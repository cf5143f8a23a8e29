#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "orient/records.hpp"
#include "orient/text.hpp"

namespace orient {

struct LoadStats {
  std::size_t clamped_confidences = 0;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& reason) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason);
}

inline double json_number(const json& j, std::size_t line, const char* what) {
  if (!j.is_number()) parse_fail(line, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(line, std::string(what) + " must be finite");
  return v;
}

inline std::pair<double, double> json_pair(const json& j, std::size_t line, const char* what) {
  if (!j.is_array() || j.size() != 2) parse_fail(line, std::string(what) + " must be [x, y]");
  return {json_number(j[0], line, what), json_number(j[1], line, what)};
}

inline Keypoints25 parse_keypoints(const json& j, std::size_t line, LoadStats& stats) {
  if (!j.is_array()) parse_fail(line, "keypoints must be an array or null");
  if (j.size() != kNumKeypoints)
    parse_fail(line, "expected 25 keypoints, got " + std::to_string(j.size()));
  Keypoints25 k;
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 3) parse_fail(line, "keypoint " + std::to_string(i) + " must be [x, y, c]");
    auto& kp = k.parts[i];
    kp.x = json_number(e[0], line, "keypoint x");
    kp.y = json_number(e[1], line, "keypoint y");
    kp.c = json_number(e[2], line, "keypoint confidence");
    if (kp.c < 0.0 || kp.c > 1.0) {
      kp.c = std::clamp(kp.c, 0.0, 1.0);
      ++stats.clamped_confidences;
    }
  }
  return k;
}

inline PlayerDetection parse_player(const json& j, std::size_t line, LoadStats& stats) {
  if (!j.is_object()) parse_fail(line, "player entry must be an object");
  PlayerDetection p;
  if (!j.contains("id") || !j["id"].is_string()) parse_fail(line, "player id must be a string");
  p.player_id = j["id"].get<std::string>();
  if (j.contains("team")) {
    if (!j["team"].is_string()) parse_fail(line, "team must be a string");
    const auto team = parse_team(j["team"].get<std::string>());
    if (!team) parse_fail(line, "team must be home, away or unknown");
    p.team = *team;
  }
  if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4)
    parse_fail(line, "bbox must be [x, y, w, h]");
  const auto& b = j["bbox"];
  p.bbox = {json_number(b[0], line, "bbox"), json_number(b[1], line, "bbox"), json_number(b[2], line, "bbox"),
            json_number(b[3], line, "bbox")};
  if (p.bbox.w <= 0.0 || p.bbox.h <= 0.0) parse_fail(line, "bbox width and height must be positive");
  if (j.contains("keypoints") && !j["keypoints"].is_null()) p.keypoints = parse_keypoints(j["keypoints"], line, stats);
  if (j.contains("role") && !j["role"].is_null()) {
    if (!j["role"].is_string()) parse_fail(line, "role must be a string");
    p.role = j["role"].get<std::string>();
  }
  return p;
}

inline FrameRecord parse_frame_line(std::string_view text, std::size_t line, LoadStats& stats) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(line, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_fail(line, "frame must be a JSON object");
  FrameRecord f;
  if (!j.contains("frame_id") || !j["frame_id"].is_number_integer()) parse_fail(line, "frame_id must be an integer");
  f.frame_id = j["frame_id"].get<std::int64_t>();
  if (f.frame_id < 0) parse_fail(line, "frame_id must be non-negative");
  if (j.contains("timestamp")) f.timestamp = json_number(j["timestamp"], line, "timestamp");

  if (!j.contains("corners_image") || j["corners_image"].is_null())
    throw Error(ErrorKind::MissingCorners, "frame " + std::to_string(f.frame_id));
  const auto& c = j["corners_image"];
  if (!c.is_array() || c.size() != 4) throw Error(ErrorKind::MissingCorners, "frame " + std::to_string(f.frame_id) + " needs 4 corners");
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [x, y] = json_pair(c[i], line, "corner");
    f.corners_image[i] = {x, y};
  }

  if (j.contains("ball_field") && !j["ball_field"].is_null()) {
    const auto [x, y] = json_pair(j["ball_field"], line, "ball_field");
    f.ball_field = FieldPoint{x, y};
  }
  if (j.contains("players")) {
    if (!j["players"].is_array()) parse_fail(line, "players must be an array");
    std::set<std::string> seen;
    for (const auto& pj : j["players"]) {
      auto p = parse_player(pj, line, stats);
      if (!seen.insert(p.player_id).second) parse_fail(line, "duplicate player id " + p.player_id);
      f.players.push_back(std::move(p));
    }
  }
  return f;
}

}  // namespace detail

/// Parses JSON Lines frame records. Blank lines are ignored. Records come
/// back sorted by frame_id.
inline std::vector<FrameRecord> parse_sequence(std::string_view content, LoadStats* stats = nullptr,
                                               const FieldDims& dims = {}) {
  LoadStats local;
  std::vector<FrameRecord> frames;
  std::size_t line_no = 0;
  for (const auto& l : text::lines(content)) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    frames.push_back(detail::parse_frame_line(l, line_no, local));
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const FrameRecord& a, const FrameRecord& b) { return a.frame_id < b.frame_id; });
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame_id == frames[i - 1].frame_id)
      throw Error(ErrorKind::DuplicateFrame, "frame " + std::to_string(frames[i].frame_id));
  }
  for (const auto& f : frames) {
    try {
      (void)frame_homography(f, dims);
    } catch (const Error& e) {
      throw Error(e.kind(), "frame " + std::to_string(f.frame_id) + " corners: " + e.what());
    }
  }
  if (stats) *stats = local;
  return frames;
}

inline std::vector<FrameRecord> load_sequence(const std::string& path, LoadStats* stats = nullptr,
                                              const FieldDims& dims = {}) {
  return parse_sequence(text::read_file(path), stats, dims);
}

/// Canonical single-line JSON for one frame.
inline std::string serialize_frame(const FrameRecord& f) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["frame_id"] = f.frame_id;
  j["timestamp"] = f.timestamp;
  oj corners = oj::array();
  for (const auto& c : f.corners_image) corners.push_back({c.x, c.y});
  j["corners_image"] = corners;
  j["ball_field"] = f.ball_field ? oj({f.ball_field->x, f.ball_field->y}) : oj(nullptr);
  oj players = oj::array();
  for (const auto& p : f.players) {
    oj pj;
    pj["id"] = p.player_id;
    pj["team"] = std::string(to_string(p.team));
    pj["bbox"] = {p.bbox.x, p.bbox.y, p.bbox.w, p.bbox.h};
    if (p.keypoints) {
      oj kps = oj::array();
      for (const auto& k : p.keypoints->parts) kps.push_back({k.x, k.y, k.c});
      pj["keypoints"] = kps;
    } else {
      pj["keypoints"] = nullptr;
    }
    if (p.role) pj["role"] = *p.role;
    players.push_back(pj);
  }
  j["players"] = players;
  return j.dump();
}

inline std::string serialize_sequence(const std::vector<FrameRecord>& frames) {
  std::string out;
  for (const auto& f : frames) {
    out += serialize_frame(f);
    out += '\n';
  }
  return out;
}

inline GroundTruth parse_ground_truth(std::string_view content) {
  GroundTruth truth;
  const auto ls = text::lines(content);
  std::size_t line_no = 0;
  bool header_seen = false;
  for (const auto& l : ls) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    const auto fields = text::split_csv(l);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"frame_id", "player_id", "orientation_deg"})
        detail::parse_fail(line_no, "expected header frame_id,player_id,orientation_deg");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) detail::parse_fail(line_no, "expected 3 fields");
    const auto frame = text::parse_int(fields[0]);
    const auto deg = text::parse_double(fields[2]);
    if (!frame || *frame < 0) detail::parse_fail(line_no, "bad frame_id");
    if (fields[1].empty()) detail::parse_fail(line_no, "empty player_id");
    if (!deg || !std::isfinite(*deg)) detail::parse_fail(line_no, "bad orientation_deg");
    TruthKey key{*frame, fields[1]};
    if (!truth.emplace(key, AngleDeg(*deg)).second)
      throw Error(ErrorKind::DuplicateKey, "(" + std::to_string(*frame) + ", " + fields[1] + ")");
  }
  return truth;
}

inline GroundTruth load_ground_truth(const std::string& path) { return parse_ground_truth(text::read_file(path)); }

inline std::string serialize_ground_truth(const GroundTruth& truth) {
  std::string out = "frame_id,player_id,orientation_deg\n";
  for (const auto& [key, angle] : truth)
    out += std::to_string(key.first) + "," + key.second + "," + text::format_number(angle.value()) + "\n";
  return out;
}

inline std::vector<PassEvent> parse_events(std::string_view content) {
  static const std::vector<std::string> kRequired = {"event_id",      "passer_id", "receiver_id",
                                                     "frame_kick",    "frame_receive", "success",
                                                     "attacking_direction"};
  std::vector<PassEvent> events;
  std::unordered_map<std::string, std::size_t> col;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  for (const auto& l : text::lines(content)) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    const auto fields = text::split_csv(l);
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i) col[fields[i]] = i;
      for (const auto& r : kRequired)
        if (!col.contains(r)) detail::parse_fail(line_no, "missing column " + r);
      header_seen = true;
      continue;
    }
    auto field = [&](const std::string& name) -> std::string {
      const auto it = col.find(name);
      if (it == col.end() || it->second >= fields.size()) return {};
      return fields[it->second];
    };
    if (fields.size() > col.size()) detail::parse_fail(line_no, "too many fields");

    PassEvent e;
    e.event_id = field("event_id");
    if (e.event_id.empty()) detail::parse_fail(line_no, "empty event_id");
    e.passer_id = field("passer_id");
    e.receiver_id = field("receiver_id");
    if (e.passer_id.empty() || e.receiver_id.empty()) detail::parse_fail(line_no, "empty passer or receiver id");
    const auto kick = text::parse_int(field("frame_kick"));
    const auto recv = text::parse_int(field("frame_receive"));
    if (!kick || !recv) detail::parse_fail(line_no, "bad frame numbers");
    e.frame_kick = *kick;
    e.frame_receive = *recv;
    const auto succ = field("success");
    if (succ == "1" || succ == "true") e.success = true;
    else if (succ == "0" || succ == "false") e.success = false;
    else detail::parse_fail(line_no, "success must be 0/1");
    const auto es = field("epv_start");
    const auto ee = field("epv_end");
    if (!es.empty()) {
      e.epv_start = text::parse_double(es);
      if (!e.epv_start) detail::parse_fail(line_no, "bad epv_start");
    }
    if (!ee.empty()) {
      e.epv_end = text::parse_double(ee);
      if (!e.epv_end) detail::parse_fail(line_no, "bad epv_end");
    }
    const auto dir = field("attacking_direction");
    if (dir == "+x") e.attacking_direction = AttackDirection::PositiveX;
    else if (dir == "-x") e.attacking_direction = AttackDirection::NegativeX;
    else detail::parse_fail(line_no, "attacking_direction must be +x or -x");

    if (e.epv_start.has_value() != e.epv_end.has_value())
      throw Error(ErrorKind::InvalidEvent, e.event_id + ": epv_start and epv_end must both be present or both absent");
    if (e.frame_kick >= e.frame_receive)
      throw Error(ErrorKind::InvalidEvent, e.event_id + ": frame_kick must precede frame_receive");
    if (!ids.insert(e.event_id).second) throw Error(ErrorKind::InvalidEvent, e.event_id + ": duplicate event_id");
    events.push_back(std::move(e));
  }
  return events;
}

inline std::vector<PassEvent> load_events(const std::string& path) { return parse_events(text::read_file(path)); }

inline std::string serialize_events(const std::vector<PassEvent>& events) {
  std::string out = "event_id,passer_id,receiver_id,frame_kick,frame_receive,success,epv_start,epv_end,attacking_direction\n";
  for (const auto& e : events) {
    out += e.event_id + "," + e.passer_id + "," + e.receiver_id + "," + std::to_string(e.frame_kick) + "," +
           std::to_string(e.frame_receive) + "," + (e.success ? "1" : "0") + "," +
           (e.epv_start ? text::format_number(*e.epv_start) : "") + "," +
           (e.epv_end ? text::format_number(*e.epv_end) : "") + "," + std::string(to_string(e.attacking_direction)) +
           "\n";
  }
  return out;
}

}  // namespace orient
