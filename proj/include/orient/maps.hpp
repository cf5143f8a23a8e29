#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orient/geometry.hpp"
#include "orient/orientation_pdf.hpp"
#include "orient/pipeline.hpp"
#include "orient/records.hpp"

namespace orient {

enum class GamePhase { BuildUp, Middle, Progression };

inline std::string_view to_string(GamePhase p) {
  switch (p) {
    case GamePhase::BuildUp: return "build_up";
    case GamePhase::Middle: return "middle";
    case GamePhase::Progression: return "progression";
  }
  return "?";
}

inline std::optional<GamePhase> parse_phase(std::string_view s) {
  if (s == "build_up") return GamePhase::BuildUp;
  if (s == "middle") return GamePhase::Middle;
  if (s == "progression") return GamePhase::Progression;
  return std::nullopt;
}

/// Whose orientation an event contributes, and when.
enum class EventKind { PassAsReceiver, Reception, PassAsPasser };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::PassAsReceiver: return "pass_as_receiver";
    case EventKind::Reception: return "reception";
    case EventKind::PassAsPasser: return "pass_as_passer";
  }
  return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  if (s == "pass_as_receiver") return EventKind::PassAsReceiver;
  if (s == "reception") return EventKind::Reception;
  if (s == "pass_as_passer") return EventKind::PassAsPasser;
  return std::nullopt;
}

enum class MetricKind { PassSuccess, AddedEpv };

inline std::string_view to_string(MetricKind m) { return m == MetricKind::PassSuccess ? "pass_success" : "added_epv"; }

inline std::optional<MetricKind> parse_metric_kind(std::string_view s) {
  if (s == "pass_success") return MetricKind::PassSuccess;
  if (s == "added_epv") return MetricKind::AddedEpv;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Game phases

/// k-means with k = 3 on a line. Seeds are the minimum, median and maximum;
/// returns the centroids sorted ascending.
inline std::array<double, 3> kmeans_rows(std::vector<double> values, int max_iterations = 100) {
  if (values.size() < 3) throw Error(ErrorKind::TooFewDefenders, "need at least 3 values");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::array<double, 3> c{sorted.front(), sorted[sorted.size() / 2], sorted.back()};
  std::vector<int> assign(values.size(), -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      int best = 0;
      for (int k = 1; k < 3; ++k)
        if (std::abs(values[i] - c[k]) < std::abs(values[i] - c[best])) best = k;
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::array<double, 3> sum{};
    std::array<int, 3> n{};
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[assign[i]] += values[i];
      ++n[assign[i]];
    }
    for (int k = 0; k < 3; ++k)
      if (n[k] > 0) c[k] = sum[k] / n[k];  // an empty cluster keeps its centroid
  }
  std::sort(c.begin(), c.end());
  return c;
}

/// Position along the direction of attack.
inline double attack_depth(FieldPoint p, AttackDirection dir, const FieldDims& dims) {
  return dir == AttackDirection::PositiveX ? p.x : dims.length - p.x;
}

/// Clusters the defenders into three rows along the attack axis and locates
/// the ball against the row boundaries (midpoints between row centroids).
inline GamePhase classify_phase(std::span<const FieldPoint> defenders, FieldPoint ball, AttackDirection dir,
                                const FieldDims& dims = {}) {
  if (defenders.size() < 3)
    throw Error(ErrorKind::TooFewDefenders, std::to_string(defenders.size()) + " defenders");
  std::vector<double> depth;
  depth.reserve(defenders.size());
  for (const auto& d : defenders) depth.push_back(attack_depth(d, dir, dims));
  const auto rows = kmeans_rows(std::move(depth));
  const double first = 0.5 * (rows[0] + rows[1]);
  const double second = 0.5 * (rows[1] + rows[2]);
  const double b = attack_depth(ball, dir, dims);
  if (b < first) return GamePhase::BuildUp;
  if (b < second) return GamePhase::Middle;
  return GamePhase::Progression;
}

/// Field positions (box foot points) of one team's outfield players.
inline std::vector<FieldPoint> team_positions(const FrameRecord& frame, Team team, const FieldDims& dims) {
  const Homography h = frame_homography(frame, dims);
  std::vector<FieldPoint> out;
  for (const auto& p : frame.players) {
    if (p.team != team || p.is_goalkeeper()) continue;
    out.push_back(project(h, p.bbox.foot()));
  }
  return out;
}

inline GamePhase classify_phase(const FrameRecord& frame, Team defending, FieldPoint ball, AttackDirection dir,
                                const FieldDims& dims = {}) {
  const auto defenders = team_positions(frame, defending, dims);
  return classify_phase(defenders, ball, dir, dims);
}

using PhaseIndex = std::map<std::string, GamePhase>;

/// Phase of every event at its kick frame. Events are left out when the kick
/// frame, the ball, the passer's team or three defenders are missing.
inline PhaseIndex classify_event_phases(std::span<const PassEvent> events, const std::vector<FrameRecord>& frames,
                                        const FieldDims& dims = {}) {
  std::map<std::int64_t, const FrameRecord*> by_id;
  for (const auto& f : frames) by_id[f.frame_id] = &f;
  PhaseIndex out;
  for (const auto& e : events) {
    const auto it = by_id.find(e.frame_kick);
    if (it == by_id.end() || !it->second->ball_field) continue;
    const PlayerDetection* passer = it->second->find_player(e.passer_id);
    if (!passer || passer->team == Team::Unknown) continue;
    const Team defending = passer->team == Team::Home ? Team::Away : Team::Home;
    try {
      out[e.event_id] = classify_phase(*it->second, defending, *it->second->ball_field, e.attacking_direction, dims);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::TooFewDefenders) throw;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Goal-relative orientation

/// 90 when facing the center of the attacked goal; smaller when turned
/// counterclockwise from it (towards the attacker's left), larger when turned
/// clockwise; clamped to [0, 180]. `inverted` mirrors the two sides.
inline double goal_relative_angle(FieldPoint pos, AngleDeg facing, AttackDirection dir, const FieldDims& dims = {},
                                  bool inverted = false) {
  const FieldPoint goal{dir == AttackDirection::PositiveX ? dims.length : 0.0, dims.width / 2.0};
  if (pos == goal) throw Error(ErrorKind::AtGoalCenter, "player stands at the goal center");
  const double delta = signed_diff(facing, angle_of(goal - pos));
  return std::clamp(inverted ? 90.0 + delta : 90.0 - delta, 0.0, 180.0);
}

inline constexpr int kGoalRelativeBins = 12;

inline int goal_relative_bin(double g) {
  return std::clamp(static_cast<int>(std::floor(g / kBinWidthDeg)), 0, kGoalRelativeBins - 1);
}

// ---------------------------------------------------------------------------
// Aggregation

struct MapCell {
  std::size_t count = 0;
  double metric_sum = 0.0;

  std::optional<double> metric_mean() const {
    if (count == 0) return std::nullopt;
    return metric_sum / static_cast<double>(count);
  }
  void add(double metric) {
    ++count;
    metric_sum += metric;
  }
};

/// Which events a map covers. No player id means the whole team.
struct MapQuery {
  std::optional<std::string> player;
  EventKind event_kind = EventKind::PassAsReceiver;
  MetricKind metric_kind = MetricKind::PassSuccess;
  std::optional<GamePhase> phase;

  std::string subject() const { return player ? *player : "team"; }
};

struct SonarData {
  std::array<MapCell, kNumBins> sectors{};
  MapQuery query;
  std::size_t qualifying = 0;
  std::size_t skipped = 0;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& s : sectors) n += s.count;
    return n;
  }
};

struct ReactionData {
  std::array<std::array<MapCell, kNumBins>, kNumBins> cells{};  // [bin at kick][bin at reception]
  MapQuery query;
  std::size_t qualifying = 0;
  std::size_t skipped = 0;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : cells)
      for (const auto& c : row) n += c.count;
    return n;
  }
};

struct OnFieldData {
  std::array<std::array<MapCell, kNumBins>, kGoalRelativeBins> cells{};  // [goal-relative bin][body bin]
  MapQuery query;
  std::size_t qualifying = 0;
  std::size_t skipped = 0;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : cells)
      for (const auto& c : row) n += c.count;
    return n;
  }
};

namespace detail {

inline std::optional<double> event_metric(const PassEvent& e, MetricKind m) {
  if (m == MetricKind::PassSuccess) return e.success ? 1.0 : 0.0;
  return e.added_epv();
}

inline const EstimateRecord* lookup(const EstimateIndex& idx, std::int64_t frame, const std::string& player) {
  const auto it = idx.find({frame, player});
  if (it == idx.end() || !it->second.ok()) return nullptr;
  return &it->second;
}

struct Focus {
  const std::string* player;
  std::int64_t frame;
};

inline Focus focus_of(const PassEvent& e, EventKind k) {
  switch (k) {
    case EventKind::PassAsReceiver: return {&e.receiver_id, e.frame_kick};
    case EventKind::Reception: return {&e.receiver_id, e.frame_receive};
    case EventKind::PassAsPasser: return {&e.passer_id, e.frame_kick};
  }
  return {&e.receiver_id, e.frame_kick};
}

/// Subject and phase filtering. Returns false for events outside the query;
/// sets `unknown_phase` when a phase filter cannot be decided.
inline bool selects(const MapQuery& q, const PassEvent& e, const std::string& focus_player, const PhaseIndex* phases,
                    bool& unknown_phase) {
  unknown_phase = false;
  if (q.player && *q.player != focus_player) return false;
  if (q.phase) {
    if (!phases) {
      unknown_phase = true;
      return true;
    }
    const auto it = phases->find(e.event_id);
    if (it == phases->end()) {
      unknown_phase = true;
      return true;
    }
    if (it->second != *q.phase) return false;
  }
  return true;
}

}  // namespace detail

/// Volume and mean metric of events per orientation bin of the focus player.
inline SonarData orient_sonar(std::span<const PassEvent> events, const EstimateIndex& estimates, const MapQuery& q,
                              const PhaseIndex* phases = nullptr) {
  SonarData out;
  out.query = q;
  for (const auto& e : events) {
    const auto focus = detail::focus_of(e, q.event_kind);
    bool unknown_phase = false;
    if (!detail::selects(q, e, *focus.player, phases, unknown_phase)) continue;
    ++out.qualifying;
    const EstimateRecord* est = detail::lookup(estimates, focus.frame, *focus.player);
    const auto metric = detail::event_metric(e, q.metric_kind);
    if (unknown_phase || !est || !metric) {
      ++out.skipped;
      continue;
    }
    out.sectors[static_cast<std::size_t>(est->argmax_bin)].add(*metric);
  }
  return out;
}

/// Receiver orientation at the kick against orientation at reception.
inline ReactionData reaction_map(std::span<const PassEvent> events, const EstimateIndex& estimates, MapQuery q,
                                 const PhaseIndex* phases = nullptr) {
  q.event_kind = EventKind::Reception;
  ReactionData out;
  out.query = q;
  for (const auto& e : events) {
    bool unknown_phase = false;
    if (!detail::selects(q, e, e.receiver_id, phases, unknown_phase)) continue;
    ++out.qualifying;
    const EstimateRecord* at_kick = detail::lookup(estimates, e.frame_kick, e.receiver_id);
    const EstimateRecord* at_recv = detail::lookup(estimates, e.frame_receive, e.receiver_id);
    const auto metric = detail::event_metric(e, q.metric_kind);
    if (unknown_phase || !at_kick || !at_recv || !metric) {
      ++out.skipped;
      continue;
    }
    out.cells[static_cast<std::size_t>(at_kick->argmax_bin)][static_cast<std::size_t>(at_recv->argmax_bin)].add(*metric);
  }
  return out;
}

/// Receiver orientation relative to the attacked goal against body
/// orientation, both at reception.
inline OnFieldData onfield_map(std::span<const PassEvent> events, const EstimateIndex& estimates, MapQuery q,
                               const FieldDims& dims = {}, bool goal_relative_inverted = false,
                               const PhaseIndex* phases = nullptr) {
  q.event_kind = EventKind::Reception;
  OnFieldData out;
  out.query = q;
  for (const auto& e : events) {
    bool unknown_phase = false;
    if (!detail::selects(q, e, e.receiver_id, phases, unknown_phase)) continue;
    ++out.qualifying;
    const EstimateRecord* est = detail::lookup(estimates, e.frame_receive, e.receiver_id);
    const auto metric = detail::event_metric(e, q.metric_kind);
    if (unknown_phase || !est || !metric) {
      ++out.skipped;
      continue;
    }
    double g = 0.0;
    try {
      g = goal_relative_angle(est->position, est->theta, e.attacking_direction, dims, goal_relative_inverted);
    } catch (const Error&) {
      ++out.skipped;
      continue;
    }
    out.cells[static_cast<std::size_t>(goal_relative_bin(g))][static_cast<std::size_t>(est->argmax_bin)].add(*metric);
  }
  return out;
}

/// Per-player sonars of a team, each placed at the player's mean position
/// over the contributing events.
struct TeamSonar {
  std::map<std::string, SonarData> players;
  std::map<std::string, FieldPoint> positions;
  MapQuery query;
};

inline TeamSonar team_orient_sonar(std::span<const PassEvent> events, const EstimateIndex& estimates, MapQuery q,
                                   const PhaseIndex* phases = nullptr) {
  q.player.reset();
  TeamSonar out;
  out.query = q;
  std::map<std::string, std::pair<Vec2, std::size_t>> pos_sum;
  for (const auto& e : events) {
    const auto focus = detail::focus_of(e, q.event_kind);
    const std::string& id = *focus.player;
    if (out.players.contains(id)) continue;
    MapQuery pq = q;
    pq.player = id;
    out.players.emplace(id, orient_sonar(events, estimates, pq, phases));
  }
  for (const auto& e : events) {
    const auto focus = detail::focus_of(e, q.event_kind);
    bool unknown_phase = false;
    if (!detail::selects(q, e, *focus.player, phases, unknown_phase) || unknown_phase) continue;
    if (const EstimateRecord* est = detail::lookup(estimates, focus.frame, *focus.player)) {
      auto& [sum, n] = pos_sum[*focus.player];
      sum = sum + Vec2{est->position.x, est->position.y};
      ++n;
    }
  }
  for (const auto& [id, acc] : pos_sum)
    out.positions[id] = {acc.first.x / static_cast<double>(acc.second), acc.first.y / static_cast<double>(acc.second)};
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::ordered_json query_json(const MapQuery& q) {
  nlohmann::ordered_json j;
  j["subject"] = q.subject();
  j["event_kind"] = std::string(to_string(q.event_kind));
  j["metric_kind"] = std::string(to_string(q.metric_kind));
  j["phase"] = q.phase ? nlohmann::ordered_json(std::string(to_string(*q.phase))) : nlohmann::ordered_json(nullptr);
  return j;
}

inline nlohmann::ordered_json mean_json(const MapCell& c) {
  const auto m = c.metric_mean();
  return m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json(nullptr);
}

inline std::string mean_csv(const MapCell& c) {
  const auto m = c.metric_mean();
  return m ? text::format_number(*m) : "";
}

template <std::size_t Rows, std::size_t Cols>
nlohmann::ordered_json grid_json(const std::array<std::array<MapCell, Cols>, Rows>& cells) {
  auto counts = nlohmann::ordered_json::array();
  auto means = nlohmann::ordered_json::array();
  for (const auto& row : cells) {
    auto cr = nlohmann::ordered_json::array();
    auto mr = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      cr.push_back(c.count);
      mr.push_back(mean_json(c));
    }
    counts.push_back(cr);
    means.push_back(mr);
  }
  return {{"count", counts}, {"metric_mean", means}};
}

}  // namespace detail

inline std::string to_json(const SonarData& s) {
  nlohmann::ordered_json j;
  j["type"] = "sonar";
  j.update(detail::query_json(s.query));
  j["qualifying"] = s.qualifying;
  j["skipped"] = s.skipped;
  auto sectors = nlohmann::ordered_json::array();
  for (int k = 0; k < kNumBins; ++k) {
    const auto& c = s.sectors[static_cast<std::size_t>(k)];
    sectors.push_back({{"bin", k},
                       {"angle_start", bin_lower_edge(k)},
                       {"count", c.count},
                       {"metric_mean", detail::mean_json(c)}});
  }
  j["sectors"] = sectors;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const SonarData& s) {
  std::string out = "bin,count,metric_mean\n";
  for (int k = 0; k < kNumBins; ++k) {
    const auto& c = s.sectors[static_cast<std::size_t>(k)];
    out += std::to_string(k) + "," + std::to_string(c.count) + "," + detail::mean_csv(c) + "\n";
  }
  return out;
}

inline std::string to_json(const ReactionData& r) {
  nlohmann::ordered_json j;
  j["type"] = "reaction";
  j.update(detail::query_json(r.query));
  j["qualifying"] = r.qualifying;
  j["skipped"] = r.skipped;
  j["rows"] = "bin_kick";
  j["cols"] = "bin_receive";
  j.update(detail::grid_json(r.cells));
  return j.dump(2) + "\n";
}

inline std::string to_csv(const ReactionData& r) {
  std::string out = "bin_kick,bin_receive,count,metric_mean\n";
  for (std::size_t a = 0; a < r.cells.size(); ++a)
    for (std::size_t b = 0; b < r.cells[a].size(); ++b)
      out += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(r.cells[a][b].count) + "," +
             detail::mean_csv(r.cells[a][b]) + "\n";
  return out;
}

inline std::string to_json(const OnFieldData& o) {
  nlohmann::ordered_json j;
  j["type"] = "onfield";
  j.update(detail::query_json(o.query));
  j["qualifying"] = o.qualifying;
  j["skipped"] = o.skipped;
  j["rows"] = "goal_relative_bin";
  j["cols"] = "body_bin";
  j.update(detail::grid_json(o.cells));
  return j.dump(2) + "\n";
}

inline std::string to_csv(const OnFieldData& o) {
  std::string out = "goal_relative_bin,body_bin,count,metric_mean\n";
  for (std::size_t a = 0; a < o.cells.size(); ++a)
    for (std::size_t b = 0; b < o.cells[a].size(); ++b)
      out += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(o.cells[a][b].count) + "," +
             detail::mean_csv(o.cells[a][b]) + "\n";
  return out;
}

inline std::string to_json(const TeamSonar& t) {
  nlohmann::ordered_json j;
  j["type"] = "team_sonar";
  j.update(detail::query_json(t.query));
  auto players = nlohmann::ordered_json::array();
  for (const auto& [id, s] : t.players) {
    nlohmann::ordered_json p;
    p["player_id"] = id;
    const auto pos = t.positions.find(id);
    p["position"] = pos != t.positions.end() ? nlohmann::ordered_json({pos->second.x, pos->second.y})
                                            : nlohmann::ordered_json(nullptr);
    p["qualifying"] = s.qualifying;
    p["skipped"] = s.skipped;
    auto counts = nlohmann::ordered_json::array();
    auto means = nlohmann::ordered_json::array();
    for (const auto& c : s.sectors) {
      counts.push_back(c.count);
      means.push_back(detail::mean_json(c));
    }
    p["count"] = counts;
    p["metric_mean"] = means;
    players.push_back(p);
  }
  j["players"] = players;
  return j.dump(2) + "\n";
}

}  // namespace orient
