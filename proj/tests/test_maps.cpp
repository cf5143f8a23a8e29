#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gen.hpp"

using namespace orient;

namespace {

std::vector<FieldPoint> rows_at(std::initializer_list<double> xs) {
  std::vector<FieldPoint> out;
  double y = 5;
  for (double x : xs) out.push_back({x, y += 5});
  return out;
}

const auto kRows = rows_at({20, 22, 24, 40, 42, 44, 60, 62, 64});

}  // namespace

TEST(Phase, Examples) {
  EXPECT_EQ(classify_phase(kRows, {10, 34}, AttackDirection::PositiveX), GamePhase::BuildUp);
  EXPECT_EQ(classify_phase(kRows, {50, 34}, AttackDirection::PositiveX), GamePhase::Middle);
  EXPECT_EQ(classify_phase(kRows, {80, 34}, AttackDirection::PositiveX), GamePhase::Progression);
  try {
    classify_phase(rows_at({20, 40}), {10, 34}, AttackDirection::PositiveX);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewDefenders);
  }
}

TEST(Phase, KMeansSeparatesRows) {
  const auto c = kmeans_rows({64, 20, 42, 22, 60, 24, 44, 40, 62});
  EXPECT_DOUBLE_EQ(c[0], 22.0);
  EXPECT_DOUBLE_EQ(c[1], 42.0);
  EXPECT_DOUBLE_EQ(c[2], 62.0);
}

TEST(Phase, RelabelAndMirrorInvariantProperty) {
  gen::Rng rng(77);
  const FieldDims dims;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<FieldPoint> d;
    const int n = rng.integer(3, 10);
    for (int i = 0; i < n; ++i) d.push_back({rng.uniform(0, 105), rng.uniform(0, 68)});
    const FieldPoint ball{rng.uniform(0, 105), rng.uniform(0, 68)};
    const auto base = classify_phase(d, ball, AttackDirection::PositiveX);
    auto shuffled = d;
    std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
    EXPECT_EQ(classify_phase(shuffled, ball, AttackDirection::PositiveX), base);
    std::vector<FieldPoint> mirrored;
    for (const auto& p : d) mirrored.push_back({dims.length - p.x, p.y});
    EXPECT_EQ(classify_phase(mirrored, {dims.length - ball.x, ball.y}, AttackDirection::NegativeX), base);
  }
}

TEST(Phase, FramesSkipGoalkeeper) {
  const auto m = fixture::maps();
  const auto phases = classify_event_phases(m.events, m.frames);
  ASSERT_EQ(phases.size(), 10u);
  EXPECT_EQ(phases.at("e0"), GamePhase::BuildUp);
  EXPECT_EQ(phases.at("e5"), GamePhase::Middle);
  EXPECT_EQ(phases.at("e9"), GamePhase::Progression);
}

TEST(GoalRelative, Examples) {
  const FieldPoint centre{52.5, 34};
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(0), AttackDirection::PositiveX), 90.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(45), AttackDirection::PositiveX), 45.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(315), AttackDirection::PositiveX), 135.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(170), AttackDirection::PositiveX), 0.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(190), AttackDirection::PositiveX), 180.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(180), AttackDirection::NegativeX), 90.0);
  EXPECT_DOUBLE_EQ(goal_relative_angle(centre, AngleDeg(45), AttackDirection::PositiveX, {}, true), 135.0);
  EXPECT_THROW(goal_relative_angle({105, 34}, AngleDeg(0), AttackDirection::PositiveX), Error);
  EXPECT_EQ(goal_relative_bin(90.0), 6);
  EXPECT_EQ(goal_relative_bin(180.0), 11);
}

TEST(Sonar, ThreePassesInOneSector) {
  std::vector<PassEvent> ev;
  std::vector<EstimateRecord> est;
  for (int i = 0; i < 3; ++i) {
    PassEvent e;
    e.event_id = "e" + std::to_string(i);
    e.passer_id = "a";
    e.receiver_id = "b";
    e.frame_kick = 10 * i;
    e.frame_receive = 10 * i + 5;
    e.success = i < 2;
    ev.push_back(e);
    est.push_back(fixture::est(10 * i + 5, "b", 9, {50, 30}));
  }
  MapQuery q;
  q.event_kind = EventKind::Reception;
  const auto s = orient_sonar(ev, index_estimates(est), q);
  EXPECT_EQ(s.sectors[9].count, 3u);
  EXPECT_NEAR(*s.sectors[9].metric_mean(), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(s.total(), 3u);
}

TEST(Sonar, AddedEpvAndSkips) {
  const auto m = fixture::maps();
  const auto idx = index_estimates(m.estimates);
  MapQuery q;
  q.metric_kind = MetricKind::AddedEpv;
  q.player = "h2";
  const auto s = orient_sonar(m.events, idx, q);
  EXPECT_EQ(s.sectors[6].count, 5u);
  EXPECT_NEAR(*s.sectors[6].metric_mean(), 0.03, 1e-15);

  q.player = "h3";  // e6 has no EPV, e8 no estimate at the kick
  const auto t = orient_sonar(m.events, idx, q);
  EXPECT_EQ(t.qualifying, 5u);
  EXPECT_EQ(t.skipped, 2u);
  EXPECT_EQ(t.total(), 3u);
}

TEST(Sonar, CountsAndPhasePartition) {
  const auto m = fixture::maps();
  const auto idx = index_estimates(m.estimates);
  const auto phases = classify_event_phases(m.events, m.frames);
  const auto all = orient_sonar(m.events, idx, MapQuery{});
  EXPECT_EQ(all.total(), m.events.size() - m.skipped_at_kick);
  EXPECT_EQ(all.total(), all.qualifying - all.skipped);
  std::array<std::size_t, kNumBins> sum{};
  for (auto phase : {GamePhase::BuildUp, GamePhase::Middle, GamePhase::Progression}) {
    MapQuery q;
    q.phase = phase;
    const auto s = orient_sonar(m.events, idx, q, &phases);
    for (int k = 0; k < kNumBins; ++k) sum[static_cast<std::size_t>(k)] += s.sectors[static_cast<std::size_t>(k)].count;
  }
  for (int k = 0; k < kNumBins; ++k) EXPECT_EQ(sum[static_cast<std::size_t>(k)], all.sectors[static_cast<std::size_t>(k)].count);

  MapQuery build;
  build.phase = GamePhase::BuildUp;
  EXPECT_EQ(orient_sonar(m.events, idx, build, &phases).total(), 4u);
  EXPECT_EQ(orient_sonar(m.events, idx, build, nullptr).skipped, 10u);  // phase unknown without frames
}

TEST(Reaction, StaticReceiverIsDiagonal) {
  const auto m = fixture::maps();
  const auto idx = index_estimates(m.estimates);
  MapQuery q;
  q.player = "h2";
  const auto r = reaction_map(m.events, idx, q);
  for (int a = 0; a < kNumBins; ++a)
    for (int b = 0; b < kNumBins; ++b)
      EXPECT_EQ(r.cells[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].count, a == 6 && b == 6 ? 5u : 0u);
  q.player = "h3";
  const auto t = reaction_map(m.events, idx, q);
  EXPECT_EQ(t.cells[9][18].count, 4u);
  EXPECT_EQ(t.skipped, 1u);
  EXPECT_EQ(reaction_map({}, idx, MapQuery{}).total(), 0u);
}

TEST(OnField, CentreSpotFacingGoal) {
  const auto m = fixture::maps();
  MapQuery q;
  q.player = "h2";
  const auto o = onfield_map(m.events, index_estimates(m.estimates), q);
  // 7.5 deg counterclockwise of the goal direction reads 82.5.
  EXPECT_EQ(o.cells[5][6].count, 5u);
  EXPECT_EQ(o.total(), 5u);
  EXPECT_EQ(onfield_map({}, {}, MapQuery{}).total(), 0u);

  q.player = "h3";
  q.metric_kind = MetricKind::AddedEpv;
  const auto e = onfield_map(m.events, index_estimates(m.estimates), q);
  EXPECT_EQ(e.skipped, 1u);  // e6 carries no EPV
}

TEST(TeamSonarTest, OnePerReceiver) {
  const auto m = fixture::maps();
  const auto t = team_orient_sonar(m.events, index_estimates(m.estimates), MapQuery{});
  ASSERT_EQ(t.players.size(), 2u);
  EXPECT_EQ(t.players.at("h2").total(), 5u);
  EXPECT_DOUBLE_EQ(t.positions.at("h2").x, 52.5);
  const auto j = nlohmann::json::parse(to_json(t));
  EXPECT_EQ(j["players"].size(), 2u);
}

TEST(Serialization, JsonAndCsvShapes) {
  const auto m = fixture::maps();
  const auto idx = index_estimates(m.estimates);
  const auto s = orient_sonar(m.events, idx, MapQuery{});
  const auto j = nlohmann::json::parse(to_json(s));
  EXPECT_EQ(j["sectors"].size(), 24u);
  EXPECT_EQ(j["sectors"][3]["count"].get<std::size_t>(), s.sectors[3].count);
  const auto csv = to_csv(s);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 25);
  const auto r = to_csv(reaction_map(m.events, idx, MapQuery{}));
  EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), 1 + 24 * 24);
}

TEST(Svg, EmptySonarHasNoWedges) {
  const SonarData empty;
  const auto svg = render_svg(empty);
  EXPECT_EQ(fixture::xml_roots(svg), 1);
  EXPECT_EQ(svg.find("class=\"wedge\""), std::string::npos);
  EXPECT_NE(svg.find("legend"), std::string::npos);
}

TEST(Svg, SingleSectorFullRadius) {
  SonarData s;
  for (int i = 0; i < 10; ++i) s.sectors[4].add(1.0);
  SvgStyle style;
  const auto svg = render_svg(s, style);
  EXPECT_EQ(fixture::xml_roots(svg), 1);
  const auto first = svg.find("class=\"wedge\"");
  ASSERT_NE(first, std::string::npos);
  EXPECT_EQ(svg.find("class=\"wedge\"", first + 1), std::string::npos);
  const std::string r = svg::num(style.size * 0.36);
  EXPECT_NE(svg.find("A " + r + " " + r), std::string::npos);
  // Constant metric: one fill color and the constant in the legend.
  EXPECT_NE(svg.find("fill=\"" + style.high_color + "\""), std::string::npos);
  EXPECT_NE(svg.find(">1.00<"), std::string::npos);
}

TEST(Svg, AllMapsWellFormed) {
  const auto m = fixture::maps();
  const auto idx = index_estimates(m.estimates);
  MapQuery q;
  q.player = "h3 <&> \"odd\"";
  SvgStyle style;
  style.title = "Orient & <co>";
  EXPECT_EQ(fixture::xml_roots(render_svg(orient_sonar(m.events, idx, MapQuery{}), style)), 1);
  EXPECT_EQ(fixture::xml_roots(render_svg(orient_sonar(m.events, idx, q))), 1);
  EXPECT_EQ(fixture::xml_roots(render_svg(reaction_map(m.events, idx, MapQuery{}))), 1);
  EXPECT_EQ(fixture::xml_roots(render_svg(onfield_map(m.events, idx, MapQuery{}))), 1);
  EXPECT_EQ(fixture::xml_roots(render_svg(team_orient_sonar(m.events, idx, MapQuery{}))), 1);
  EXPECT_EQ(fixture::xml_roots("<svg><g></svg>"), -1);
}
