#pragma once

// Ten passes by the home team (attacking +x) against a back line of nine
// away defenders in rows at x = 20-24, 40-44 and 60-64. The camera maps a
// 1920x1080 frame linearly onto the pitch.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "orient/orient.hpp"

namespace fixture {

using namespace orient;

inline ImageCorners flat_camera() {
  return {ImagePoint{0, 0}, ImagePoint{1920, 0}, ImagePoint{1920, 1080}, ImagePoint{0, 1080}};
}

inline BoundingBox box_at(FieldPoint f) {
  const double fx = f.x * 1920.0 / 105.0, fy = (68.0 - f.y) * 1080.0 / 68.0;
  return {fx - 5.0, fy - 40.0, 10.0, 40.0};
}

struct Maps {
  std::vector<FrameRecord> frames;
  std::vector<PassEvent> events;
  std::vector<EstimateRecord> estimates;
  std::size_t skipped_at_kick = 0;  // receiver not estimable at the kick frame
};

inline EstimateRecord est(std::int64_t frame, const std::string& player, int bin, FieldPoint pos) {
  EstimateRecord r;
  r.frame_id = frame;
  r.player_id = player;
  r.argmax_bin = bin;
  r.theta = AngleDeg(bin_center(bin));
  r.alpha_p = r.theta;
  r.c_p = 1.0;
  r.lr = side_of(r.theta);
  r.position = pos;
  return r;
}

inline Maps maps() {
  Maps m;
  const std::array<double, 9> rows{20, 22, 24, 40, 42, 44, 60, 62, 64};
  for (int i = 0; i < 10; ++i) {
    const double ball_x = i < 4 ? 10.0 : i < 7 ? 50.0 : 80.0;
    for (int half = 0; half < 2; ++half) {
      FrameRecord f;
      f.frame_id = 2 * i + half;
      f.corners_image = flat_camera();
      f.ball_field = FieldPoint{ball_x, 34.0};
      for (std::size_t d = 0; d < rows.size(); ++d) {
        PlayerDetection p;
        p.player_id = "a" + std::to_string(d + 1);
        p.team = Team::Away;
        p.bbox = box_at({rows[d], 10.0 + 6.0 * static_cast<double>(d)});
        f.players.push_back(p);
      }
      PlayerDetection keeper;
      keeper.player_id = "a0";
      keeper.team = Team::Away;
      keeper.role = "goalkeeper";
      keeper.bbox = box_at({100, 34});
      f.players.push_back(keeper);
      for (const char* id : {"h1", "h2", "h3"}) {
        PlayerDetection p;
        p.player_id = id;
        p.team = Team::Home;
        p.bbox = box_at({ball_x, 30});
        f.players.push_back(p);
      }
      m.frames.push_back(std::move(f));
    }

    PassEvent e;
    e.event_id = "e" + std::to_string(i);
    e.passer_id = "h1";
    e.receiver_id = i < 5 ? "h2" : "h3";
    e.frame_kick = 2 * i;
    e.frame_receive = 2 * i + 1;
    e.success = i % 3 != 2;
    if (i != 6) {
      e.epv_start = 0.02;
      e.epv_end = 0.05;
    }
    e.attacking_direction = AttackDirection::PositiveX;
    m.events.push_back(e);

    // h2 keeps facing bin 6 at the center spot; h3 turns from bin 9 to 18.
    const FieldPoint centre{52.5, 34};
    m.estimates.push_back(est(2 * i, "h1", 3, {ball_x, 30}));
    if (i < 5) {
      m.estimates.push_back(est(2 * i, "h2", 6, centre));
      m.estimates.push_back(est(2 * i + 1, "h2", 6, centre));
    } else if (i == 8) {
      auto skipped = est(2 * i, "h3", 0, centre);
      skipped.skipped_reason = "MissingShoulders";
      m.estimates.push_back(skipped);
      m.estimates.push_back(est(2 * i + 1, "h3", 18, centre));
      ++m.skipped_at_kick;
    } else {
      m.estimates.push_back(est(2 * i, "h3", 9, {70, 20}));
      m.estimates.push_back(est(2 * i + 1, "h3", 18, {70, 20}));
    }
  }
  return m;
}

/// Parses the document as XML; returns the number of top-level elements, or
/// -1 when it is not well formed.
inline int xml_roots(const std::string& doc) {
  try {
    std::istringstream in(doc);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    int roots = 0;
    for (const auto& child : tree)
      if (child.first != "<xmlcomment>" && child.first != "<xmlattr>") ++roots;
    return roots;
  } catch (const boost::property_tree::xml_parser_error&) {
    return -1;
  }
}

}  // namespace fixture
