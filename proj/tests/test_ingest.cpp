#include <gtest/gtest.h>

#include "orient/evaluation.hpp"
#include "orient/ingest.hpp"

using namespace orient;

namespace {

const char* kCorners = R"("corners_image":[[0,0],[1920,0],[1920,1080],[0,1080]])";

std::string frame_line(int id, const std::string& players = "[]") {
  return R"({"frame_id":)" + std::to_string(id) + "," + kCorners + R"(,"players":)" + players + "}";
}

std::string keypoints(int n, double c = 0.9) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::string("[100,200,") + std::to_string(c) + "]";
  return s + "]";
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // sentinel: nothing thrown
}

}  // namespace

TEST(Sequence, EmptyFile) { EXPECT_TRUE(parse_sequence("").empty()); }

TEST(Sequence, SortedByFrameId) {
  const auto frames = parse_sequence(frame_line(7) + "\n" + frame_line(3) + "\n");
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].frame_id, 3);
  EXPECT_EQ(frames[1].frame_id, 7);
}

TEST(Sequence, KeypointCountInMessage) {
  const auto line = frame_line(1, R"([{"id":"p1","bbox":[0,0,10,10],"keypoints":)" + keypoints(24) + "}]");
  try {
    parse_sequence(line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("got 24"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Sequence, DuplicateFrame) {
  EXPECT_EQ(kind_of([] { parse_sequence(frame_line(2) + "\n" + frame_line(2)); }), ErrorKind::DuplicateFrame);
}

TEST(Sequence, MissingCorners) {
  EXPECT_EQ(kind_of([] { parse_sequence(R"({"frame_id":1,"players":[]})"); }), ErrorKind::MissingCorners);
  EXPECT_EQ(kind_of([] { parse_sequence(R"({"frame_id":1,"corners_image":null,"players":[]})"); }),
            ErrorKind::MissingCorners);
}

TEST(Sequence, DegenerateCornersRejected) {
  const std::string line = R"({"frame_id":1,"corners_image":[[0,0],[5,5],[10,10],[0,1080]],"players":[]})";
  EXPECT_EQ(kind_of([&] { parse_sequence(line); }), ErrorKind::DegenerateCorrespondences);
}

TEST(Sequence, ConfidencesClampedAndCounted) {
  const auto line = frame_line(1, R"([{"id":"p1","bbox":[0,0,10,10],"keypoints":)" + keypoints(25, 1.5) + "}]");
  LoadStats stats;
  const auto frames = parse_sequence(line, &stats);
  EXPECT_EQ(stats.clamped_confidences, 25u);
  EXPECT_EQ((*frames[0].players[0].keypoints)[BodyPart::Nose].c, 1.0);
}

TEST(Sequence, NullKeypointsAndRole) {
  const auto frames = parse_sequence(
      frame_line(1, R"([{"id":"p1","team":"home","bbox":[0,0,10,10],"keypoints":null,"role":"goalkeeper"}])"));
  const auto& p = frames[0].players[0];
  EXPECT_FALSE(p.keypoints.has_value());
  EXPECT_TRUE(p.is_goalkeeper());
  EXPECT_EQ(p.team, Team::Home);
}

TEST(Sequence, DuplicatePlayerInFrame) {
  const auto line = frame_line(1, R"([{"id":"a","bbox":[0,0,1,1]},{"id":"a","bbox":[0,0,1,1]}])");
  EXPECT_EQ(kind_of([&] { parse_sequence(line); }), ErrorKind::ParseError);
}

TEST(Sequence, RoundTripProperty) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SceneConfig sc;
    sc.frames = 4;
    sc.players_per_frame = 6;
    sc.noise_sigma_px = 1.5;
    sc.confidence_min = 0.2;
    sc.seed = seed;
    const auto scene = synthesize_scene(sc);
    const auto text = serialize_sequence(scene.frames);
    const auto back = parse_sequence(text);
    EXPECT_EQ(back, scene.frames);
    EXPECT_EQ(serialize_sequence(back), text);
  }
}

TEST(GroundTruthFile, NormalizesAngles) {
  const auto t = parse_ground_truth("frame_id,player_id,orientation_deg\n12,p3,370.0\n12,p4,-90\n");
  EXPECT_DOUBLE_EQ(t.at({12, "p3"}).value(), 10.0);
  EXPECT_DOUBLE_EQ(t.at({12, "p4"}).value(), 270.0);
}

TEST(GroundTruthFile, DuplicateKey) {
  EXPECT_EQ(kind_of([] { parse_ground_truth("frame_id,player_id,orientation_deg\n12,p3,1\n12,p3,2\n"); }),
            ErrorKind::DuplicateKey);
}

TEST(GroundTruthFile, HeaderRequired) {
  EXPECT_EQ(kind_of([] { parse_ground_truth("12,p3,1\n"); }), ErrorKind::ParseError);
}

TEST(EventsFile, NoEpvColumns) {
  const auto ev = parse_events(
      "event_id,passer_id,receiver_id,frame_kick,frame_receive,success,attacking_direction\n"
      "e1,a,b,10,20,1,+x\n");
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_TRUE(ev[0].success);
  EXPECT_FALSE(ev[0].epv_start.has_value());
  EXPECT_FALSE(ev[0].added_epv().has_value());
}

TEST(EventsFile, HeaderOnly) {
  EXPECT_TRUE(parse_events("event_id,passer_id,receiver_id,frame_kick,frame_receive,success,attacking_direction\n")
                  .empty());
}

TEST(EventsFile, Invalid) {
  const std::string h = "event_id,passer_id,receiver_id,frame_kick,frame_receive,success,epv_start,epv_end,"
                        "attacking_direction\n";
  EXPECT_EQ(kind_of([&] { parse_events(h + "e1,a,b,1,2,1,0.1,,+x\n"); }), ErrorKind::InvalidEvent);
  EXPECT_EQ(kind_of([&] { parse_events(h + "e1,a,b,2,2,1,,,+x\n"); }), ErrorKind::InvalidEvent);
  EXPECT_EQ(kind_of([&] { parse_events(h + "e1,a,b,1,2,1,,,+x\ne1,a,b,3,4,1,,,+x\n"); }), ErrorKind::InvalidEvent);
  EXPECT_EQ(kind_of([&] { parse_events(h + "e1,a,b,1,2,yes,,,+x\n"); }), ErrorKind::ParseError);
}

TEST(EventsFile, RoundTrip) {
  const std::string text =
      "event_id,passer_id,receiver_id,frame_kick,frame_receive,success,epv_start,epv_end,attacking_direction\n"
      "e1,a,b,1,2,1,0.02,0.05,+x\n"
      "e2,b,a,3,9,0,,,-x\n";
  const auto ev = parse_events(text);
  EXPECT_NEAR(*ev[0].added_epv(), 0.03, 1e-15);
  EXPECT_EQ(serialize_events(ev), text);
}
