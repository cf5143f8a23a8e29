#include <gtest/gtest.h>

#include <filesystem>

#include "gen.hpp"
#include "oracle.hpp"
#include "orient/evaluation.hpp"
#include "orient/png_io.hpp"

using namespace orient;

namespace {

TorsoCrop solid(int w, int h, Rgb color, TorsoImagePoints torso) {
  TorsoCrop c;
  c.width = w;
  c.height = h;
  c.pixels.assign(static_cast<std::size_t>(w * h), color);
  c.torso = torso;
  return c;
}

TorsoImagePoints corners_of(double w, double h) {
  // ls, rs, lh, rh
  return {ImagePoint{0, 0}, ImagePoint{w, 0}, ImagePoint{0, h}, ImagePoint{w, h}};
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST(Mask, FullCrop) {
  const auto mask = trapezoid_mask(solid(10, 10, {}, corners_of(10, 10)));
  EXPECT_EQ(mask.size(), 100u);
}

TEST(Mask, CollinearIsEmpty) {
  const auto crop = solid(10, 10, {}, {ImagePoint{1, 1}, ImagePoint{3, 3}, ImagePoint{5, 5}, ImagePoint{8, 8}});
  EXPECT_EQ(kind_of([&] { trapezoid_mask(crop); }), ErrorKind::EmptyTrapezoid);
}

TEST(Mask, OutOfRasterRejected) {
  const auto crop = solid(10, 10, {}, {ImagePoint{1, 1}, ImagePoint{11, 1}, ImagePoint{1, 5}, ImagePoint{8, 8}});
  EXPECT_EQ(kind_of([&] { trapezoid_mask(crop); }), ErrorKind::InvalidCrop);
}

TEST(Mask, MatchesPointInPolygonOracle) {
  gen::Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = rng.integer(4, 40), h = rng.integer(4, 60);
    // A shoulder line above a hip line, both roughly horizontal.
    const double ys = rng.uniform(0, h * 0.4), yh = rng.uniform(h * 0.6, h);
    TorsoImagePoints t{ImagePoint{rng.uniform(0, w * 0.4), ys}, ImagePoint{rng.uniform(w * 0.6, w), ys},
                       ImagePoint{rng.uniform(0, w * 0.4), yh}, ImagePoint{rng.uniform(w * 0.6, w), yh}};
    if (rng.coin(0.5)) {  // snap to the pixel grid to exercise boundaries
      for (auto& p : t) p = {std::round(p.x * 2) / 2, std::round(p.y * 2) / 2};
    }
    const auto crop = solid(w, h, {}, t);
    const std::vector<oracle::P> poly{{t[0].x, t[0].y}, {t[1].x, t[1].y}, {t[3].x, t[3].y}, {t[2].x, t[2].y}};
    std::set<std::pair<int, int>> expected;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (oracle::inside({c + 0.5, r + 0.5}, poly)) expected.insert({c, r});
    std::set<std::pair<int, int>> got;
    for (const auto& px : trapezoid_mask(crop)) got.insert({px.col, px.row});
    EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(Features, PureRed) {
  const auto f = extract_features(solid(12, 16, {255, 0, 0}, corners_of(12, 16)));
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  for (std::size_t i = 1; i < kHueBins; ++i) EXPECT_EQ(f[i], 0.0);
  EXPECT_DOUBLE_EQ(f[kHueBins + kSatBins - 1], 1.0);
  EXPECT_DOUBLE_EQ(f[kHueBins + kSatBins + kValBins - 1], 1.0);
}

TEST(Features, GrayHasZeroSaturation) {
  const auto f = extract_features(solid(12, 16, {128, 128, 128}, corners_of(12, 16)));
  EXPECT_DOUBLE_EQ(f[kHueBins], 1.0);
}

TEST(Features, ShoulderDistanceOverDiagonal) {
  const double w = 30, h = 40;
  const auto f = extract_features(solid(30, 40, {1, 2, 3}, corners_of(w, h)));
  const std::size_t base = kHueBins + kSatBins + kValBins;
  EXPECT_NEAR(f[base], w / std::sqrt(w * w + h * h), 1e-15);
}

TEST(Features, HistogramsSumToOneProperty) {
  gen::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto crop = solid(20, 30, {}, corners_of(20, 30));
    for (auto& p : crop.pixels)
      p = {static_cast<std::uint8_t>(rng.integer(0, 255)), static_cast<std::uint8_t>(rng.integer(0, 255)),
           static_cast<std::uint8_t>(rng.integer(0, 255))};
    const auto f = extract_features(crop);
    double hs = 0, ss = 0, vs = 0;
    for (std::size_t i = 0; i < kHueBins; ++i) hs += f[i];
    for (std::size_t i = 0; i < kSatBins; ++i) ss += f[kHueBins + i];
    for (std::size_t i = 0; i < kValBins; ++i) vs += f[kHueBins + kSatBins + i];
    EXPECT_NEAR(hs, 1.0, 1e-12);
    EXPECT_NEAR(ss, 1.0, 1e-12);
    EXPECT_NEAR(vs, 1.0, 1e-12);
    for (double v : f) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
  }
}

TEST(Svm, ClassifyTieBreakAndMargin) {
  LinearSvmModel m;
  m.biases = {1, 0, 0};
  auto p = classify(m, {});
  EXPECT_EQ(p.cls, CoarseClass::Front);
  EXPECT_DOUBLE_EQ(p.margin, 1.0);
  m.biases = {0, 0, 0};
  p = classify(m, {});
  EXPECT_EQ(p.cls, CoarseClass::Front);
  EXPECT_DOUBLE_EQ(p.margin, 0.0);
}

TEST(Svm, MissingClass) {
  auto data = separable_coarse_samples(30, 1);
  std::erase_if(data, [](const LabeledFeatures& s) { return s.label == CoarseClass::Side; });
  EXPECT_EQ(kind_of([&] { train_svm(data); }), ErrorKind::MissingClass);
}

TEST(Svm, NonFiniteFeature) {
  auto data = separable_coarse_samples(30, 1);
  data[4].features[7] = std::nan("");
  EXPECT_EQ(kind_of([&] { train_svm(data); }), ErrorKind::NonFiniteFeature);
}

TEST(Svm, SeparableSetAndDeterminism) {
  const auto data = separable_coarse_samples(300, 5);
  const auto a = train_svm(data);
  const auto b = train_svm(data);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.biases, b.biases);
  for (const auto& s : data) EXPECT_EQ(classify(a, s.features).cls, s.label);
}

TEST(Svm, ObjectiveNeverIncreases) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SvmHyperParams hp;
    hp.seed = seed;
    hp.learning_rate = 5.0;  // large steps force rollbacks
    const auto m = train_svm(separable_coarse_samples(120, seed), hp);
    for (std::size_t i = 1; i < m.loss_history.size(); ++i) EXPECT_LE(m.loss_history[i], m.loss_history[i - 1]);
  }
}

TEST(Svm, ModelRoundTrip) {
  const auto m = train_svm(separable_coarse_samples(60, 2));
  const auto back = parse_model(serialize_model(m));
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.biases, m.biases);
  EXPECT_EQ(back.hp, m.hp);
  EXPECT_EQ(kind_of([] { parse_model("{}"); }), ErrorKind::ParseError);
}

TEST(FlipRepair, Rules) {
  PoseEstimate e;
  e.alpha_p = AngleDeg(270);
  e.lr = Side::Right;
  const auto back = validate_flip(e, CoarseClass::Back, 1.0);
  EXPECT_DOUBLE_EQ(back.alpha_p.value(), 90.0);
  EXPECT_EQ(back.lr, Side::Left);
  EXPECT_EQ(validate_flip(e, CoarseClass::Side, 5.0).alpha_p, e.alpha_p);
  e.alpha_p = AngleDeg(90);
  EXPECT_EQ(validate_flip(e, CoarseClass::Front, 0.05).alpha_p, e.alpha_p);
  EXPECT_DOUBLE_EQ(validate_flip(e, CoarseClass::Front, 0.5).alpha_p.value(), 270.0);
  EXPECT_EQ(validate_flip(e, CoarseClass::Front, 0.5, CameraAxis::TowardNegativeY).alpha_p, e.alpha_p);
}

TEST(FlipRepair, ResultAgreesWithPrototypeProperty) {
  gen::Rng rng(12);
  for (int i = 0; i < 5000; ++i) {
    PoseEstimate e;
    e.alpha_p = AngleDeg(rng.uniform(0, 360));
    e.lr = side_of(e.alpha_p);
    const auto cls = rng.coin() ? CoarseClass::Front : CoarseClass::Back;
    const auto out = validate_flip(e, cls, 1.0);
    EXPECT_LE(circular_diff(out.alpha_p, coarse_prototype(cls, CameraAxis::TowardPositiveY)), 90.0 + 1e-9);
    EXPECT_EQ(out.lr, side_of(out.alpha_p));
  }
}

TEST(CropFiles, LabelsAndIndex) {
  const auto labels = parse_crop_labels(
      "crop_filename,label,lsx,lsy,rsx,rsy,lhx,lhy,rhx,rhy\n"
      "a.png,back,1,2,9,2,2,15,8,15\n");
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].label, CoarseClass::Back);
  EXPECT_EQ(labels[0].torso[3], (ImagePoint{8, 15}));
  EXPECT_EQ(kind_of([] { parse_crop_labels("crop_filename,label\nx.png,up,1,2,3,4,5,6,7,8\n"); }),
            ErrorKind::ParseError);
  const auto idx = parse_crop_index(
      "frame_id,player_id,crop_filename,lsx,lsy,rsx,rsy,lhx,lhy,rhx,rhy\n"
      "4,p2,c.png,1,2,9,2,2,15,8,15\n");
  EXPECT_EQ(idx[0].frame_id, 4);
  EXPECT_EQ(idx[0].player_id, "p2");
}

TEST(CropFiles, PngRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "orient_png_test";
  std::filesystem::create_directories(dir);
  auto crop = solid(7, 5, {10, 200, 30}, corners_of(7, 5));
  crop.pixels[3] = {255, 0, 128};
  const auto path = (dir / "crop.png").string();
  write_png(path, crop);
  const auto back = read_png(path, crop.torso);
  EXPECT_EQ(back.width, 7);
  EXPECT_EQ(back.height, 5);
  EXPECT_EQ(back.pixels, crop.pixels);
  EXPECT_EQ(kind_of([&] { read_png((dir / "missing.png").string()); }), ErrorKind::Io);
}
