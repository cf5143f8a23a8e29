#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "orient/coarse.hpp"
#include "orient/fusion.hpp"
#include "orient/pipeline.hpp"
#include "orient/records.hpp"

namespace orient {

/// An estimated angle next to its ground truth.
struct AnglePair {
  AngleDeg estimate;
  AngleDeg truth;
};

/// LRV = 1 when the estimate is closer to the truth than its opposite is,
/// measured on the circle.
inline bool lr_valid(const AnglePair& p) {
  return circular_diff(p.estimate, p.truth) < circular_diff(p.estimate + 180.0, p.truth);
}

inline double lr_accuracy(std::span<const AnglePair> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "lr_accuracy needs at least one pair");
  std::size_t hits = 0;
  for (const auto& p : pairs)
    if (lr_valid(p)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

struct AngularErrors {
  double meae = 0.0;
  double mdae = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorKind::EmptyInput, "median of nothing");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

inline AngularErrors angular_errors(std::span<const AnglePair> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "angular_errors needs at least one pair");
  std::vector<double> err;
  err.reserve(pairs.size());
  double sum = 0.0;
  for (const auto& p : pairs) {
    err.push_back(circular_diff(p.estimate, p.truth));
    sum += err.back();
  }
  return {sum / static_cast<double>(err.size()), median(std::move(err))};
}

// Baseline figures for real broadcast footage with sensor truth. They go into
// the report for comparison; synthetic scenes do not reproduce them.
inline constexpr double kBaselineMeaeAtW07 = 29.78;
inline constexpr double kBaselineMdaeAtW07 = 27.66;
inline constexpr double kBaselineLrAccuracy = 0.9657;

struct SweepSample {
  OrientationPdf pose;
  std::optional<OrientationPdf> ball;
  AngleDeg truth;
};

struct SweepRow {
  double w = 0.0;
  double meae = 0.0;
  double mdae = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;    // ascending w
  std::vector<SweepRow> key_weights;  // w = 0, 1, 0.3, 0.7

  const SweepRow& best() const {
    return *std::min_element(rows.begin(), rows.end(),
                             [](const SweepRow& a, const SweepRow& b) { return a.meae < b.meae; });
  }
};

inline SweepRow evaluate_weight(std::span<const SweepSample> data, double w) {
  std::vector<AnglePair> pairs;
  pairs.reserve(data.size());
  for (const auto& s : data) {
    const OrientationPdf& ball = s.ball ? *s.ball : s.pose;
    const double weight = s.ball ? w : 1.0;
    pairs.push_back({select_orientation(merge(s.pose, ball, weight)).theta, s.truth});
  }
  const auto e = angular_errors(pairs);
  return {w, e.meae, e.mdae};
}

inline SweepResult sweep_weights(std::span<const SweepSample> data, double step = 0.05) {
  if (data.empty()) throw Error(ErrorKind::EmptyInput, "sweep over an empty dataset");
  if (!(step > 0.0 && step <= 1.0)) throw Error(ErrorKind::InvalidConfig, "sweep step must be in (0, 1]");
  SweepResult out;
  const auto n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    const double w = std::min(1.0, std::round(i * step * 1e9) / 1e9);
    out.rows.push_back(evaluate_weight(data, w));
  }
  if (out.rows.back().w < 1.0) out.rows.push_back(evaluate_weight(data, 1.0));
  for (const double w : {0.0, 1.0, 0.3, 0.7}) out.key_weights.push_back(evaluate_weight(data, w));
  return out;
}

struct EvalReport {
  double lr_acc = 0.0;
  double meae = 0.0;
  double mdae = 0.0;
  std::size_t n_players_scored = 0;
  std::size_t n_excluded = 0;  // truth rows whose estimate was skipped or missing
  std::optional<SweepResult> sweep;
};

/// Joins estimates with ground truth. LR accuracy uses the pose angle, the
/// angular errors use the reported theta. Truth rows without a usable
/// estimate are excluded and counted.
inline EvalReport evaluate(const std::vector<EstimateRecord>& estimates, const GroundTruth& truth) {
  const EstimateIndex idx = index_estimates(estimates);
  std::set<std::string> estimated_players;
  for (const auto& r : estimates) estimated_players.insert(r.player_id);
  std::set<std::string> unmatched;
  for (const auto& [key, _] : truth)
    if (!estimated_players.contains(key.second)) unmatched.insert(key.second);
  if (!unmatched.empty()) {
    std::string names;
    for (const auto& u : unmatched) names += (names.empty() ? "" : ", ") + u;
    throw Error(ErrorKind::IdMismatch, "ground-truth players without estimates: " + names);
  }

  std::vector<AnglePair> lr_pairs, theta_pairs;
  EvalReport rep;
  for (const auto& [key, omega] : truth) {
    const auto it = idx.find(key);
    if (it == idx.end() || !it->second.ok()) {
      ++rep.n_excluded;
      continue;
    }
    lr_pairs.push_back({it->second.alpha_p, omega});
    theta_pairs.push_back({it->second.theta, omega});
  }
  if (lr_pairs.empty()) throw Error(ErrorKind::EmptyInput, "no estimate matches the ground truth");
  rep.lr_acc = lr_accuracy(lr_pairs);
  const auto e = angular_errors(theta_pairs);
  rep.meae = e.meae;
  rep.mdae = e.mdae;
  rep.n_players_scored = lr_pairs.size();
  return rep;
}

inline std::vector<SweepSample> sweep_dataset(const std::vector<PlayerAnalysis>& analyses, const GroundTruth& truth) {
  std::vector<SweepSample> out;
  for (const auto& a : analyses) {
    if (!a.record.ok()) continue;
    const auto it = truth.find({a.record.frame_id, a.record.player_id});
    if (it == truth.end()) continue;
    out.push_back({a.pose, a.ball, it->second});
  }
  return out;
}

inline std::string sweep_csv(const SweepResult& s) {
  std::string out = "w,meae,mdae\n";
  for (const auto& r : s.rows)
    out += text::format_number(r.w) + "," + text::format_number(r.meae) + "," + text::format_number(r.mdae) + "\n";
  return out;
}

inline std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["lr_acc"] = r.lr_acc;
  j["meae"] = r.meae;
  j["mdae"] = r.mdae;
  j["n_players_scored"] = r.n_players_scored;
  j["n_excluded"] = r.n_excluded;
  if (r.sweep) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.sweep->rows) rows.push_back({{"w", row.w}, {"meae", row.meae}, {"mdae", row.mdae}});
    j["per_w"] = rows;
    auto kw = nlohmann::ordered_json::array();
    for (const auto& row : r.sweep->key_weights)
      kw.push_back({{"w", row.w}, {"one_minus_w", 1.0 - row.w}, {"meae", row.meae}, {"mdae", row.mdae}});
    j["key_weights"] = kw;
  }
  j["baseline"] = {{"lr_acc", kBaselineLrAccuracy}, {"meae_w07", kBaselineMeaeAtW07}, {"mdae_w07", kBaselineMdaeAtW07}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Synthetic scenes with known orientations.

/// Image corners (TL, TR, BR, BL) of the synthetic broadcast camera, 1920x1080.
inline ImageCorners default_synthetic_corners() {
  return {ImagePoint{-140.0, 40.0}, ImagePoint{2060.0, 40.0}, ImagePoint{2900.0, 1500.0}, ImagePoint{-980.0, 1500.0}};
}

struct SceneConfig {
  int players_per_frame = 22;
  int frames = 1;
  double noise_sigma_px = 0.0;
  double flip_rate = 0.0;
  std::uint64_t seed = 1;
  double confidence_min = 1.0;    // keypoint confidences ~ U[confidence_min, 1]
  double ball_facing_rate = 0.0;  // share of players whose truth looks at the ball
  double ball_jitter_deg = 0.0;   // uniform jitter on those players' truth
  ImageCorners corners = default_synthetic_corners();
  double image_width = 1920.0;
  double image_height = 1080.0;
  FieldDims field;
  CameraAxis camera_axis = CameraAxis::TowardPositiveY;

  void validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, m); };
    if (players_per_frame < 1 || frames < 1) fail("need at least one player and one frame");
    if (!(noise_sigma_px >= 0.0)) fail("noise sigma must be non-negative");
    if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) fail("flip_rate must be in [0, 1]");
    if (!(confidence_min > 0.0 && confidence_min <= 1.0)) fail("confidence_min must be in (0, 1]");
    if (!(ball_facing_rate >= 0.0 && ball_facing_rate <= 1.0)) fail("ball_facing_rate must be in [0, 1]");
  }
};

struct SyntheticScene {
  std::vector<FrameRecord> frames;
  GroundTruth truth;
  double noise_sigma_px = 0.0;
  double flip_rate = 0.0;
  std::uint64_t seed = 0;
  std::set<TruthKey> flipped;
  std::map<TruthKey, CoarseClass> coarse_truth;
  std::map<TruthKey, FeatureVector> coarse_features;
};

inline constexpr double kShoulderSpan = 0.4;
inline constexpr double kHipSpan = 0.3;

/// Coarse class implied by a true orientation for the given camera.
inline CoarseClass coarse_class_of(AngleDeg omega, CameraAxis camera) {
  if (circular_diff(omega, coarse_prototype(CoarseClass::Front, camera)) <= 45.0) return CoarseClass::Front;
  if (circular_diff(omega, coarse_prototype(CoarseClass::Back, camera)) <= 45.0) return CoarseClass::Back;
  return CoarseClass::Side;
}

/// A feature vector around the one-hot corner of `cls` (first three
/// components), with U[0, 0.15) noise on every component.
inline FeatureVector synthetic_coarse_features(CoarseClass cls, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> noise(0.0, 0.15);
  FeatureVector f{};
  for (auto& v : f) v = noise(rng);
  f[static_cast<std::size_t>(cls)] += 1.0;
  return f;
}

/// Linearly separable training set cycling front, side, back.
inline std::vector<LabeledFeatures> separable_coarse_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledFeatures> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cls = static_cast<CoarseClass>(i % kNumCoarseClasses);
    out.push_back({synthetic_coarse_features(cls, rng), cls});
  }
  return out;
}

/// Players with uniformly drawn truth orientations, torsos placed by inverse
/// geometry, projected into a fixed camera and perturbed with pixel noise.
/// A `flip_rate` share of players get their left and right parts swapped.
inline SyntheticScene synthesize_scene(const SceneConfig& cfg) {
  cfg.validate();
  SyntheticScene scene;
  scene.noise_sigma_px = cfg.noise_sigma_px;
  scene.flip_rate = cfg.flip_rate;
  scene.seed = cfg.seed;

  const Homography h = estimate_homography(corner_correspondences(cfg.corners, cfg.field));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> pixel_noise(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto noisy = [&](ImagePoint p) {
    if (cfg.noise_sigma_px == 0.0) return p;
    const double dx = cfg.noise_sigma_px * pixel_noise(rng);
    const double dy = cfg.noise_sigma_px * pixel_noise(rng);
    return ImagePoint{p.x + dx, p.y + dy};
  };

  // Players stand where the camera sees their whole box.
  auto sample_visible = [&] {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const FieldPoint pos{uniform(3.0, cfg.field.length - 3.0), uniform(3.0, cfg.field.width - 3.0)};
      const ImagePoint foot = back_project(h, pos);
      if (foot.x >= 20.0 && foot.x <= cfg.image_width - 20.0 && foot.y >= 60.0 && foot.y <= cfg.image_height - 5.0)
        return pos;
    }
    throw Error(ErrorKind::InvalidConfig, "synthetic camera sees no part of the field");
  };

  for (int fi = 0; fi < cfg.frames; ++fi) {
    FrameRecord frame;
    frame.frame_id = fi;
    frame.timestamp = fi / 25.0;
    frame.corners_image = cfg.corners;
    const FieldPoint ball{uniform(0.0, cfg.field.length), uniform(0.0, cfg.field.width)};
    frame.ball_field = ball;

    for (int pi = 0; pi < cfg.players_per_frame; ++pi) {
      const std::string id = "p" + std::to_string(pi);
      const TruthKey key{frame.frame_id, id};
      const FieldPoint pos = sample_visible();
      AngleDeg omega(uniform(0.0, 360.0));
      if (unit(rng) < cfg.ball_facing_rate && !(pos == ball))
        omega = angle_of(ball - pos) + uniform(-cfg.ball_jitter_deg, cfg.ball_jitter_deg);
      const bool flip = unit(rng) < cfg.flip_rate;

      const Vec2 facing = unit_vector(omega);
      const Vec2 left_to_right{facing.y, -facing.x};  // facing turned a quarter clockwise
      auto side_point = [&](double span, double sign) { return pos + (sign * span / 2.0) * left_to_right; };
      FieldPoint ls = side_point(kShoulderSpan, -1.0), rs = side_point(kShoulderSpan, 1.0);
      FieldPoint lh = side_point(kHipSpan, -1.0), rh = side_point(kHipSpan, 1.0);
      if (flip) {
        std::swap(ls, rs);
        std::swap(lh, rh);
      }

      auto conf = [&] { return cfg.confidence_min >= 1.0 ? 1.0 : uniform(cfg.confidence_min, 1.0); };
      Keypoints25 k;
      auto set_part = [&](BodyPart part, ImagePoint p) { k[part] = {p.x, p.y, conf()}; };
      const ImagePoint ls_img = back_project(h, ls), rs_img = back_project(h, rs);
      set_part(BodyPart::LShoulder, noisy(ls_img));
      set_part(BodyPart::RShoulder, noisy(rs_img));
      set_part(BodyPart::LHip, noisy(back_project(h, lh)));
      set_part(BodyPart::RHip, noisy(back_project(h, rh)));
      set_part(BodyPart::MidHip, noisy(back_project(h, pos)));
      const ImagePoint neck{(ls_img.x + rs_img.x) / 2.0, (ls_img.y + rs_img.y) / 2.0 - 3.0};
      set_part(BodyPart::Neck, noisy(neck));
      // Face parts lean the way the torso normal points along image x.
      const double lean = 6.0 * facing.x;
      set_part(BodyPart::Nose, noisy({neck.x + lean, neck.y - 6.0}));
      set_part(BodyPart::REye, noisy({neck.x + 0.8 * lean, neck.y - 8.0}));
      set_part(BodyPart::LEye, noisy({neck.x + 0.8 * lean, neck.y - 8.0}));
      set_part(BodyPart::REar, noisy({neck.x + 0.4 * lean, neck.y - 7.0}));
      set_part(BodyPart::LEar, noisy({neck.x + 0.4 * lean, neck.y - 7.0}));

      PlayerDetection p;
      p.player_id = id;
      p.team = pi < cfg.players_per_frame / 2 ? Team::Home : Team::Away;
      const ImagePoint foot = back_project(h, pos);
      p.bbox = {foot.x - 7.5, foot.y - 50.0, 15.0, 50.0};
      p.keypoints = k;
      frame.players.push_back(std::move(p));

      scene.truth.emplace(key, omega);
      if (flip) scene.flipped.insert(key);
      const CoarseClass cls = coarse_class_of(omega, cfg.camera_axis);
      scene.coarse_truth.emplace(key, cls);
      scene.coarse_features.emplace(key, synthetic_coarse_features(cls, rng));
    }
    scene.frames.push_back(std::move(frame));
  }
  return scene;
}

inline FeatureSource scene_feature_source(const SyntheticScene& scene) {
  return [&scene](std::int64_t frame, const std::string& player) -> std::optional<FeatureVector> {
    const auto it = scene.coarse_features.find({frame, player});
    if (it == scene.coarse_features.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace orient
