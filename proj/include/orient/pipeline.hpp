#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "orient/ball.hpp"
#include "orient/coarse.hpp"
#include "orient/config.hpp"
#include "orient/fusion.hpp"
#include "orient/pose.hpp"
#include "orient/records.hpp"

namespace orient {

/// One player in one frame. When `skipped_reason` is set, only the ids are
/// meaningful.
struct EstimateRecord {
  std::int64_t frame_id = 0;
  std::string player_id;
  std::optional<std::string> skipped_reason;

  AngleDeg theta;
  int argmax_bin = 0;
  AngleDeg alpha_p;
  double c_p = 0.0;
  Side lr = Side::Right;
  TorsoBasis basis = TorsoBasis::Shoulders;
  bool tiebreak_used = false;
  bool flipped = false;
  bool ball_used = false;
  FieldPoint position;  // torso center in the field
  std::optional<CoarseClass> coarse;

  bool ok() const { return !skipped_reason.has_value(); }
};

/// The record plus the intermediate PDFs, for weight sweeps.
struct PlayerAnalysis {
  EstimateRecord record;
  OrientationPdf pose;
  std::optional<OrientationPdf> ball;
};

/// Supplies coarse-class features for (frame, player); nullopt when no crop.
using FeatureSource = std::function<std::optional<FeatureVector>(std::int64_t, const std::string&)>;

struct CoarseValidator {
  const LinearSvmModel* model = nullptr;
  FeatureSource features;

  explicit operator bool() const { return model != nullptr && static_cast<bool>(features); }
};

inline PlayerAnalysis analyze_player(const FrameRecord& frame, const Homography& h, const PlayerDetection& p,
                                     const PipelineConfig& cfg, const CoarseValidator& coarse = {}) {
  PlayerAnalysis a;
  a.record.frame_id = frame.frame_id;
  a.record.player_id = p.player_id;
  if (!p.keypoints) {
    a.record.skipped_reason = "NoKeypoints";
    return a;
  }
  try {
    const TorsoProjection torso = extract_torso(*p.keypoints, h);
    PoseEstimate pose =
        resolve_pose(torso, face_direction(*p.keypoints, cfg.face_x_inverted), cfg.tiebreak_threshold);

    if (coarse) {
      if (const auto f = coarse.features(frame.frame_id, p.player_id)) {
        const auto pred = classify(*coarse.model, *f);
        a.record.coarse = pred.cls;
        const PoseEstimate checked = validate_flip(pose, pred.cls, pred.margin, cfg.camera_axis, cfg.margin_threshold);
        a.record.flipped = !(checked.alpha_p == pose.alpha_p);
        pose = checked;
      }
    }

    a.record.position = {(torso.l_shoulder.x + torso.r_shoulder.x + torso.l_hip.x + torso.r_hip.x) / 4.0,
                         (torso.l_shoulder.y + torso.r_shoulder.y + torso.l_hip.y + torso.r_hip.y) / 4.0};
    a.pose = pose_pdf(pose);
    if (frame.ball_field && !(*frame.ball_field == a.record.position))
      a.ball = ball_pdf(a.record.position, *frame.ball_field, cfg.md_meters, cfg.ball_support_mode);

    // Without a ball the pose PDF stands alone.
    const FusedEstimate fused = a.ball ? fuse(a.pose, *a.ball, cfg.w) : fuse(a.pose, a.pose, 1.0);
    a.record.theta = fused.theta;
    a.record.argmax_bin = fused.argmax_bin;
    a.record.alpha_p = pose.alpha_p;
    a.record.c_p = pose.c_p;
    a.record.lr = pose.lr;
    a.record.basis = pose.basis;
    a.record.tiebreak_used = pose.tiebreak_used;
    a.record.ball_used = a.ball.has_value();
  } catch (const Error& e) {
    a.record.skipped_reason = std::string(to_string(e.kind()));
  }
  return a;
}

inline std::vector<PlayerAnalysis> analyze_frame(const FrameRecord& frame, const PipelineConfig& cfg,
                                                 const CoarseValidator& coarse = {}) {
  std::vector<PlayerAnalysis> out;
  out.reserve(frame.players.size());
  std::optional<Homography> h;
  std::string homography_error;
  try {
    h = frame_homography(frame, cfg.field);
  } catch (const Error& e) {
    homography_error = std::string(to_string(e.kind()));
  }
  for (const auto& p : frame.players) {
    if (!h) {
      PlayerAnalysis a;
      a.record.frame_id = frame.frame_id;
      a.record.player_id = p.player_id;
      a.record.skipped_reason = homography_error;
      out.push_back(std::move(a));
      continue;
    }
    out.push_back(analyze_player(frame, *h, p, cfg, coarse));
  }
  return out;
}

/// Runs every frame, in parallel when cfg.workers > 1. The result is in
/// frame order, then detection order, whatever the worker count.
inline std::vector<PlayerAnalysis> analyze_sequence(const std::vector<FrameRecord>& frames, const PipelineConfig& cfg,
                                                    const CoarseValidator& coarse = {}) {
  cfg.validate();
  std::vector<std::vector<PlayerAnalysis>> per_frame(frames.size());
  const auto n_workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  if (n_workers == 1 || frames.size() < 2) {
    for (std::size_t i = 0; i < frames.size(); ++i) per_frame[i] = analyze_frame(frames[i], cfg, coarse);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(n_workers, frames.size()); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < frames.size(); i = next++) per_frame[i] = analyze_frame(frames[i], cfg, coarse);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<PlayerAnalysis> out;
  for (auto& v : per_frame)
    for (auto& a : v) out.push_back(std::move(a));
  return out;
}

inline std::vector<EstimateRecord> estimate(const std::vector<FrameRecord>& frames, const PipelineConfig& cfg,
                                            const CoarseValidator& coarse = {}) {
  std::vector<EstimateRecord> out;
  for (auto& a : analyze_sequence(frames, cfg, coarse)) out.push_back(std::move(a.record));
  return out;
}

inline std::string serialize_estimate(const EstimateRecord& r) {
  nlohmann::ordered_json j;
  j["frame_id"] = r.frame_id;
  j["player_id"] = r.player_id;
  if (!r.ok()) {
    j["skipped_reason"] = *r.skipped_reason;
    return j.dump();
  }
  j["theta"] = r.theta.value();
  j["argmax_bin"] = r.argmax_bin;
  j["alpha_p"] = r.alpha_p.value();
  j["c_p"] = r.c_p;
  j["lr"] = std::string(to_string(r.lr));
  j["basis"] = std::string(to_string(r.basis));
  j["tiebreak_used"] = r.tiebreak_used;
  j["flipped"] = r.flipped;
  j["ball_used"] = r.ball_used;
  j["x"] = r.position.x;
  j["y"] = r.position.y;
  if (r.coarse) j["coarse"] = std::string(to_string(*r.coarse));
  return j.dump();
}

inline std::string serialize_estimates(const std::vector<EstimateRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += serialize_estimate(r);
    out += '\n';
  }
  return out;
}

inline std::vector<EstimateRecord> parse_estimates(std::string_view content) {
  std::vector<EstimateRecord> out;
  std::size_t line_no = 0;
  for (const auto& l : text::lines(content)) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(l);
      EstimateRecord r;
      r.frame_id = j.at("frame_id").get<std::int64_t>();
      r.player_id = j.at("player_id").get<std::string>();
      if (j.contains("skipped_reason")) {
        r.skipped_reason = j["skipped_reason"].get<std::string>();
      } else {
        r.theta = AngleDeg(j.at("theta").get<double>());
        r.argmax_bin = j.at("argmax_bin").get<int>();
        r.alpha_p = AngleDeg(j.at("alpha_p").get<double>());
        r.c_p = j.at("c_p").get<double>();
        r.lr = j.at("lr").get<std::string>() == "left" ? Side::Left : Side::Right;
        r.basis = j.at("basis").get<std::string>() == "hips" ? TorsoBasis::Hips : TorsoBasis::Shoulders;
        r.tiebreak_used = j.at("tiebreak_used").get<bool>();
        r.flipped = j.at("flipped").get<bool>();
        r.ball_used = j.at("ball_used").get<bool>();
        r.position = {j.at("x").get<double>(), j.at("y").get<double>()};
        if (j.contains("coarse")) r.coarse = parse_coarse_class(j["coarse"].get<std::string>());
        if (r.argmax_bin < 0 || r.argmax_bin >= kNumBins) throw Error(ErrorKind::ParseError, "argmax_bin out of range");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

using EstimateIndex = std::map<TruthKey, EstimateRecord>;

inline EstimateIndex index_estimates(const std::vector<EstimateRecord>& records) {
  EstimateIndex idx;
  for (const auto& r : records) idx.insert_or_assign(TruthKey{r.frame_id, r.player_id}, r);
  return idx;
}

}  // namespace orient
