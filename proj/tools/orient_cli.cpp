// Command-line front end: synth, estimate, evaluate, sweep, train-coarse, maps.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "orient/orient.hpp"
#include "orient/png_io.hpp"

namespace fs = std::filesystem;
using namespace orient;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;  // flag name -> config key value
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "override a config key (key=value)");
  cmd->add_option("-o,--output-dir", c.flags["output_dir"], "directory for outputs");
}

void add_path(CLI::App* cmd, Common& c, const std::string& key, const std::string& help) {
  std::string flag = "--" + key;
  for (auto& ch : flag)
    if (ch == '_') ch = '-';
  cmd->add_option(flag, c.flags[key], help);
}

PipelineConfig load_config(const Common& c) {
  PipelineConfig cfg;
  if (!c.config_path.empty()) cfg.apply_text(text::read_file(c.config_path));
  cfg.apply_environment();
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidConfig, "--set expects key=value, got " + o);
    cfg.set(text::trim(std::string_view(o).substr(0, eq)), std::string_view(o).substr(eq + 1));
  }
  for (const auto& [key, value] : c.flags)
    if (!value.empty()) cfg.set(key, value);
  cfg.validate();
  return cfg;
}

const std::string& require(const std::string& value, const char* key) {
  if (value.empty()) throw Error(ErrorKind::InvalidConfig, std::string("missing required path: ") + key);
  return value;
}

std::string out_path(const PipelineConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return (fs::path(cfg.output_dir) / name).string();
}

void write_out(const PipelineConfig& cfg, const std::string& name, std::string_view content) {
  const auto p = out_path(cfg, name);
  text::write_file(p, content);
  std::cerr << "wrote " << p << "\n";
}

// Random passes between teammates, kicked in one frame and received in the
// next, for exercising the maps on synthetic data.
std::vector<PassEvent> synthetic_events(const SyntheticScene& scene, int n, std::uint64_t seed) {
  std::vector<PassEvent> out;
  if (scene.frames.size() < 2 || n <= 0) return out;
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& players = scene.frames.front().players;
  for (int i = 0; i < n; ++i) {
    const auto f = static_cast<std::size_t>(unit(rng) * static_cast<double>(scene.frames.size() - 1));
    const auto a = static_cast<std::size_t>(unit(rng) * static_cast<double>(players.size()));
    std::vector<std::size_t> mates;
    for (std::size_t j = 0; j < players.size(); ++j)
      if (j != a && players[j].team == players[a].team) mates.push_back(j);
    if (mates.empty()) continue;
    const auto b = mates[static_cast<std::size_t>(unit(rng) * static_cast<double>(mates.size()))];
    PassEvent e;
    e.event_id = "e" + std::to_string(i);
    e.passer_id = players[a].player_id;
    e.receiver_id = players[b].player_id;
    e.frame_kick = scene.frames[f].frame_id;
    e.frame_receive = scene.frames[f + 1].frame_id;
    e.success = unit(rng) < 0.8;
    e.epv_start = std::round(unit(rng) * 1000.0) / 10000.0;
    e.epv_end = std::round(unit(rng) * 1000.0) / 10000.0;
    e.attacking_direction = players[a].team == Team::Home ? AttackDirection::PositiveX : AttackDirection::NegativeX;
    out.push_back(std::move(e));
  }
  return out;
}

int cmd_synth(const Common& c, const SceneConfig& sc, int n_events) {
  const auto cfg = load_config(c);
  const auto scene = synthesize_scene(sc);
  write_out(cfg, "frames.jsonl", serialize_sequence(scene.frames));
  write_out(cfg, "truth.csv", serialize_ground_truth(scene.truth));
  if (n_events > 0) write_out(cfg, "events.csv", serialize_events(synthetic_events(scene, n_events, sc.seed)));
  return 0;
}

int cmd_estimate(const Common& c) {
  const auto cfg = load_config(c);
  LoadStats stats;
  const auto frames = load_sequence(require(cfg.frames_path, "frames"), &stats, cfg.field);
  if (stats.clamped_confidences > 0)
    std::cerr << "clamped " << stats.clamped_confidences << " keypoint confidences into [0, 1]\n";

  std::optional<LinearSvmModel> model;
  std::map<TruthKey, FeatureVector> features;
  if (!cfg.model_path.empty()) {
    model = parse_model(text::read_file(cfg.model_path));
    for (const auto& entry : parse_crop_index(text::read_file(require(cfg.crops_index_path, "crops_index")))) {
      const auto crop = read_png((fs::path(cfg.crops_dir) / entry.filename).string(), entry.torso);
      features[{entry.frame_id, entry.player_id}] = extract_features(crop);
    }
  }
  CoarseValidator validator;
  if (model) {
    validator.model = &*model;
    validator.features = [&features](std::int64_t frame, const std::string& player) -> std::optional<FeatureVector> {
      const auto it = features.find({frame, player});
      if (it == features.end()) return std::nullopt;
      return it->second;
    };
  }
  const auto records = estimate(frames, cfg, validator);
  std::size_t skipped = 0;
  for (const auto& r : records) skipped += r.ok() ? 0 : 1;
  std::cerr << records.size() << " player-frames, " << skipped << " skipped\n";
  write_out(cfg, "estimates.jsonl", serialize_estimates(records));
  return 0;
}

int cmd_evaluate(const Common& c) {
  const auto cfg = load_config(c);
  const auto estimates = parse_estimates(text::read_file(require(cfg.estimates_path, "estimates")));
  const auto truth = load_ground_truth(require(cfg.truth_path, "truth"));
  const auto report = evaluate(estimates, truth);
  write_out(cfg, "report.json", report_json(report));
  std::cout << "lr_acc " << report.lr_acc << " meae " << report.meae << " mdae " << report.mdae << "\n";
  return 0;
}

int cmd_sweep(const Common& c, double step) {
  auto cfg = load_config(c);
  const auto frames = load_sequence(require(cfg.frames_path, "frames"), nullptr, cfg.field);
  const auto truth = load_ground_truth(require(cfg.truth_path, "truth"));
  const auto analyses = analyze_sequence(frames, cfg);
  std::vector<EstimateRecord> records;
  for (const auto& a : analyses) records.push_back(a.record);
  auto report = evaluate(records, truth);
  report.sweep = sweep_weights(sweep_dataset(analyses, truth), step);
  write_out(cfg, "sweep.csv", sweep_csv(*report.sweep));
  write_out(cfg, "report.json", report_json(report));
  const auto& best = report.sweep->best();
  std::cout << "best w " << best.w << " meae " << best.meae << " mdae " << best.mdae << "\n";
  return 0;
}

int cmd_train(const Common& c, const std::string& labels_path, const SvmHyperParams& hp) {
  const auto cfg = load_config(c);
  std::vector<LabeledFeatures> data;
  for (const auto& l : parse_crop_labels(text::read_file(labels_path))) {
    const auto crop = read_png((fs::path(cfg.crops_dir) / l.filename).string(), l.torso);
    data.push_back({extract_features(crop), l.label});
  }
  const auto model = train_svm(data, hp);
  std::size_t correct = 0;
  for (const auto& d : data) correct += classify(model, d.features).cls == d.label ? 1 : 0;
  std::cerr << "training accuracy " << correct << "/" << data.size() << "\n";
  write_out(cfg, "model.json", serialize_model(model));
  return 0;
}

struct MapArgs {
  std::string map = "sonar";
  std::string subject = "team";
  std::string event_kind = "pass_as_receiver";
  std::string metric = "pass_success";
  std::string phase;
};

int cmd_maps(const Common& c, const MapArgs& m) {
  const auto cfg = load_config(c);
  const auto events = load_events(require(cfg.events_path, "events"));
  const auto estimates = index_estimates(parse_estimates(text::read_file(require(cfg.estimates_path, "estimates"))));

  MapQuery q;
  const auto kind = parse_event_kind(m.event_kind);
  const auto metric = parse_metric_kind(m.metric);
  if (!kind) throw Error(ErrorKind::InvalidConfig, "unknown event kind " + m.event_kind);
  if (!metric) throw Error(ErrorKind::InvalidConfig, "unknown metric " + m.metric);
  q.event_kind = *kind;
  q.metric_kind = *metric;
  if (m.subject != "team") {
    bool seen = false;
    for (const auto& e : events) seen = seen || e.passer_id == m.subject || e.receiver_id == m.subject;
    if (!seen) throw Error(ErrorKind::IdMismatch, "no event involves player " + m.subject);
    q.player = m.subject;
  }

  PhaseIndex phases;
  const PhaseIndex* phase_ptr = nullptr;
  if (!m.phase.empty()) {
    q.phase = parse_phase(m.phase);
    if (!q.phase) throw Error(ErrorKind::InvalidConfig, "unknown phase " + m.phase);
    phases = classify_event_phases(events, load_sequence(require(cfg.frames_path, "frames"), nullptr, cfg.field),
                                   cfg.field);
    phase_ptr = &phases;
  }

  const std::string stem = m.map + "_" + q.subject() + (q.phase ? "_" + std::string(to_string(*q.phase)) : "");
  auto emit = [&](const auto& data) {
    write_out(cfg, stem + ".json", to_json(data));
    write_out(cfg, stem + ".csv", to_csv(data));
    write_out(cfg, stem + ".svg", render_svg(data));
    std::cerr << data.total() << " events mapped, " << data.skipped << " skipped\n";
  };
  if (m.map == "sonar" && !q.player) {
    const auto team = team_orient_sonar(events, estimates, q, phase_ptr);
    write_out(cfg, stem + ".json", to_json(team));
    write_out(cfg, stem + ".svg", render_svg(team, cfg.field));
    for (const auto& [id, s] : team.players) write_out(cfg, "sonar_" + id + ".svg", render_svg(s));
  } else if (m.map == "sonar") {
    emit(orient_sonar(events, estimates, q, phase_ptr));
  } else if (m.map == "reaction") {
    emit(reaction_map(events, estimates, q, phase_ptr));
  } else if (m.map == "onfield") {
    emit(onfield_map(events, estimates, q, cfg.field, cfg.goal_relative_inverted, phase_ptr));
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown map " + m.map);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body orientation estimation and orientation maps"};
  app.require_subcommand(1);

  Common synth_c, est_c, eval_c, sweep_c, train_c, maps_c;

  auto* synth = app.add_subcommand("synth", "generate a synthetic scene with known orientations");
  add_common(synth, synth_c);
  SceneConfig sc;
  int n_events = 0;
  synth->add_option("--seed", sc.seed, "random seed")->capture_default_str();
  synth->add_option("--players", sc.players_per_frame, "players per frame")->capture_default_str();
  synth->add_option("--frames", sc.frames, "number of frames")->capture_default_str();
  synth->add_option("--sigma", sc.noise_sigma_px, "keypoint noise in pixels")->capture_default_str();
  synth->add_option("--flip-rate", sc.flip_rate, "share of left/right swapped players")->capture_default_str();
  synth->add_option("--confidence-min", sc.confidence_min, "lowest keypoint confidence")->capture_default_str();
  synth->add_option("--ball-facing-rate", sc.ball_facing_rate, "share of players facing the ball")->capture_default_str();
  synth->add_option("--ball-jitter", sc.ball_jitter_deg, "jitter on ball-facing truth, degrees")->capture_default_str();
  synth->add_option("--events", n_events, "also write this many random passes")->capture_default_str();

  auto* est = app.add_subcommand("estimate", "estimate body orientation for every player and frame");
  add_common(est, est_c);
  add_path(est, est_c, "frames", "frames JSON Lines");
  add_path(est, est_c, "model", "coarse validator model JSON");
  add_path(est, est_c, "crops_index", "crop index CSV");
  add_path(est, est_c, "crops_dir", "directory of torso crops");
  add_path(est, est_c, "w", "pose weight");
  add_path(est, est_c, "workers", "worker threads");

  auto* ev = app.add_subcommand("evaluate", "score estimates against ground truth");
  add_common(ev, eval_c);
  add_path(ev, eval_c, "estimates", "estimates JSON Lines");
  add_path(ev, eval_c, "truth", "ground truth CSV");

  auto* sw = app.add_subcommand("sweep", "score every pose weight");
  add_common(sw, sweep_c);
  add_path(sw, sweep_c, "frames", "frames JSON Lines");
  add_path(sw, sweep_c, "truth", "ground truth CSV");
  add_path(sw, sweep_c, "workers", "worker threads");
  double step = 0.05;
  sw->add_option("--step", step, "weight step")->capture_default_str();

  auto* tr = app.add_subcommand("train-coarse", "train the front/side/back classifier from labeled crops");
  add_common(tr, train_c);
  add_path(tr, train_c, "crops_dir", "directory of torso crops");
  std::string labels;
  SvmHyperParams hp;
  tr->add_option("--labels", labels, "labels CSV")->required();
  tr->add_option("--epochs", hp.epochs)->capture_default_str();
  tr->add_option("--learning-rate", hp.learning_rate)->capture_default_str();
  tr->add_option("--lambda", hp.lambda)->capture_default_str();
  tr->add_option("--seed", hp.seed)->capture_default_str();

  auto* mp = app.add_subcommand("maps", "aggregate pass events into orientation maps");
  add_common(mp, maps_c);
  add_path(mp, maps_c, "events", "events CSV");
  add_path(mp, maps_c, "estimates", "estimates JSON Lines");
  add_path(mp, maps_c, "frames", "frames JSON Lines, needed for --phase");
  MapArgs margs;
  mp->add_option("--map", margs.map, "sonar, reaction or onfield")->capture_default_str();
  mp->add_option("--subject", margs.subject, "player id, or team")->capture_default_str();
  mp->add_option("--event-kind", margs.event_kind, "pass_as_receiver, reception or pass_as_passer")
      ->capture_default_str();
  mp->add_option("--metric", margs.metric, "pass_success or added_epv")->capture_default_str();
  mp->add_option("--phase", margs.phase, "build_up, middle or progression");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_c, sc, n_events);
    if (est->parsed()) return cmd_estimate(est_c);
    if (ev->parsed()) return cmd_evaluate(eval_c);
    if (sw->parsed()) return cmd_sweep(sweep_c, step);
    if (tr->parsed()) return cmd_train(train_c, labels, hp);
    if (mp->parsed()) return cmd_maps(maps_c, margs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
