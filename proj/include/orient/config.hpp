#pragma once

#include <cstdlib>
#include <string>
#include <string_view>

#include "orient/ball.hpp"
#include "orient/coarse.hpp"
#include "orient/fusion.hpp"
#include "orient/pose.hpp"
#include "orient/records.hpp"
#include "orient/text.hpp"

namespace orient {

struct PipelineConfig {
  double w = kDefaultPoseWeight;
  double md_meters = kDefaultMaxBallDistance;
  double tiebreak_threshold = kDefaultTiebreakThreshold;
  double margin_threshold = kDefaultMarginThreshold;
  BallSupportMode ball_support_mode = BallSupportMode::Literal;
  CameraAxis camera_axis = CameraAxis::TowardPositiveY;
  bool face_x_inverted = false;
  bool goal_relative_inverted = false;
  FieldDims field;
  int workers = 1;

  std::string frames_path;
  std::string truth_path;
  std::string events_path;
  std::string estimates_path;
  std::string model_path;
  std::string crops_index_path;
  std::string crops_dir;
  std::string output_dir = ".";

  static constexpr int nbins = kNumBins;

  void validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, m); };
    if (!(w >= 0.0 && w <= 1.0)) fail("w must be in [0, 1]");
    if (!(md_meters > 0.0)) fail("md_meters must be positive");
    if (!(tiebreak_threshold >= 0.0 && tiebreak_threshold <= 1.0)) fail("tiebreak_threshold must be in [0, 1]");
    if (!(margin_threshold >= 0.0)) fail("margin_threshold must be non-negative");
    if (!(field.length > 0.0 && field.width > 0.0)) fail("field dimensions must be positive");
    if (workers < 1) fail("workers must be >= 1");
  }

  /// Applies one `key = value` setting.
  void set(std::string_view key, std::string_view raw) {
    std::string value(text::trim(raw));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    auto num = [&]() {
      const auto v = text::parse_double(value);
      if (!v) throw Error(ErrorKind::InvalidConfig, std::string(key) + ": not a number: " + value);
      return *v;
    };
    auto flag = [&]() {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw Error(ErrorKind::InvalidConfig, std::string(key) + ": expected true/false");
    };
    if (key == "w") w = num();
    else if (key == "md_meters") md_meters = num();
    else if (key == "tiebreak_threshold") tiebreak_threshold = num();
    else if (key == "margin_threshold") margin_threshold = num();
    else if (key == "nbins") {
      if (num() != kNumBins) throw Error(ErrorKind::InvalidConfig, "nbins is fixed at 24");
    } else if (key == "ball_support_mode") {
      if (value == "literal") ball_support_mode = BallSupportMode::Literal;
      else if (value == "smooth") ball_support_mode = BallSupportMode::Smooth;
      else throw Error(ErrorKind::InvalidConfig, "ball_support_mode must be literal or smooth");
    } else if (key == "camera_axis") {
      if (value == "+y") camera_axis = CameraAxis::TowardPositiveY;
      else if (value == "-y") camera_axis = CameraAxis::TowardNegativeY;
      else throw Error(ErrorKind::InvalidConfig, "camera_axis must be +y or -y");
    } else if (key == "face_x_inverted") face_x_inverted = flag();
    else if (key == "goal_relative_inverted") goal_relative_inverted = flag();
    else if (key == "field_length") field.length = num();
    else if (key == "field_width") field.width = num();
    else if (key == "workers") workers = static_cast<int>(num());
    else if (key == "frames") frames_path = value;
    else if (key == "truth") truth_path = value;
    else if (key == "events") events_path = value;
    else if (key == "estimates") estimates_path = value;
    else if (key == "model") model_path = value;
    else if (key == "crops_index") crops_index_path = value;
    else if (key == "crops_dir") crops_dir = value;
    else if (key == "output_dir") output_dir = value;
    else throw Error(ErrorKind::InvalidConfig, "unknown key " + std::string(key));
  }

  /// `key = value` per line; `#` starts a comment; `[section]` headers are
  /// accepted and ignored.
  void apply_text(std::string_view content) {
    std::size_t line_no = 0;
    for (const auto& l : text::lines(content)) {
      ++line_no;
      std::string_view s = l;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = text::trim(s);
      if (s.empty() || s.front() == '[') continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
      set(text::trim(s.substr(0, eq)), s.substr(eq + 1));
    }
  }

  /// Honors ORIENT_OUTPUT_DIR when set.
  void apply_environment() {
    if (const char* dir = std::getenv("ORIENT_OUTPUT_DIR"); dir && *dir) output_dir = dir;
  }

  static PipelineConfig from_file(const std::string& path) {
    PipelineConfig c;
    c.apply_text(text::read_file(path));
    c.validate();
    return c;
  }
};

}  // namespace orient
