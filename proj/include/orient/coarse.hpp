#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orient/geometry.hpp"
#include "orient/pose.hpp"
#include "orient/svm.hpp"
#include "orient/text.hpp"

namespace orient {

inline constexpr std::size_t kHueBins = 36;
inline constexpr std::size_t kSatBins = 18;
inline constexpr std::size_t kValBins = 18;
inline constexpr std::size_t kGeomFeatures = 6;
inline constexpr std::size_t kFeatureDim = kHueBins + kSatBins + kValBins + kGeomFeatures;  // 78
inline constexpr double kDefaultMarginThreshold = 0.2;

using FeatureVector = std::array<double, kFeatureDim>;

enum class CoarseClass : std::size_t { Front = 0, Side = 1, Back = 2 };
inline constexpr std::size_t kNumCoarseClasses = 3;

inline std::string_view to_string(CoarseClass c) {
  switch (c) {
    case CoarseClass::Front: return "front";
    case CoarseClass::Side: return "side";
    case CoarseClass::Back: return "back";
  }
  return "?";
}

inline std::optional<CoarseClass> parse_coarse_class(std::string_view s) {
  if (s == "front") return CoarseClass::Front;
  if (s == "side") return CoarseClass::Side;
  if (s == "back") return CoarseClass::Back;
  return std::nullopt;
}

/// Where the broadcast camera looks. TowardPositiveY: the camera stands on
/// the y = 0 touchline, so players facing it face 270 deg.
enum class CameraAxis { TowardPositiveY, TowardNegativeY };

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Hsv {
  double h = 0.0;  // [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

inline Hsv rgb_to_hsv(Rgb px) {
  const double r = px.r / 255.0, g = px.g / 255.0, b = px.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    if (mx == r) out.h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (mx == g) out.h = 60.0 * ((b - r) / delta + 2.0);
    else out.h = 60.0 * ((r - g) / delta + 4.0);
    if (out.h < 0.0) out.h += 360.0;
    if (out.h >= 360.0) out.h -= 360.0;
  }
  return out;
}

/// Torso corner order used throughout: left shoulder, right shoulder,
/// left hip, right hip.
using TorsoImagePoints = std::array<ImagePoint, 4>;

/// RGB raster of one player plus the torso corners in crop coordinates.
/// Coordinates are continuous: pixel (col, row) has its center at
/// (col + 0.5, row + 0.5) and the raster spans [0, W] x [0, H].
struct TorsoCrop {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major
  TorsoImagePoints torso{};

  const Rgb& at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

  void validate() const {
    if (width < 1 || height < 1) throw Error(ErrorKind::InvalidCrop, "crop must be at least 1x1");
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw Error(ErrorKind::InvalidCrop, "pixel count does not match dimensions");
    for (const auto& p : torso) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 || p.x > width || p.y > height)
        throw Error(ErrorKind::InvalidCrop, "torso point outside the raster");
    }
  }
};

struct PixelCoord {
  int col = 0;
  int row = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Pixels whose centers lie inside or on the quadrilateral
/// l_shoulder -> r_shoulder -> r_hip -> l_hip, filled scanline by scanline
/// with the even-odd rule. Row-major order.
inline std::vector<PixelCoord> trapezoid_mask(const TorsoCrop& crop) {
  crop.validate();
  const auto& t = crop.torso;
  const std::array<ImagePoint, 4> poly{t[0], t[1], t[3], t[2]};

  double extent = 0.0;
  for (const auto& a : poly)
    for (const auto& b : poly) extent = std::max(extent, (a - b).norm());
  double max_cross = 0.0;
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::array<ImagePoint, 3> tri{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != skip) tri[n++] = poly[i];
    const Vec2 u = tri[1] - tri[0], v = tri[2] - tri[0];
    max_cross = std::max(max_cross, std::abs(u.x * v.y - u.y * v.x));
  }
  if (extent == 0.0 || max_cross <= 1e-12 * extent * extent)
    throw Error(ErrorKind::EmptyTrapezoid, "torso quadrilateral has zero area");

  constexpr double eps = 1e-9;
  std::vector<PixelCoord> out;
  std::vector<char> row_on(static_cast<std::size_t>(crop.width));
  std::vector<double> crossings;
  std::vector<std::pair<double, double>> spans;
  for (int row = 0; row < crop.height; ++row) {
    const double yc = row + 0.5;
    crossings.clear();
    spans.clear();
    for (std::size_t i = 0; i < 4; ++i) {
      const ImagePoint p = poly[i], q = poly[(i + 1) % 4];
      const double ylo = std::min(p.y, q.y), yhi = std::max(p.y, q.y);
      if (p.y == q.y) {
        if (std::abs(yc - p.y) <= eps) spans.emplace_back(std::min(p.x, q.x), std::max(p.x, q.x));
        continue;
      }
      if (yc < ylo - eps || yc > yhi + eps) continue;
      const double x = p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y);
      spans.emplace_back(x, x);  // boundary pixel
      if (yc >= ylo && yc < yhi) crossings.push_back(x);
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) spans.emplace_back(crossings[i], crossings[i + 1]);

    std::fill(row_on.begin(), row_on.end(), 0);
    for (const auto& [a, b] : spans) {
      const int first = std::max(0, static_cast<int>(std::ceil(a - eps - 0.5)));
      const int last = std::min(crop.width - 1, static_cast<int>(std::floor(b + eps - 0.5)));
      for (int col = first; col <= last; ++col) row_on[static_cast<std::size_t>(col)] = 1;
    }
    for (int col = 0; col < crop.width; ++col)
      if (row_on[static_cast<std::size_t>(col)]) out.push_back({col, row});
  }
  return out;
}

/// 36 hue + 18 saturation + 18 value bins (each L1-normalized) over the torso
/// mask, then the six torso distances divided by the crop diagonal. An empty
/// mask leaves the histograms at zero.
inline FeatureVector extract_features(const TorsoCrop& crop) {
  crop.validate();
  FeatureVector f{};
  std::vector<PixelCoord> mask;
  try {
    mask = trapezoid_mask(crop);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyTrapezoid) throw;
  }
  if (!mask.empty()) {
    for (const auto& px : mask) {
      const Hsv hsv = rgb_to_hsv(crop.at(px.col, px.row));
      const auto hb = std::min<std::size_t>(static_cast<std::size_t>(hsv.h / 10.0), kHueBins - 1);
      const auto sb = std::min<std::size_t>(static_cast<std::size_t>(hsv.s * kSatBins), kSatBins - 1);
      const auto vb = std::min<std::size_t>(static_cast<std::size_t>(hsv.v * kValBins), kValBins - 1);
      f[hb] += 1.0;
      f[kHueBins + sb] += 1.0;
      f[kHueBins + kSatBins + vb] += 1.0;
    }
    const double n = static_cast<double>(mask.size());
    for (std::size_t i = 0; i < kHueBins + kSatBins + kValBins; ++i) f[i] /= n;
  }

  const auto& t = crop.torso;
  const ImagePoint ls = t[0], rs = t[1], lh = t[2], rh = t[3];
  const double diag = std::hypot(static_cast<double>(crop.width), static_cast<double>(crop.height));
  const std::array<double, kGeomFeatures> d{(ls - rs).norm(), (lh - rh).norm(), (ls - lh).norm(),
                                            (rs - rh).norm(), (ls - rh).norm(), (rs - lh).norm()};
  const std::size_t base = kHueBins + kSatBins + kValBins;
  for (std::size_t i = 0; i < kGeomFeatures; ++i) f[base + i] = std::min(d[i] / diag, 1.0);
  return f;
}

using LinearSvmModel = OneVsRestSvm<kFeatureDim, kNumCoarseClasses>;

struct LabeledFeatures {
  FeatureVector features{};
  CoarseClass label = CoarseClass::Front;
};

inline LinearSvmModel train_svm(std::span<const LabeledFeatures> data, const SvmHyperParams& hp = {}) {
  std::vector<FeatureVector> x;
  std::vector<std::size_t> y;
  x.reserve(data.size());
  y.reserve(data.size());
  for (const auto& s : data) {
    x.push_back(s.features);
    y.push_back(static_cast<std::size_t>(s.label));
  }
  return train_one_vs_rest<kFeatureDim, kNumCoarseClasses>(x, y, hp);
}

struct CoarsePrediction {
  CoarseClass cls = CoarseClass::Front;
  double margin = 0.0;
};

inline CoarsePrediction classify(const LinearSvmModel& model, const FeatureVector& f) {
  const auto [best, margin] = model.predict(f);
  return {static_cast<CoarseClass>(best), margin};
}

/// Field direction a player of class `cls` is expected to face.
inline AngleDeg coarse_prototype(CoarseClass cls, CameraAxis camera) {
  const double toward_camera = camera == CameraAxis::TowardPositiveY ? 270.0 : 90.0;
  return AngleDeg(cls == CoarseClass::Front ? toward_camera : toward_camera + 180.0);
}

/// Turns alpha_p around by 180 deg when a confident front/back label says the
/// torso normal points the wrong way. Side labels never change the estimate.
inline PoseEstimate validate_flip(const PoseEstimate& e, CoarseClass cls, double margin,
                                  CameraAxis camera = CameraAxis::TowardPositiveY,
                                  double margin_threshold = kDefaultMarginThreshold) {
  if (cls == CoarseClass::Side || margin < margin_threshold) return e;
  if (circular_diff(e.alpha_p, coarse_prototype(cls, camera)) <= 90.0) return e;
  PoseEstimate out = e;
  out.alpha_p = e.alpha_p + 180.0;
  out.lr = side_of(out.alpha_p);
  return out;
}

inline std::string serialize_model(const LinearSvmModel& m) {
  nlohmann::ordered_json j;
  j["classes"] = {"front", "side", "back"};
  j["weights"] = m.weights;
  j["biases"] = m.biases;
  j["hp"] = {{"epochs", m.hp.epochs},
             {"learning_rate", m.hp.learning_rate},
             {"lambda", m.hp.lambda},
             {"seed", m.hp.seed}};
  return j.dump(2) + "\n";
}

inline LinearSvmModel parse_model(std::string_view content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
  }
  try {
    if (j.at("classes") != nlohmann::json({"front", "side", "back"}))
      throw Error(ErrorKind::ParseError, "model: classes must be [front, side, back]");
    LinearSvmModel m;
    const auto& w = j.at("weights");
    if (!w.is_array() || w.size() != kNumCoarseClasses) throw Error(ErrorKind::ParseError, "model: need 3 weight rows");
    for (std::size_t c = 0; c < kNumCoarseClasses; ++c) {
      if (!w[c].is_array() || w[c].size() != kFeatureDim)
        throw Error(ErrorKind::ParseError, "model: weight rows must have 78 entries");
      for (std::size_t i = 0; i < kFeatureDim; ++i) m.weights[c][i] = w[c][i].get<double>();
    }
    const auto& b = j.at("biases");
    if (!b.is_array() || b.size() != kNumCoarseClasses) throw Error(ErrorKind::ParseError, "model: need 3 biases");
    for (std::size_t c = 0; c < kNumCoarseClasses; ++c) m.biases[c] = b[c].get<double>();
    if (j.contains("hp")) {
      const auto& hp = j["hp"];
      m.hp.epochs = hp.value("epochs", m.hp.epochs);
      m.hp.learning_rate = hp.value("learning_rate", m.hp.learning_rate);
      m.hp.lambda = hp.value("lambda", m.hp.lambda);
      m.hp.seed = hp.value("seed", m.hp.seed);
    }
    for (const auto& row : m.weights)
      for (double v : row)
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteFeature, "model weights must be finite");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
  }
}

/// One row of the training labels file:
/// crop_filename,label,lsx,lsy,rsx,rsy,lhx,lhy,rhx,rhy
struct CropLabel {
  std::string filename;
  CoarseClass label = CoarseClass::Front;
  TorsoImagePoints torso{};
};

namespace detail {

inline TorsoImagePoints parse_torso_fields(const std::vector<std::string>& f, std::size_t first, std::size_t line) {
  TorsoImagePoints t{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto x = text::parse_double(f[first + 2 * i]);
    const auto y = text::parse_double(f[first + 2 * i + 1]);
    if (!x || !y) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad torso coordinate");
    t[i] = {*x, *y};
  }
  return t;
}

}  // namespace detail

inline std::vector<CropLabel> parse_crop_labels(std::string_view content) {
  std::vector<CropLabel> out;
  std::size_t line_no = 0;
  bool header = false;
  for (const auto& l : text::lines(content)) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    const auto f = text::split_csv(l);
    if (!header) {
      if (f.empty() || f[0] != "crop_filename")
        throw Error(ErrorKind::ParseError, "labels: expected header starting with crop_filename");
      header = true;
      continue;
    }
    if (f.size() != 10) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 10 fields");
    CropLabel c;
    c.filename = f[0];
    const auto cls = parse_coarse_class(f[1]);
    if (!cls) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": label must be front/side/back");
    c.label = *cls;
    c.torso = detail::parse_torso_fields(f, 2, line_no);
    out.push_back(std::move(c));
  }
  return out;
}

/// One row of the crops index used at estimation time:
/// frame_id,player_id,crop_filename,lsx,lsy,rsx,rsy,lhx,lhy,rhx,rhy
struct CropIndexEntry {
  std::int64_t frame_id = 0;
  std::string player_id;
  std::string filename;
  TorsoImagePoints torso{};
};

inline std::vector<CropIndexEntry> parse_crop_index(std::string_view content) {
  std::vector<CropIndexEntry> out;
  std::size_t line_no = 0;
  bool header = false;
  for (const auto& l : text::lines(content)) {
    ++line_no;
    if (text::trim(l).empty()) continue;
    const auto f = text::split_csv(l);
    if (!header) {
      if (f.empty() || f[0] != "frame_id")
        throw Error(ErrorKind::ParseError, "crop index: expected header starting with frame_id");
      header = true;
      continue;
    }
    if (f.size() != 11) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 11 fields");
    CropIndexEntry c;
    const auto frame = text::parse_int(f[0]);
    if (!frame) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad frame_id");
    c.frame_id = *frame;
    c.player_id = f[1];
    c.filename = f[2];
    c.torso = detail::parse_torso_fields(f, 3, line_no);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace orient
