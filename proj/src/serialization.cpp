// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/serialization.hpp"

#include "evlive/error.hpp"

namespace evlive {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(std::string("field '") + key + "': " + e.what());
  }
}

/// Reads `<stem>_us`, falling back to `<stem>_ms`; keeps `fallback` if neither.
Micros micros(const Json& j, const std::string& stem, Micros fallback) {
  const std::string us = stem + "_us";
  const std::string ms = stem + "_ms";
  if (j.contains(us)) return get<Micros>(j, us.c_str());
  if (j.contains(ms)) return ms_to_us(get<double>(j, ms.c_str()));
  return fallback;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<FeatureStat> stat_from(const Json& j, const std::string& stem) {
  const std::string m = stem + "_mean";
  const std::string s = stem + "_std";
  if (!j.contains(m) || j.at(m).is_null()) return std::nullopt;
  return FeatureStat{get<double>(j, m.c_str()), get<double>(j, s.c_str())};
}

Eigen::VectorXd vector_from(const Json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Movement> movements_from(const Json& j, const char* key) {
  std::vector<Movement> out;
  if (!j.contains(key)) return out;
  for (const Json& m : j.at(key)) out.push_back({micros(m, "onset", 0), micros(m, "duration", 0)});
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const RegionOfInterest& roi) {
  return {{"x0", roi.x0}, {"y0", roi.y0}, {"w", roi.w}, {"h", roi.h},
          {"label", std::string(to_string(roi.label))}};
}

RegionOfInterest roi_from_json(const Json& j) {
  RegionOfInterest roi;
  roi.x0 = get<int>(j, "x0");
  roi.y0 = get<int>(j, "y0");
  roi.w = get<int>(j, "w");
  roi.h = get<int>(j, "h");
  roi.label = roi_label_from_string(get_or<std::string>(j, "label", "custom"));
  if (roi.w <= 0 || roi.h <= 0) schema_error("ROI extent must be positive");
  return roi;
}

Json to_json(const TemporalSegment& s) {
  return {{"onset_us", s.onset},
          {"offset_us", s.offset},
          {"label", std::string(to_string(s.label))},
          {"score", s.score}};
}

Json to_json(const std::vector<TemporalSegment>& segs) {
  Json arr = Json::array();
  for (const auto& s : segs) arr.push_back(to_json(s));
  return arr;
}

std::vector<TemporalSegment> segments_from_json(const Json& j) {
  if (!j.is_array()) schema_error("segment file must hold a JSON array");
  std::vector<TemporalSegment> out;
  for (const Json& e : j) {
    TemporalSegment s;
    s.onset = get<Micros>(e, "onset_us");
    s.offset = get<Micros>(e, "offset_us");
    s.label = movement_from_string(get<std::string>(e, "label"));
    s.score = get_or<double>(e, "score", 1.0);
    if (s.offset <= s.onset) schema_error("segment offset must follow onset");
    out.push_back(s);
  }
  return out;
}

BlinkParams blink_params_from_json(const Json& j, BlinkParams p) {
  p.gaussian_sigma = micros(j, "gaussian_sigma", p.gaussian_sigma);
  p.pos_prominence = get_or(j, "pos_prominence", p.pos_prominence);
  p.neg_prominence = get_or(j, "neg_prominence", p.neg_prominence);
  p.search_window = micros(j, "search_window", p.search_window);
  p.min_peak_width = micros(j, "min_peak_width", p.min_peak_width);
  p.min_polarity_balance = get_or(j, "min_polarity_balance", p.min_polarity_balance);
  p.min_noise_ratio = get_or(j, "min_noise_ratio", p.min_noise_ratio);
  p.validate();
  return p;
}

SaccadeParams saccade_params_from_json(const Json& j, SaccadeParams p) {
  p.peak_threshold = get_or(j, "peak_threshold", p.peak_threshold);
  p.min_width = micros(j, "min_width", p.min_width);
  p.max_width = micros(j, "max_width", p.max_width);
  p.min_segment = micros(j, "min_segment", p.min_segment);
  p.blink_guard = micros(j, "blink_guard", p.blink_guard);
  p.min_noise_ratio = get_or(j, "min_noise_ratio", p.min_noise_ratio);
  p.validate();
  return p;
}

Json to_json(const BlinkParams& p) {
  return {{"gaussian_sigma_us", p.gaussian_sigma},
          {"pos_prominence", p.pos_prominence},
          {"neg_prominence", p.neg_prominence},
          {"search_window_us", p.search_window},
          {"min_peak_width_us", p.min_peak_width},
          {"min_polarity_balance", p.min_polarity_balance},
          {"min_noise_ratio", p.min_noise_ratio}};
}

Json to_json(const SaccadeParams& p) {
  return {{"peak_threshold", p.peak_threshold},
          {"min_width_us", p.min_width},
          {"max_width_us", p.max_width},
          {"min_segment_us", p.min_segment},
          {"blink_guard_us", p.blink_guard},
          {"min_noise_ratio", p.min_noise_ratio}};
}

Json to_json(const WindowStats& w) {
  return {{"t_start", w.t_start},
          {"window_len", w.window_len},
          {"event_rate", w.event_rate},
          {"polarity_balance", optional_number(w.polarity_balance)},
          {"median_pixel_iei", optional_number(w.median_pixel_iei)}};
}

Json to_json(const ClipFeatures& f) {
  Json j;
  j["roi_label"] = std::string(to_string(f.roi_label));
  const auto v = feature_vector(f);
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    j[std::string(kFeatureNames[i])] = optional_number(v[i]);
  }
  j["n_windows"] = f.n_windows;
  return j;
}

ClipFeatures clip_features_from_json(const Json& j) {
  ClipFeatures f;
  f.roi_label = roi_label_from_string(get_or<std::string>(j, "roi_label", "face"));
  f.n_windows = get<std::size_t>(j, "n_windows");
  f.event_rate = stat_from(j, "event_rate");
  f.polarity_balance = stat_from(j, "polarity_balance");
  f.median_pixel_iei = stat_from(j, "median_pixel_iei");
  return f;
}

Json to_json(const FeatureClassifier& clf) {
  return {{"means", to_std(clf.means)},       {"stds", to_std(clf.stds)},
          {"weights", to_std(clf.weights)},   {"bias", clf.bias},
          {"threshold", clf.threshold},       {"feature_names", clf.feature_names}};
}

FeatureClassifier classifier_from_json(const Json& j) {
  FeatureClassifier clf;
  clf.means = vector_from(j, "means");
  clf.stds = vector_from(j, "stds");
  clf.weights = vector_from(j, "weights");
  clf.bias = get<double>(j, "bias");
  clf.threshold = get<double>(j, "threshold");
  clf.feature_names = get<std::vector<std::string>>(j, "feature_names");
  const auto d = static_cast<Eigen::Index>(clf.feature_names.size());
  if (clf.means.size() != d || clf.stds.size() != d || clf.weights.size() != d) {
    schema_error("classifier vectors disagree with feature_names");
  }
  if ((clf.stds.array() <= 0).any()) schema_error("classifier stds must be positive");
  return clf;
}

Json decision_json(const LivenessDecision& d, std::optional<ChallengeReason> reason) {
  const ChallengeReason r = reason.value_or(d.verdict == Verdict::genuine
                                                ? ChallengeReason::ok
                                                : ChallengeReason::liveness_failed);
  return {{"verdict", std::string(to_string(d.verdict))},
          {"score", d.score},
          {"reason", std::string(to_string(r))}};
}

Json to_json(const SegmentationReport& r) {
  Json j;
  j["iou_threshold"] = r.iou_threshold;
  Json per = Json::object();
  for (const auto& [label, s] : r.per_class) {
    const ClassCounts& c = r.counts.at(label);
    per[std::string(to_string(label))] = {{"precision", s.precision}, {"recall", s.recall},
                                          {"f1", s.f1},               {"tp", c.tp},
                                          {"fp", c.fp},               {"fn", c.fn}};
  }
  j["per_class"] = per;
  j["macro"] = {{"precision", r.macro.precision}, {"recall", r.macro.recall}, {"f1", r.macro.f1}};
  Json pairs = Json::array();
  for (const auto& m : r.matched) pairs.push_back({{"pred", m.pred}, {"gt", m.gt}, {"iou", m.iou}});
  j["matched"] = pairs;
  j["on_threshold"] = r.on_threshold;
  j["empty"] = r.empty;
  return j;
}

Json to_json(const BiometricReport& r) {
  return {{"top1_accuracy", r.top1_accuracy}, {"apcer", r.apcer},
          {"bpcer", r.bpcer},                 {"acer", r.acer},
          {"n_attack", r.n_attack},           {"n_bona_fide", r.n_bona_fide}};
}

std::vector<LabeledDecision> labeled_decisions_from_json(const Json& j) {
  if (!j.is_array()) schema_error("decision file must hold a JSON array");
  std::vector<LabeledDecision> out;
  for (const Json& e : j) {
    LabeledDecision d;
    d.label = verdict_from_string(get<std::string>(e, "label"));
    d.decision.verdict = verdict_from_string(get<std::string>(e, "verdict"));
    d.decision.score = get_or<double>(e, "score", d.decision.verdict == Verdict::genuine ? 1.0 : 0.0);
    out.push_back(d);
  }
  return out;
}

Json sae_metadata(const SAEFrame& frame) {
  return {{"width", frame.width}, {"height", frame.height}, {"t_ref", frame.t_ref},
          {"tau", frame.tau},     {"layout", "row-major"}};
}

Json to_json(const ClipSpec& s) {
  auto moves = [](const std::vector<Movement>& ms) {
    Json arr = Json::array();
    for (const auto& m : ms) arr.push_back({{"onset_us", m.onset}, {"duration_us", m.duration}});
    return arr;
  };
  return {{"duration_us", s.duration},
          {"width", s.width},
          {"height", s.height},
          {"eye_roi", to_json(s.eye_roi)},
          {"blinks", moves(s.blinks)},
          {"saccades", moves(s.saccades)},
          {"noise_rate", s.noise_rate},
          {"seed", s.seed},
          {"amplitude", s.amplitude},
          {"annotation_margin_us", s.annotation_margin}};
}

ClipSpec clip_spec_from_json(const Json& j) {
  ClipSpec s;
  s.duration = micros(j, "duration", s.duration);
  s.width = get_or(j, "width", s.width);
  s.height = get_or(j, "height", s.height);
  if (j.contains("eye_roi")) s.eye_roi = roi_from_json(j.at("eye_roi"));
  s.blinks = movements_from(j, "blinks");
  s.saccades = movements_from(j, "saccades");
  s.noise_rate = get_or(j, "noise_rate", s.noise_rate);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  s.amplitude = get_or(j, "amplitude", s.amplitude);
  s.annotation_margin = micros(j, "annotation_margin", s.annotation_margin);
  s.validate();
  return s;
}

ReplaySpec replay_spec_from_json(const Json& j) {
  ReplaySpec r;
  r.fps = get_or(j, "fps", r.fps);
  r.brightness_factor = get_or(j, "brightness_factor", r.brightness_factor);
  r.jitter = micros(j, "jitter", r.jitter);
  r.seed = get_or<std::uint64_t>(j, "seed", r.seed);
  r.validate();
  return r;
}

std::vector<ManifestEntry> manifest_from_json(const Json& j) {
  const Json& clips = j.is_array() ? j : field(j, "clips");
  std::vector<ManifestEntry> out;
  for (const Json& c : clips) {
    ManifestEntry e;
    e.path = get<std::string>(c, "path");
    e.subject = get_or<std::string>(c, "subject", "");
    e.label = verdict_from_string(get<std::string>(c, "label"));
    if (c.contains("roi")) e.roi = roi_from_json(c.at("roi"));
    out.push_back(e);
  }
  return out;
}

Json to_json(const std::vector<ManifestEntry>& manifest) {
  Json arr = Json::array();
  for (const auto& e : manifest) {
    Json c = {{"path", e.path}, {"subject", e.subject}, {"label", std::string(to_string(e.label))}};
    if (e.roi) c["roi"] = to_json(*e.roi);
    arr.push_back(c);
  }
  return {{"clips", arr}};
}

}  // namespace evlive
