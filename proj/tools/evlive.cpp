// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: convert, features, detect, liveness, train, eval, synth.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evlive/error.hpp"
#include "evlive/evaluation.hpp"
#include "evlive/event_io.hpp"
#include "evlive/liveness.hpp"
#include "evlive/ocular.hpp"
#include "evlive/serialization.hpp"
#include "evlive/surfaces.hpp"
#include "evlive/synth.hpp"
#include "evlive/window_stats.hpp"

namespace fs = std::filesystem;
using namespace evlive;

namespace {

struct StreamArgs {
  std::string input;
  int width = 0;
  int height = 0;
  bool lenient = false;

  void add(CLI::App* app) {
    app->add_option("input", input, "Event file (.evt binary or .csv)")->required();
    app->add_option("--width", width, "Sensor width, required for CSV input");
    app->add_option("--height", height, "Sensor height, required for CSV input");
    app->add_flag("--lenient", lenient, "Sort out-of-order timestamps instead of failing");
  }

  EventStream load(ParseReport* report = nullptr) const {
    return load_stream(input, width, height, {.strict = !lenient}, report);
  }
};

struct RoiArgs {
  std::string file;
  std::vector<int> box;

  void add(CLI::App* app, const char* what) {
    app->add_option("--roi", file, std::string("ROI JSON file for the ") + what);
    app->add_option("--roi-box", box, "ROI as x0,y0,w,h")->expected(4)->delimiter(',');
  }

  std::optional<RegionOfInterest> get(RoiLabel label) const {
    if (!file.empty()) return roi_from_json(parse_json(read_text(file)));
    if (!box.empty()) return RegionOfInterest{box[0], box[1], box[2], box[3], label};
    return std::nullopt;
  }
};

void emit(const std::string& path, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_atomic(path, text);
  }
}

Json load_json(const std::string& path) { return parse_json(read_text(path)); }

ClipFeatures features_for(const EventStream& stream, const RegionOfInterest& roi,
                          Micros window) {
  return clip_features(window_stats(crop_roi(stream, roi), window), roi.label);
}

RegionOfInterest liveness_roi(const EventStream& s, const std::optional<RegionOfInterest>& roi) {
  return roi ? *roi : full_frame(s, RoiLabel::face);
}

std::string tidy_activity_csv(const OcularSignals& s) {
  std::string out = "t_us,on,off,all\n";
  char buf[128];
  for (std::size_t i = 0; i < s.all.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const int n = std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n",
                                static_cast<long long>(s.all.times[i]), s.on.values(k),
                                s.off.values(k), s.all.values(k));
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_convert(const StreamArgs& in, const std::string& output) {
  ParseReport report;
  const EventStream s = in.load(&report);
  save_stream(output, s);
  Json j = {{"events", s.size()},
            {"width", s.width()},
            {"height", s.height()},
            {"t_first_us", s.empty() ? Json(nullptr) : Json(s.t_first())},
            {"t_last_us", s.empty() ? Json(nullptr) : Json(s.t_last())},
            {"reordered", report.reordered},
            {"output", output}};
  emit("", j);
  return 0;
}

struct FeatureArgs {
  StreamArgs in;
  RoiArgs roi;
  double window_ms = 33.0;
  std::string output;
  std::string sae_csv;
  double sae_t_ms = -1;
  double sae_tau_ms = 66.0;
};

int cmd_features(const FeatureArgs& a) {
  const EventStream s = a.in.load();
  const RegionOfInterest roi = liveness_roi(s, a.roi.get(RoiLabel::face));
  const EventStream cropped = crop_roi(s, roi);
  const auto windows = window_stats(cropped, ms_to_us(a.window_ms));
  Json j = to_json(clip_features(windows, roi.label));
  Json wj = Json::array();
  for (const auto& w : windows) wj.push_back(to_json(w));
  j["windows"] = wj;
  emit(a.output, j);

  if (!a.sae_csv.empty()) {
    const Micros t_ref = a.sae_t_ms < 0 ? cropped.t_last() : ms_to_us(a.sae_t_ms);
    const SAEFrame f = sae_frame(cropped, t_ref, static_cast<double>(ms_to_us(a.sae_tau_ms)));
    write_atomic(a.sae_csv + ".pos.csv", sae_csv(f.values_pos));
    write_atomic(a.sae_csv + ".neg.csv", sae_csv(f.values_neg));
    write_atomic(a.sae_csv + ".json", sae_metadata(f).dump(2) + "\n");
  }
  return 0;
}

struct DetectArgs {
  StreamArgs in;
  RoiArgs roi;
  double tau_ms = 10.0;
  double dt_ms = 2.0;
  std::string params;
  std::string output;
  std::string activity;
};

OcularDetection run_detect(const EventStream& eye, double tau_ms, double dt_ms,
                           const std::string& params, OcularSignals* signals_out = nullptr) {
  BlinkParams bp;
  SaccadeParams sp;
  if (!params.empty()) {
    const Json j = load_json(params);
    bp = blink_params_from_json(j.contains("blink") ? j.at("blink") : Json::object());
    sp = saccade_params_from_json(j.contains("saccade") ? j.at("saccade") : Json::object());
  }
  OcularSignals sig = ocular_signals(eye, static_cast<double>(ms_to_us(tau_ms)), ms_to_us(dt_ms));
  auto det = detect_ocular(sig, bp, sp);
  if (signals_out) *signals_out = std::move(sig);
  return det;
}

int cmd_detect(const DetectArgs& a) {
  const auto roi = a.roi.get(RoiLabel::left_eye);
  if (!roi) throw Error(ErrorCode::InvalidArgument, "detect needs an eye ROI (--roi or --roi-box)");
  const EventStream s = a.in.load();
  OcularSignals sig;
  const auto det = run_detect(crop_roi(s, *roi), a.tau_ms, a.dt_ms, a.params, &sig);
  emit(a.output, to_json(det.all()));
  if (!a.activity.empty()) write_atomic(a.activity, tidy_activity_csv(sig));
  return 0;
}

struct LivenessArgs {
  StreamArgs in;
  RoiArgs roi;
  RoiArgs eye;
  std::string model;
  double window_ms = 33.0;
  std::string challenge;
  double issued_ms = 0;
  double response_ms = 3000;
  double tau_ms = 10.0;
  double dt_ms = 2.0;
  std::string output;
};

int cmd_liveness(const LivenessArgs& a) {
  const FeatureClassifier clf = classifier_from_json(load_json(a.model));
  const EventStream s = a.in.load();
  const auto roi = liveness_roi(s, a.roi.get(RoiLabel::face));
  const LivenessDecision d = classify(clf, features_for(s, roi, ms_to_us(a.window_ms)));
  if (a.challenge.empty()) {
    emit(a.output, decision_json(d));
    return 0;
  }
  const auto eye = a.eye.get(RoiLabel::left_eye);
  if (!eye) throw Error(ErrorCode::InvalidArgument, "a challenge needs an eye ROI (--eye-roi)");
  const auto det = run_detect(crop_roi(s, *eye), a.tau_ms, a.dt_ms, "");
  const auto session = ChallengeSession::issue(movement_from_string(a.challenge),
                                               ms_to_us(a.issued_ms), ms_to_us(a.response_ms));
  const auto movements = det.all();
  const ChallengeResult r = run_challenge(session, movements, d);
  Json j = decision_json(d, r.reason);
  j["passed"] = r.passed;
  j["state"] = std::string(to_string(r.session.state));
  emit(a.output, j);
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string output;
  std::string report;
  double train_ratio = 0.8;
  std::uint64_t seed = 0;
  double window_ms = 33.0;
  int width = 0;
  int height = 0;
};

/// Subject-disjoint split; subjects are shuffled with the seed.
std::set<std::string> training_subjects(const std::vector<ManifestEntry>& m, double ratio,
                                        std::uint64_t seed) {
  std::vector<std::string> subjects;
  for (const auto& e : m) subjects.push_back(e.subject);
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  Rng rng(seed);
  for (std::size_t i = subjects.size(); i > 1; --i) {
    std::swap(subjects[i - 1], subjects[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(subjects.size())));
  if (subjects.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, subjects.size() - 1);
  return {subjects.begin(), subjects.begin() + static_cast<std::ptrdiff_t>(n_train)};
}

int cmd_train(const TrainArgs& a) {
  const auto manifest = manifest_from_json(load_json(a.manifest));
  if (manifest.empty()) throw Error(ErrorCode::EmptyInput, "manifest lists no clips");
  const fs::path base = fs::path(a.manifest).parent_path();
  const bool keyed = std::any_of(manifest.begin(), manifest.end(),
                                 [](const ManifestEntry& e) { return !e.subject.empty(); });
  const auto train_set = keyed ? training_subjects(manifest, a.train_ratio, a.seed)
                               : std::set<std::string>{};

  std::vector<LabeledFeatures> train, test;
  std::vector<std::string> test_paths;
  for (const auto& e : manifest) {
    const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
    const EventStream s = load_stream(p, a.width, a.height);
    LabeledFeatures lf{features_for(s, liveness_roi(s, e.roi), ms_to_us(a.window_ms)), e.label};
    if (!keyed || train_set.count(e.subject)) {
      train.push_back(std::move(lf));
    } else {
      test.push_back(std::move(lf));
      test_paths.push_back(e.path);
    }
  }
  const FeatureClassifier clf = train_classifier(train);
  emit(a.output, to_json(clf));

  Json summary = {{"n_train", train.size()}, {"n_test", test.size()},
                  {"dropped", clf.dropped}};
  if (!test.empty()) {
    std::vector<LabeledDecision> decisions;
    Json rows = Json::array();
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto d = classify(clf, test[i].features);
      decisions.push_back({test[i].label, d});
      rows.push_back({{"path", test_paths[i]},
                      {"label", std::string(to_string(test[i].label))},
                      {"verdict", std::string(to_string(d.verdict))},
                      {"score", d.score}});
    }
    summary["decisions"] = rows;
    const bool both = std::any_of(test.begin(), test.end(), [](auto& t) { return t.label == Verdict::genuine; }) &&
                      std::any_of(test.begin(), test.end(), [](auto& t) { return t.label == Verdict::replay; });
    if (both) summary["test"] = to_json(biometric_metrics(decisions));
  }
  if (!a.report.empty()) emit(a.report, summary);
  return 0;
}

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string decisions;
  double iou = kDefaultIouThreshold;
  std::string output;
};

int cmd_eval(const EvalArgs& a) {
  if (!a.decisions.empty()) {
    const auto d = labeled_decisions_from_json(load_json(a.decisions));
    const auto r = biometric_metrics(d);
    emit(a.output, to_json(r));
    if (!a.output.empty()) std::printf("ACER %.2f\n", r.acer);
    return 0;
  }
  if (a.pred.empty() || a.gt.empty()) {
    throw Error(ErrorCode::InvalidArgument, "eval needs --pred and --gt, or --decisions");
  }
  auto pred = segments_from_json(load_json(a.pred));
  auto gt = segments_from_json(load_json(a.gt));
  auto by_onset = [](const TemporalSegment& x, const TemporalSegment& y) { return x.onset < y.onset; };
  std::stable_sort(pred.begin(), pred.end(), by_onset);
  std::stable_sort(gt.begin(), gt.end(), by_onset);
  const auto r = evaluate_segments(pred, gt, a.iou);
  emit(a.output, to_json(r));
  if (!a.output.empty()) std::printf("macro F1 %.2f\n", r.macro.f1);
  return 0;
}

struct SynthArgs {
  std::string spec;
  std::uint64_t seed = 0;
  std::string output;
  std::string truth;
  std::string roi_out;
  std::string replay;
  std::string replay_spec;
  double fps = 50.0;
  double brightness = 0.6;
  double jitter_ms = 0;
  std::string dataset;
  int subjects = 20;
  int clips_per_subject = 1;
  int min_saccades = 0;
  int max_saccades = 0;
};

ReplaySpec replay_for(const SynthArgs& a, std::uint64_t seed) {
  if (!a.replay_spec.empty()) return replay_spec_from_json(load_json(a.replay_spec));
  ReplaySpec r;
  r.fps = a.fps;
  r.brightness_factor = a.brightness;
  r.jitter = ms_to_us(a.jitter_ms);
  r.seed = seed;
  r.validate();
  return r;
}

int cmd_synth_dataset(const SynthArgs& a) {
  const fs::path dir = a.dataset;
  fs::create_directories(dir);
  SuiteOptions opt;
  opt.min_saccades = a.min_saccades;
  opt.max_saccades = a.max_saccades;
  std::vector<ManifestEntry> manifest;
  char name[64];
  for (int subj = 0; subj < a.subjects; ++subj) {
    std::snprintf(name, sizeof name, "s%03d", subj);
    const std::string subject = name;
    for (int k = 0; k < a.clips_per_subject; ++k) {
      const std::uint64_t seed = a.seed * 1'000'003ULL + static_cast<std::uint64_t>(subj) * 1000 +
                                 static_cast<std::uint64_t>(k);
      const ClipSpec spec = random_clip_spec(seed, opt);
      const SyntheticClip clip = synth_genuine(spec);
      const std::string stem = subject + "_" + std::to_string(k);
      save_stream(dir / (stem + "_genuine.evt"), clip.stream);
      save_stream(dir / (stem + "_replay.evt"), synth_replay(clip.stream, replay_for(a, seed)));
      emit((dir / (stem + "_truth.json")).string(), to_json(clip.truth));
      manifest.push_back({stem + "_genuine.evt", subject, Verdict::genuine, std::nullopt});
      manifest.push_back({stem + "_replay.evt", subject, Verdict::replay, std::nullopt});
    }
  }
  emit((dir / "manifest.json").string(), to_json(manifest));
  return 0;
}

int cmd_synth(const SynthArgs& a) {
  if (!a.dataset.empty()) return cmd_synth_dataset(a);
  if (a.output.empty()) throw Error(ErrorCode::InvalidArgument, "synth needs -o or --dataset");
  ClipSpec spec;
  if (!a.spec.empty()) {
    spec = clip_spec_from_json(load_json(a.spec));
  } else {
    SuiteOptions opt;
    opt.min_saccades = a.min_saccades;
    opt.max_saccades = a.max_saccades;
    spec = random_clip_spec(a.seed, opt);
  }
  const SyntheticClip clip = synth_genuine(spec);
  save_stream(a.output, clip.stream);
  if (!a.truth.empty()) emit(a.truth, to_json(clip.truth));
  if (!a.roi_out.empty()) emit(a.roi_out, to_json(spec.eye_roi));
  if (!a.replay.empty()) save_stream(a.replay, synth_replay(clip.stream, replay_for(a, spec.seed)));
  return 0;
}

void report_error(const char* code, const std::string& message) {
  const Json j = {{"error", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-camera ocular movement and liveness toolkit"};
  app.require_subcommand(1);

  StreamArgs convert_in;
  std::string convert_out;
  auto* convert = app.add_subcommand("convert", "Convert between binary and CSV event files");
  convert_in.add(convert);
  convert->add_option("output", convert_out, "Output path; format follows the extension")->required();

  FeatureArgs fa;
  auto* features = app.add_subcommand("features", "Windowed statistics and clip features");
  fa.in.add(features);
  fa.roi.add(features, "features (default: full frame)");
  features->add_option("--window-ms", fa.window_ms, "Window length in ms")->capture_default_str();
  features->add_option("-o,--output", fa.output, "Output JSON (default: stdout)");
  features->add_option("--sae", fa.sae_csv, "Write SAE maps to <prefix>.pos.csv/.neg.csv/.json");
  features->add_option("--sae-t-ms", fa.sae_t_ms, "SAE reference time in ms (default: last event)");
  features->add_option("--sae-tau-ms", fa.sae_tau_ms, "SAE decay in ms")->capture_default_str();

  DetectArgs da;
  auto* detect = app.add_subcommand("detect", "Blink and saccade segmentation");
  da.in.add(detect);
  da.roi.add(detect, "eye");
  detect->add_option("--tau-ms", da.tau_ms, "Activity decay in ms")->capture_default_str();
  detect->add_option("--dt-ms", da.dt_ms, "Resampling step in ms")->capture_default_str();
  detect->add_option("--params", da.params, "Detector parameter JSON {blink:{..}, saccade:{..}}");
  detect->add_option("-o,--output", da.output, "Segments JSON (default: stdout)");
  detect->add_option("--activity-csv", da.activity, "Write resampled activity CSV");

  LivenessArgs la;
  auto* liveness = app.add_subcommand("liveness", "Genuine-vs-replay decision for one clip");
  la.in.add(liveness);
  la.roi.add(liveness, "liveness features (default: full frame)");
  liveness->add_option("--model", la.model, "Classifier JSON from `train`")->required();
  liveness->add_option("--window-ms", la.window_ms, "Window length in ms")->capture_default_str();
  liveness->add_option("--challenge", la.challenge, "Require a response: blink or saccade");
  liveness->add_option("--issued-ms", la.issued_ms, "Challenge issue time in ms");
  liveness->add_option("--response-ms", la.response_ms, "Response deadline after issue, in ms")
      ->capture_default_str();
  liveness->add_option("--eye-roi", la.eye.file, "Eye ROI JSON used for the challenge");
  liveness->add_option("--eye-roi-box", la.eye.box, "Eye ROI as x0,y0,w,h")->expected(4)->delimiter(',');
  liveness->add_option("--tau-ms", la.tau_ms, "Activity decay in ms")->capture_default_str();
  liveness->add_option("--dt-ms", la.dt_ms, "Resampling step in ms")->capture_default_str();
  liveness->add_option("-o,--output", la.output, "Decision JSON (default: stdout)");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Fit the liveness classifier from a manifest");
  train->add_option("--manifest", ta.manifest, "Manifest JSON listing clips")->required();
  train->add_option("-o,--output", ta.output, "Classifier JSON")->required();
  train->add_option("--report", ta.report, "Write split summary and held-out metrics");
  train->add_option("--train-ratio", ta.train_ratio, "Fraction of subjects used for training")
      ->capture_default_str();
  train->add_option("--seed", ta.seed, "Seed for the subject split")->capture_default_str();
  train->add_option("--window-ms", ta.window_ms, "Window length in ms")->capture_default_str();
  train->add_option("--width", ta.width, "Sensor width for CSV clips");
  train->add_option("--height", ta.height, "Sensor height for CSV clips");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Segmentation or liveness metrics");
  eval->add_option("--pred", ea.pred, "Predicted segments JSON");
  eval->add_option("--gt", ea.gt, "Ground-truth segments JSON");
  eval->add_option("--decisions", ea.decisions, "Labeled decisions JSON array");
  eval->add_option("--iou", ea.iou, "IoU threshold")->capture_default_str();
  eval->add_option("-o,--output", ea.output, "Report JSON (default: stdout)");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate synthetic genuine and replay clips");
  synth->add_option("--spec", sa.spec, "ClipSpec JSON (default: random spec from --seed)");
  synth->add_option("--seed", sa.seed, "Seed")->capture_default_str();
  synth->add_option("-o,--output", sa.output, "Genuine clip output");
  synth->add_option("--truth", sa.truth, "Ground-truth segments JSON");
  synth->add_option("--roi-out", sa.roi_out, "Write the eye ROI JSON");
  synth->add_option("--replay", sa.replay, "Also write a replay clip");
  synth->add_option("--replay-spec", sa.replay_spec, "ReplaySpec JSON");
  synth->add_option("--fps", sa.fps, "Replay display rate")->capture_default_str();
  synth->add_option("--brightness", sa.brightness, "Replay brightness factor")->capture_default_str();
  synth->add_option("--jitter-ms", sa.jitter_ms, "Replay timestamp jitter in ms")->capture_default_str();
  synth->add_option("--dataset", sa.dataset, "Write a subject dataset and manifest to this directory");
  synth->add_option("--subjects", sa.subjects, "Subjects in --dataset mode")->capture_default_str();
  synth->add_option("--clips-per-subject", sa.clips_per_subject, "Clips per subject")
      ->capture_default_str();
  synth->add_option("--min-saccades", sa.min_saccades, "Saccades per random clip, lower bound");
  synth->add_option("--max-saccades", sa.max_saccades, "Saccades per random clip, upper bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error("UsageError", e.what());
    return 1;
  }

  try {
    if (*convert) return cmd_convert(convert_in, convert_out);
    if (*features) return cmd_features(fa);
    if (*detect) return cmd_detect(da);
    if (*liveness) return cmd_liveness(la);
    if (*train) return cmd_train(ta);
    if (*eval) return cmd_eval(ea);
    if (*synth) return cmd_synth(sa);
  } catch (const Error& e) {
    report_error(std::string(to_string(e.code())).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("Error", e.what());
    return 1;
  }
  return 1;
}
