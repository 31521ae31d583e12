// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evlive/activity.hpp"
#include "evlive/evaluation.hpp"
#include "evlive/event_io.hpp"
#include "evlive/liveness.hpp"
#include "evlive/ocular.hpp"
#include "evlive/surfaces.hpp"
#include "evlive/synth.hpp"
#include "evlive/window_stats.hpp"

using namespace evlive;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o = body();
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (time_limit_s > 0 && secs >= time_limit_s) {
    o.pass = false;
    o.detail += " [over time limit]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  criterion %d: %s | %s | %.2fs\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EventStream random_stream(std::mt19937_64& rng, std::size_t n, int w, int h, Micros span) {
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1), dp(0, 1);
  std::uniform_int_distribution<Micros> dt(0, span);
  std::vector<Event> ev(n);
  for (auto& e : ev) {
    e = {static_cast<std::uint16_t>(dx(rng)), static_cast<std::uint16_t>(dy(rng)), dt(rng),
         static_cast<std::int8_t>(dp(rng) ? 1 : -1)};
  }
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return EventStream(w, h, std::move(ev));
}

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
  void add(const Matching& m, MovementLabel l) {
    auto it = m.counts.find(l);
    if (it == m.counts.end()) return;
    tp += it->second.tp;
    fp += it->second.fp;
    fn += it->second.fn;
  }
  double precision() const { return tp + fp ? 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp) : 0; }
  double recall() const { return tp + fn ? 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn) : 0; }
  double f1() const { return f1_score(precision(), recall()); }
};

std::vector<TemporalSegment> only(const std::vector<TemporalSegment>& s, MovementLabel l) {
  std::vector<TemporalSegment> out;
  std::copy_if(s.begin(), s.end(), std::back_inserter(out),
               [l](const TemporalSegment& x) { return x.label == l; });
  return out;
}

// --- criteria ---------------------------------------------------------------

Outcome activity_oracle() {
  std::mt19937_64 rng(1);
  double worst = 0;
  std::size_t samples = 0;
  for (int k = 0; k < 100; ++k) {
    const auto s = random_stream(rng, 1 + rng() % 1000, 16, 16, 1 + static_cast<Micros>(rng() % 500'000));
    const double tau = 1000.0 + static_cast<double>(rng() % 20'000);
    const auto a = activity_profile(s, Channel::all, tau);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double ref = 0;
      for (const auto& e : s.events()) {
        if (e.t > a.times[i]) break;
        ref += std::exp(-static_cast<double>(a.times[i] - e.t) / tau);
      }
      worst = std::max(worst, std::abs(a.values(static_cast<Eigen::Index>(i)) - ref) / ref);
      ++samples;
    }
  }
  return {worst <= 1e-9, fmt("%zu samples, max rel err %.2e", samples, worst)};
}

Outcome sae_voxel_oracle() {
  std::mt19937_64 rng(2);
  double worst = 0;
  bool voxel_ok = true;
  for (int k = 0; k < 100; ++k) {
    const int w = 4 + static_cast<int>(rng() % 30), h = 4 + static_cast<int>(rng() % 30);
    const auto s = random_stream(rng, 1 + rng() % 1000, w, h, 1 + static_cast<Micros>(rng() % 400'000));
    const Micros t_ref = s.t_first() + static_cast<Micros>(rng() % static_cast<std::uint64_t>(s.t_last() - s.t_first() + 1));
    const double tau = 66'000.0;
    const auto f = sae_frame(s, t_ref, tau);
    std::map<std::tuple<int, int, int>, Micros> latest;
    for (const auto& e : s.events()) {
      if (e.t <= t_ref) latest[{e.x, e.y, e.p}] = e.t;
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int p : {1, -1}) {
          auto it = latest.find({x, y, p});
          const double ref = it == latest.end() ? 0.0 : std::exp(-static_cast<double>(t_ref - it->second) / tau);
          worst = std::max(worst, std::abs((p > 0 ? f.values_pos(y, x) : f.values_neg(y, x)) - ref));
        }
      }
    }
    const int bins = 1 + static_cast<int>(rng() % 12);
    const auto g = voxel_grid(s, bins);
    std::vector<std::uint32_t> hist(static_cast<std::size_t>(bins) * 2 * static_cast<std::size_t>(w * h), 0);
    const Micros span = s.t_last() - s.t_first() + 1;
    for (const auto& e : s.events()) {
      const auto b = static_cast<std::size_t>((e.t - s.t_first()) * bins / span);
      ++hist[((b * 2 + (e.p > 0 ? 0 : 1)) * static_cast<std::size_t>(h) + e.y) * static_cast<std::size_t>(w) + e.x];
    }
    voxel_ok = voxel_ok && g.counts == hist && g.total() == s.size();
  }
  return {worst <= 1e-12 && voxel_ok,
          fmt("SAE max abs err %.2e, voxel %s", worst, voxel_ok ? "exact" : "MISMATCH")};
}

Outcome metric_arithmetic() {
  const double f1 = f1_score(97.62, 93.18);
  bool ok = std::abs(f1 - 95.35) <= 0.01;
  std::string detail = fmt("F1 %.4f", f1);
  struct Row { int a, b; double acer; };
  for (auto [a, b, acer] : {Row{42, 51, 4.65}, Row{69, 81, 7.50}, Row{82, 76, 7.90}, Row{102, 85, 9.35}}) {
    std::vector<LabeledDecision> d;
    for (int i = 0; i < 1000; ++i) {
      d.push_back({Verdict::replay, {i < a ? Verdict::genuine : Verdict::replay, 0}});
      d.push_back({Verdict::genuine, {i < b ? Verdict::replay : Verdict::genuine, 0}});
    }
    const auto r = biometric_metrics(d);
    const bool row_ok = r.acer == (r.apcer + r.bpcer) / 2 &&
                        std::llround(r.acer * 100) == std::llround(acer * 100);
    ok = ok && row_ok;
    detail += fmt(", (%.2f,%.2f)->%.2f", r.apcer, r.bpcer, r.acer);
  }
  return {ok, detail};
}

Outcome matching_oracle() {
  std::mt19937_64 rng(4);
  auto segments = [&](std::size_t n) {
    std::vector<TemporalSegment> out;
    Micros t = static_cast<Micros>(rng() % 50);
    for (std::size_t i = 0; i < n; ++i) {
      const Micros len = 10 + static_cast<Micros>(rng() % 100);
      out.push_back({t, t + len, rng() % 2 ? MovementLabel::blink : MovementLabel::saccade, 1});
      t += len + static_cast<Micros>(rng() % 60);
    }
    return out;
  };
  int agree = 0;
  const int cases = 2000;
  for (int k = 0; k < cases; ++k) {
    const auto gt = segments(rng() % 5);
    auto pred = segments(rng() % 5);
    for (auto& p : pred) {
      const Micros sh = static_cast<Micros>(rng() % 40) - 20;
      p.onset += sh;
      p.offset += sh;
    }
    std::size_t best = 0;
    std::vector<bool> used(gt.size());
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t n) {
      if (i == pred.size()) { best = std::max(best, n); return; }
      go(i + 1, n);
      for (std::size_t j = 0; j < gt.size(); ++j) {
        if (used[j] || pred[i].label != gt[j].label || temporal_iou(pred[i], gt[j]) < 0.5) continue;
        used[j] = true;
        go(i + 1, n + 1);
        used[j] = false;
      }
    };
    go(0, 0);
    if (match_segments(pred, gt).pairs.size() == best) ++agree;
  }
  return {agree == cases, fmt("%d/%d instances agree", agree, cases)};
}

Outcome blink_suite() {
  Counts c;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto spec = random_clip_spec(10'000 + seed);
    const auto clip = synth_genuine(spec);
    const auto sig = ocular_signals(crop_roi(clip.stream, spec.eye_roi));
    const auto blinks = detect_blinks(sig.on, sig.off);
    c.add(match_segments(blinks, only(clip.truth, MovementLabel::blink)), MovementLabel::blink);
  }
  return {c.f1() >= 90.0, fmt("P %.2f R %.2f F1 %.2f (tp %zu fp %zu fn %zu)", c.precision(),
                              c.recall(), c.f1(), c.tp, c.fp, c.fn)};
}

Outcome saccade_suite() {
  SuiteOptions opt;
  opt.min_blinks = 1;
  opt.max_blinks = 3;
  opt.min_saccades = 2;
  opt.max_saccades = 5;
  Counts with, without;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto spec = random_clip_spec(20'000 + seed, opt);
    const auto clip = synth_genuine(spec);
    const auto sig = ocular_signals(crop_roi(clip.stream, spec.eye_roi));
    const auto det = detect_ocular(sig);
    const auto gt = only(clip.truth, MovementLabel::saccade);
    with.add(match_segments(det.saccades, gt), MovementLabel::saccade);
    without.add(match_segments(detect_saccades(sig.all, {}), gt), MovementLabel::saccade);
  }
  const bool ok = with.precision() >= 80 && with.recall() >= 80 && with.f1() > without.f1();
  return {ok, fmt("suppressed P %.2f R %.2f F1 %.2f; unsuppressed F1 %.2f", with.precision(),
                  with.recall(), with.f1(), without.f1())};
}

Outcome replay_signature() {
  int pairs = 0, multiples_ok = 0, direction_ok = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = synth_genuine(random_clip_spec(30'000 + seed));
    ReplaySpec rs;
    rs.seed = seed;
    const auto r = synth_replay(g.stream, rs);
    const auto ivs = pixel_inter_event_intervals(r.events(), r.width());
    ++pairs;
    if (std::all_of(ivs.begin(), ivs.end(), [](Micros iv) { return iv > 0 && iv % 20'000 == 0; })) {
      ++multiples_ok;
    }
    const auto mg = median_pixel_iei(g.stream.events(), g.stream.width());
    const auto mr = median_pixel_iei(r.events(), r.width());
    if (mg && mr && *mr > *mg) ++direction_ok;
  }
  return {multiples_ok == pairs && direction_ok == pairs,
          fmt("%d pairs: frame-multiple IEIs %d, replay IEI > genuine %d", pairs, multiples_ok,
              direction_ok)};
}

Outcome liveness_end_to_end() {
  const int subjects = 20, per_subject = 3;
  std::vector<LabeledFeatures> train, test;
  for (int s = 0; s < subjects; ++s) {
    for (int k = 0; k < per_subject; ++k) {
      const std::uint64_t seed = 40'000 + static_cast<std::uint64_t>(s * 100 + k);
      const auto g = synth_genuine(random_clip_spec(seed));
      ReplaySpec rs;
      rs.seed = seed;
      const auto r = synth_replay(g.stream, rs);
      auto& dst = s < 16 ? train : test;
      dst.push_back({clip_features(window_stats(g.stream)), Verdict::genuine});
      dst.push_back({clip_features(window_stats(r)), Verdict::replay});
    }
  }
  const auto clf = train_classifier(train);
  std::vector<LabeledDecision> d;
  for (const auto& t : test) d.push_back({t.label, classify(clf, t.features)});
  const auto rep = biometric_metrics(d);
  return {rep.top1_accuracy >= 95 && rep.acer <= 5,
          fmt("16 train / 4 test subjects, %zu test clips: accuracy %.2f APCER %.2f BPCER %.2f ACER %.2f",
              d.size(), rep.top1_accuracy, rep.apcer, rep.bpcer, rep.acer)};
}

Outcome invariants() {
  int checks = 0, failed = 0;
  auto expect = [&](bool c) { ++checks; failed += c ? 0 : 1; };

  SuiteOptions opt;
  opt.min_blinks = 1;
  opt.max_blinks = 3;
  opt.min_saccades = 1;
  opt.max_saccades = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = random_clip_spec(50'000 + seed, opt);
    const auto clip = synth_genuine(spec);
    const auto sig = ocular_signals(crop_roi(clip.stream, spec.eye_roi));
    const auto det = detect_ocular(sig);

    for (double c : {1e-4, 0.5, 3.0, 1e5}) {
      OcularSignals s = sig;
      s.on.values *= c;
      s.off.values *= c;
      s.all.values *= c;
      const auto d = detect_ocular(s);
      auto same = [](const auto& a, const auto& b) {
        return a.size() == b.size() &&
               std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
                 return x.onset == y.onset && x.offset == y.offset && x.label == y.label;
               });
      };
      expect(same(d.blinks, det.blinks) && same(d.saccades, det.saccades));
    }

    std::size_t prev = SIZE_MAX;
    for (int k = 1; k <= 20; ++k) {
      SaccadeParams p;
      p.peak_threshold = 0.05 * k;
      const auto n = detect_saccades(sig.all, det.blinks, p).size();
      expect(n <= prev);
      prev = n;
    }

    const auto once = suppress_blinks(sig.all, det.blinks);
    expect((suppress_blinks(once, det.blinks).values == once.values).all());

    expect(parse_binary(serialize_binary(clip.stream)) == clip.stream);
    expect(parse_csv(serialize_csv(clip.stream), clip.stream.width(), clip.stream.height()) ==
           clip.stream);
  }

  const Micros issued = 500'000;
  for (MovementLabel ch : {MovementLabel::blink, MovementLabel::saccade}) {
    const MovementLabel other = ch == MovementLabel::blink ? MovementLabel::saccade : MovementLabel::blink;
    const auto session = ChallengeSession::issue(ch, issued);
    for (Verdict v : {Verdict::genuine, Verdict::replay}) {
      for (Micros onset : {issued - 1, issued, issued + 1'000'000, session.deadline, session.deadline + 1}) {
        for (MovementLabel l : {ch, other}) {
          const std::vector<TemporalSegment> mv{{onset, onset + 100'000, l, 1}};
          const bool movement = l == ch && onset >= issued && onset <= session.deadline;
          const auto r = run_challenge(session, mv, {v, 0.5});
          expect(r.passed == (movement && v == Verdict::genuine));
        }
      }
      expect(!run_challenge(session, {}, {v, 0.5}).passed);
    }
  }
  return {failed == 0, fmt("%d/%d checks hold", checks - failed, checks)};
}

}  // namespace

int main() {
  criterion(1, "activity recursion equals direct sum", 10.0, activity_oracle);
  criterion(2, "SAE and voxel grids equal brute force", 0, sae_voxel_oracle);
  criterion(3, "reference metric arithmetic", 0, metric_arithmetic);
  criterion(4, "greedy matching equals exhaustive", 5.0, matching_oracle);
  criterion(5, "blink detection on 50 synthetic clips, F1 >= 90", 30.0, blink_suite);
  criterion(6, "saccade detection on 50 mixed clips, P,R >= 80", 0, saccade_suite);
  criterion(7, "replay IEI signature", 0, replay_signature);
  criterion(8, "liveness end to end, accuracy >= 95, ACER <= 5", 60.0, liveness_end_to_end);
  criterion(9, "invariant suites", 0, invariants);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
