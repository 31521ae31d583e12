// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include "doctest.h"
#include "evlive/error.hpp"
#include "evlive/liveness.hpp"
#include "evlive/synth.hpp"

using namespace evlive;

namespace {

ClipFeatures features_of(const EventStream& s) {
  const auto w = window_stats(s);
  return clip_features(w, RoiLabel::face);
}

struct Dataset {
  std::vector<LabeledFeatures> train;
  std::vector<LabeledFeatures> test;
};

const Dataset& synthetic_dataset() {
  static const Dataset data = [] {
    Dataset d;
    SuiteOptions opt;
    opt.duration = 2'000'000;
    opt.max_blinks = 2;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const auto clip = synth_genuine(random_clip_spec(seed, opt));
      ReplaySpec rs;
      rs.seed = seed;
      const auto replay = synth_replay(clip.stream, rs);
      auto& dst = seed <= 8 ? d.train : d.test;
      dst.push_back({features_of(clip.stream), Verdict::genuine});
      dst.push_back({features_of(replay), Verdict::replay});
    }
    return d;
  }();
  return data;
}

ClipFeatures manual(double rate, double iei) {
  ClipFeatures f;
  f.n_windows = 10;
  f.event_rate = FeatureStat{rate, rate / 10};
  f.median_pixel_iei = FeatureStat{iei, iei / 5};
  return f;
}

}  // namespace

TEST_CASE("separable synthetic set trains to full accuracy") {
  const auto& d = synthetic_dataset();
  const auto clf = train_classifier(d.train);
  for (const auto& s : d.train) CHECK(classify(clf, s.features).verdict == s.label);
  for (const auto& s : d.test) CHECK(classify(clf, s.features).verdict == s.label);

  const auto it = std::find(clf.feature_names.begin(), clf.feature_names.end(),
                            "median_pixel_iei_mean");
  REQUIRE(it != clf.feature_names.end());
  CHECK(clf.weights(it - clf.feature_names.begin()) < 0);

  // Deterministic given identical input order.
  const auto again = train_classifier(d.train);
  CHECK(again.weights == clf.weights);
  CHECK(again.bias == clf.bias);
}

TEST_CASE("conflicting labels give an undecided score") {
  const std::vector<LabeledFeatures> s{{manual(100, 2000), Verdict::genuine},
                                       {manual(100, 2000), Verdict::replay}};
  const auto clf = train_classifier(s);
  CHECK(clf.feature_names.empty());
  CHECK(clf.dropped.size() == 4);
  CHECK(classify(clf, manual(100, 2000)).score == doctest::Approx(0.5));
}

TEST_CASE("one class is rejected") {
  const std::vector<LabeledFeatures> s{{manual(100, 2000), Verdict::genuine},
                                       {manual(120, 2100), Verdict::genuine}};
  CHECK_THROWS_AS(train_classifier(s), Error);
}

TEST_CASE("zero weights score one half") {
  FeatureClassifier clf;
  clf.feature_names = {"event_rate_mean", "median_pixel_iei_mean"};
  clf.means = Eigen::Vector2d(100, 2000);
  clf.stds = Eigen::Vector2d(10, 100);
  clf.weights = Eigen::Vector2d::Zero();
  const auto d = classify(clf, manual(100, 2000));
  CHECK(d.score == 0.5);
  CHECK(d.verdict == Verdict::genuine);
}

TEST_CASE("missing feature at inference") {
  const auto& d = synthetic_dataset();
  const auto clf = train_classifier(d.train);
  ClipFeatures f = d.test[0].features;
  f.median_pixel_iei.reset();
  CHECK_THROWS_AS(classify(clf, f), Error);
}

TEST_CASE("affine feature rescaling leaves verdicts unchanged") {
  const auto& d = synthetic_dataset();
  const auto base = train_classifier(d.train);
  for (auto [a, b] : {std::pair{2.5, 100.0}, std::pair{-0.5, 3.0}, std::pair{1e-3, -7.0}}) {
    auto remap = [a, b](std::vector<LabeledFeatures> v) {
      for (auto& s : v) s.features.median_pixel_iei->mean = a * s.features.median_pixel_iei->mean + b;
      return v;
    };
    const auto tr = remap(d.train);
    const auto te = remap(d.test);
    const auto clf = train_classifier(tr);
    for (std::size_t i = 0; i < te.size(); ++i) {
      CHECK(classify(clf, te[i].features).verdict == classify(base, d.test[i].features).verdict);
    }
  }
}

TEST_CASE("raising the threshold never flips replay to genuine") {
  const auto& d = synthetic_dataset();
  auto clf = train_classifier(d.train);
  for (const auto& s : d.test) {
    bool seen_replay = false;
    for (double th = 0.0; th <= 1.0; th += 0.01) {
      clf.threshold = th;
      const auto v = classify(clf, s.features).verdict;
      if (seen_replay) CHECK(v == Verdict::replay);
      seen_replay = seen_replay || v == Verdict::replay;
    }
  }
}

TEST_CASE("challenge response truth table") {
  const Micros issued = 1'000'000;
  enum class Timing { none, before, inside, on_deadline, late, other_label };
  for (MovementLabel challenge : {MovementLabel::blink, MovementLabel::saccade}) {
    const MovementLabel other =
        challenge == MovementLabel::blink ? MovementLabel::saccade : MovementLabel::blink;
    const auto session = ChallengeSession::issue(challenge, issued);
    CHECK(session.deadline == issued + kDefaultDeadlineUs);
    for (Verdict v : {Verdict::genuine, Verdict::replay}) {
      for (Timing tm : {Timing::none, Timing::before, Timing::inside, Timing::on_deadline,
                        Timing::late, Timing::other_label}) {
        std::vector<TemporalSegment> mv;
        switch (tm) {
          case Timing::none: break;
          case Timing::before: mv.push_back({issued - 300'000, issued - 100'000, challenge, 1}); break;
          case Timing::inside: mv.push_back({issued + 500'000, issued + 700'000, challenge, 1}); break;
          case Timing::on_deadline:
            mv.push_back({session.deadline, session.deadline + 50'000, challenge, 1});
            break;
          case Timing::late:
            mv.push_back({session.deadline + 1, session.deadline + 90'000, challenge, 1});
            break;
          case Timing::other_label: mv.push_back({issued + 500'000, issued + 540'000, other, 1}); break;
        }
        const bool movement = tm == Timing::inside || tm == Timing::on_deadline;
        const bool genuine = v == Verdict::genuine;
        const auto r = run_challenge(session, mv, {v, genuine ? 0.9 : 0.1});
        CHECK(r.passed == (movement && genuine));
        CHECK(r.session.state == (r.passed ? ChallengeState::passed : ChallengeState::failed));
        ChallengeReason expect = ChallengeReason::ok;
        if (!movement) {
          expect = tm == Timing::late          ? ChallengeReason::late_movement
                   : tm == Timing::other_label ? ChallengeReason::wrong_movement
                                               : ChallengeReason::no_movement;
        } else if (!genuine) {
          expect = ChallengeReason::liveness_failed;
        }
        CHECK(r.reason == expect);
      }
    }
  }
  CHECK_THROWS_AS(ChallengeSession::issue(MovementLabel::blink, 0, 0), Error);
}
