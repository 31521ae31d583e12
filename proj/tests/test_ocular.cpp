// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include "doctest.h"
#include "evlive/error.hpp"
#include "evlive/evaluation.hpp"
#include "evlive/ocular.hpp"
#include "evlive/synth.hpp"

using namespace evlive;

namespace {

struct Run {
  SyntheticClip clip;
  OcularSignals signals;
  OcularDetection det;
};

Run run(const ClipSpec& spec) {
  Run r{synth_genuine(spec), {}, {}};
  r.signals = ocular_signals(crop_roi(r.clip.stream, spec.eye_roi));
  r.det = detect_ocular(r.signals);
  return r;
}

ClipSpec spec_with(std::vector<Movement> blinks, std::vector<Movement> saccades,
                   std::uint64_t seed) {
  ClipSpec s;
  s.duration = 5'000'000;
  s.blinks = std::move(blinks);
  s.saccades = std::move(saccades);
  s.seed = seed;
  return s;
}

ActivitySeries uniform_series(const Eigen::ArrayXd& v, Micros dt = 2000) {
  ActivitySeries s;
  s.values = v;
  s.uniform_dt = dt;
  for (Eigen::Index i = 0; i < v.size(); ++i) s.times.push_back(i * dt);
  return s;
}

ActivitySeries scaled(ActivitySeries s, double c) {
  s.values *= c;
  return s;
}

void check_well_formed(const std::vector<TemporalSegment>& segs) {
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].onset < segs[i].offset);
    CHECK(segs[i].score >= 0.0);
    CHECK(segs[i].score <= 1.0);
    if (i) CHECK(segs[i - 1].offset <= segs[i].onset);
  }
}

}  // namespace

TEST_CASE("gaussian_smooth on series") {
  const auto c = uniform_series(Eigen::ArrayXd::Constant(50, 2.0));
  const auto s = gaussian_smooth(c, 6000);
  CHECK((s.values - 2.0).abs().maxCoeff() < 1e-12);
  CHECK(s.times == c.times);

  ActivitySeries sparse;
  sparse.times = {0, 10};
  sparse.values = Eigen::ArrayXd::Ones(2);
  CHECK_THROWS_AS(gaussian_smooth(sparse, 6000), Error);
}

TEST_CASE("fit_blink_window") {
  std::vector<Micros> d;
  for (int ms = 1; ms <= 100; ++ms) d.push_back(ms * 1000);
  CHECK(fit_blink_window(d) == 95'050);
  CHECK(fit_blink_window(std::vector<Micros>(7, 180'000)) == 180'000);
  CHECK(fit_blink_window(std::vector<Micros>{123'000}) == 123'000);
  CHECK_THROWS_AS(fit_blink_window(std::vector<Micros>{}), Error);
}

TEST_CASE("suppress_blinks") {
  Eigen::ArrayXd v(11);
  v << 0, 1, 5, 9, 4, 2, 8, 3, 1, 6, 10;
  const auto s = uniform_series(v, 1000);
  CHECK((suppress_blinks(s, {}).values == v).all());

  const std::vector<TemporalSegment> whole{{-500, 50'000, MovementLabel::blink, 1}};
  const auto w = suppress_blinks(s, whole);
  for (Eigen::Index i = 0; i < 11; ++i) CHECK(w.values(i) == doctest::Approx(i * 1.0));

  const std::vector<TemporalSegment> inner{{2000, 5000, MovementLabel::blink, 1},
                                           {4000, 7000, MovementLabel::blink, 1}};
  const auto once = suppress_blinks(s, inner);
  CHECK(once.values(1) == 1);
  CHECK(once.values(7) == 3);
  CHECK(once.values(2) == 5);
  CHECK(once.values(3) == doctest::Approx(4.6));
  CHECK((suppress_blinks(once, inner).values == once.values).all());
}

TEST_CASE("wide peaks are not saccades") {
  auto bump = [](double fwhm_ms) {
    Eigen::ArrayXd v(1000);
    const double sigma = fwhm_ms * 1000.0 / 2.3548 / 2000.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double z = (static_cast<double>(i) - 500.0) / sigma;
      v(i) = std::exp(-0.5 * z * z);
    }
    return uniform_series(v);
  };
  CHECK(detect_saccades(bump(200), {}).empty());
  CHECK(detect_saccades(bump(10), {}).empty());
  const auto ok = detect_saccades(bump(60), {});
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].duration() == doctest::Approx(60'000).epsilon(0.05));
  CHECK_THROWS_AS(detect_saccades(ActivitySeries{}, {}), Error);
}

TEST_CASE("three blinks are found") {
  const auto r = run(spec_with({{800'000, 200'000}, {2'100'000, 250'000}, {3'600'000, 170'000}},
                               {}, 11));
  REQUIRE(r.det.blinks.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(temporal_iou(r.det.blinks[i], r.clip.truth[i]) >= 0.5);
  }
  CHECK(r.det.saccades.empty());
  check_well_formed(r.det.blinks);
}

TEST_CASE("single saccade") {
  const auto r = run(spec_with({}, {{2'000'000, 40'000}}, 12));
  CHECK(r.det.blinks.empty());
  REQUIRE(r.det.saccades.size() == 1);
  CHECK(temporal_iou(r.det.saccades[0], r.clip.truth[0]) >= 0.5);
}

TEST_CASE("noise alone yields nothing") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = run(spec_with({}, {}, seed));
    CHECK(r.det.blinks.empty());
    CHECK(r.det.saccades.empty());
  }
}

TEST_CASE("suppression exposes the saccade") {
  const auto r = run(spec_with({{1'000'000, 250'000}}, {{2'500'000, 50'000}}, 21));
  REQUIRE(r.det.blinks.size() == 1);
  std::vector<TemporalSegment> guarded = r.det.blinks;
  for (auto& b : guarded) {
    b.onset -= SaccadeParams{}.blink_guard;
    b.offset += SaccadeParams{}.blink_guard;
  }
  const auto sup = suppress_blinks(r.signals.all, guarded);
  Eigen::Index arg;
  sup.values.maxCoeff(&arg);
  const Micros t = sup.times[static_cast<std::size_t>(arg)];
  const auto& gt = r.clip.truth[1];
  CHECK(gt.label == MovementLabel::saccade);
  CHECK(t >= gt.onset);
  CHECK(t <= gt.offset);
  // Without suppression the blink dominates.
  r.signals.all.values.maxCoeff(&arg);
  CHECK(r.signals.all.times[static_cast<std::size_t>(arg)] < 1'500'000);
}

TEST_CASE("detector invariants on mixed clips") {
  SuiteOptions opt;
  opt.min_blinks = 1;
  opt.max_blinks = 3;
  opt.min_saccades = 1;
  opt.max_saccades = 4;
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    const auto r = run(random_clip_spec(seed, opt));
    check_well_formed(r.det.blinks);
    check_well_formed(r.det.saccades);
    for (const auto& s : r.det.saccades) {
      CHECK(s.duration() >= 20'000);
      CHECK(s.duration() <= 150'000);
    }

    const auto again = detect_ocular(r.signals);
    CHECK(again.blinks == r.det.blinks);
    CHECK(again.saccades == r.det.saccades);

    for (double c : {1e-3, 0.37, 12.0, 4e4}) {
      OcularSignals s{scaled(r.signals.on, c), scaled(r.signals.off, c),
                      scaled(r.signals.all, c)};
      const auto d = detect_ocular(s);
      auto same = [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i].onset != b[i].onset || a[i].offset != b[i].offset) return false;
        }
        return true;
      };
      CHECK(same(d.blinks, r.det.blinks));
      CHECK(same(d.saccades, r.det.saccades));
    }

    std::size_t prev = SIZE_MAX;
    for (double th = 0.05; th <= 1.0; th += 0.05) {
      SaccadeParams p;
      p.peak_threshold = th;
      const auto n = detect_saccades(r.signals.all, r.det.blinks, p).size();
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("blink detector rejects mismatched grids") {
  const auto a = uniform_series(Eigen::ArrayXd::Ones(10));
  const auto b = uniform_series(Eigen::ArrayXd::Ones(12));
  CHECK_THROWS_AS(detect_blinks(a, b), Error);
}

TEST_CASE("params validation") {
  BlinkParams b;
  b.pos_prominence = 0;
  CHECK_THROWS_AS(b.validate(), Error);
  SaccadeParams s;
  s.min_width = 200'000;
  CHECK_THROWS_AS(s.validate(), Error);
}
