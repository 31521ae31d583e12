// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "evlive/error.hpp"

namespace evlive {

namespace {

struct Burst {
  Micros begin;
  Micros end;
  double rate;         // events/s
  double on_fraction;  // P(p = +1)
};

void emit_poisson(Rng& rng, const Burst& b, const RegionOfInterest& area,
                  std::vector<Event>& out) {
  if (!(b.rate > 0) || b.end <= b.begin) return;
  double t = static_cast<double>(b.begin);
  const double stop = static_cast<double>(b.end);
  while (true) {
    t += rng.exponential(b.rate) * 1e6;
    if (t >= stop) break;
    Event e;
    e.t = static_cast<Micros>(t);
    e.x = static_cast<std::uint16_t>(area.x0 + rng.uniform_int(0, area.w - 1));
    e.y = static_cast<std::uint16_t>(area.y0 + rng.uniform_int(0, area.h - 1));
    e.p = rng.uniform() < b.on_fraction ? 1 : -1;
    out.push_back(e);
  }
}

}  // namespace

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  const auto k = static_cast<std::int64_t>(uniform() * span);
  return lo + std::min<std::int64_t>(k, hi - lo);
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

BlinkPhases blink_phases(Micros duration, const BlinkShape& shape) {
  const double denom = 1.0 + shape.plateau_ratio + shape.reopening_duration_ratio;
  BlinkPhases ph;
  ph.closing = static_cast<Micros>(std::llround(static_cast<double>(duration) / denom));
  ph.plateau = static_cast<Micros>(std::llround(static_cast<double>(ph.closing) * shape.plateau_ratio));
  ph.reopening = duration - ph.closing - ph.plateau;
  return ph;
}

void ClipSpec::validate() const {
  if (duration <= 0 || width <= 0 || height <= 0 || noise_rate < 0 || !(amplitude > 0) ||
      annotation_margin < 0) {
    throw Error(ErrorCode::InvalidArgument, "clip spec has non-positive extent or rates");
  }
  if (eye_roi.w <= 0 || eye_roi.h <= 0 || eye_roi.x0 < 0 || eye_roi.y0 < 0 ||
      eye_roi.x0 + eye_roi.w > width || eye_roi.y0 + eye_roi.h > height) {
    throw Error(ErrorCode::RoiOutOfBounds, "eye ROI outside the sensor");
  }
  struct Span {
    Micros lo, hi;
  };
  std::vector<Span> spans;
  for (const Movement& b : blinks) {
    if (b.duration <= 0) throw Error(ErrorCode::InvalidArgument, "blink duration must be positive");
    spans.push_back({b.onset, b.onset + b.duration});
  }
  for (const Movement& s : saccades) {
    if (s.duration < 20'000 || s.duration > 150'000) {
      throw Error(ErrorCode::InvalidArgument, "saccade duration outside [20, 150] ms");
    }
    spans.push_back({s.onset, s.onset + s.duration});
  }
  for (const Span& s : spans) {
    if (s.lo < 0 || s.hi > duration) {
      throw Error(ErrorCode::InvalidArgument, "movement extends beyond the clip");
    }
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < spans.size(); ++i) {
    // Annotated segments carry a margin on each side and must stay disjoint.
    if (spans[i].lo - annotation_margin < spans[i - 1].hi + annotation_margin) {
      throw Error(ErrorCode::OverlappingMovements,
                  "movements at " + std::to_string(spans[i - 1].lo) + " and " +
                      std::to_string(spans[i].lo) + " overlap");
    }
  }
}

std::vector<TemporalSegment> ground_truth(const ClipSpec& spec) {
  std::vector<TemporalSegment> gt;
  auto add = [&](const Movement& m, MovementLabel label) {
    gt.push_back({std::max<Micros>(0, m.onset - spec.annotation_margin),
                  std::min(spec.duration, m.onset + m.duration + spec.annotation_margin), label,
                  1.0});
  };
  for (const Movement& b : spec.blinks) add(b, MovementLabel::blink);
  for (const Movement& s : spec.saccades) add(s, MovementLabel::saccade);
  std::sort(gt.begin(), gt.end(),
            [](const TemporalSegment& a, const TemporalSegment& b) { return a.onset < b.onset; });
  return gt;
}

SyntheticClip synth_genuine(const ClipSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Event> events;

  const RegionOfInterest sensor{0, 0, spec.width, spec.height, RoiLabel::custom};
  emit_poisson(rng, {0, spec.duration, spec.noise_rate * spec.width * spec.height, 0.5}, sensor,
               events);

  const BlinkShape& bs = spec.blink_shape;
  for (const Movement& b : spec.blinks) {
    const BlinkPhases ph = blink_phases(b.duration, bs);
    const double rate = bs.closing_rate * spec.amplitude;
    const Micros reopen = b.onset + ph.closing + ph.plateau;
    emit_poisson(rng, {b.onset, b.onset + ph.closing, rate, bs.closing_on_fraction}, spec.eye_roi,
                 events);
    emit_poisson(rng,
                 {reopen, reopen + ph.reopening, rate * bs.reopening_rate_ratio,
                  1.0 - bs.reopening_off_fraction},
                 spec.eye_roi, events);
  }
  for (const Movement& s : spec.saccades) {
    emit_poisson(rng,
                 {s.onset, s.onset + s.duration, spec.saccade_shape.rate * spec.amplitude,
                  spec.saccade_shape.on_fraction},
                 spec.eye_roi, events);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return {EventStream(spec.width, spec.height, std::move(events)), ground_truth(spec)};
}

void ReplaySpec::validate() const {
  if (!(fps > 0) || !(brightness_factor > 0) || brightness_factor > 1 || jitter < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "replay needs fps > 0, brightness in (0, 1] and jitter >= 0");
  }
}

Micros frame_time(std::int64_t k, double fps) {
  return static_cast<Micros>(std::llround(static_cast<double>(k) * 1e6 / fps));
}

EventStream synth_replay(const EventStream& genuine, const ReplaySpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto pixels = static_cast<std::uint64_t>(genuine.width()) *
                      static_cast<std::uint64_t>(genuine.height());
  std::unordered_set<std::uint64_t> seen;
  std::vector<Event> out;
  out.reserve(genuine.size());
  for (const Event& e : genuine.events()) {
    auto k = static_cast<std::int64_t>(std::ceil(static_cast<double>(e.t) * spec.fps / 1e6));
    while (k > 0 && frame_time(k - 1, spec.fps) >= e.t) --k;
    while (frame_time(k, spec.fps) < e.t) ++k;
    const std::uint64_t pixel = static_cast<std::uint64_t>(e.y) * genuine.width() + e.x;
    const std::uint64_t key = ((static_cast<std::uint64_t>(k) * pixels + pixel) << 1) |
                              (e.p > 0 ? 1u : 0u);
    if (!seen.insert(key).second) continue;
    if (rng.uniform() >= spec.brightness_factor) continue;
    Event q = e;
    q.t = frame_time(k, spec.fps);
    if (spec.jitter > 0) q.t += rng.uniform_int(0, spec.jitter);
    out.push_back(q);
  }
  std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  return EventStream(genuine.width(), genuine.height(), std::move(out));
}

ClipSpec random_clip_spec(std::uint64_t seed, const SuiteOptions& o) {
  Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
  ClipSpec spec;
  spec.duration = o.duration;
  spec.noise_rate = o.noise_rate;
  spec.seed = seed;
  spec.amplitude = rng.uniform(o.amplitude_min, o.amplitude_max);

  const auto n_blinks = static_cast<int>(rng.uniform_int(o.min_blinks, o.max_blinks));
  const auto n_saccades = static_cast<int>(rng.uniform_int(o.min_saccades, o.max_saccades));
  std::vector<MovementLabel> kinds(static_cast<std::size_t>(n_blinks), MovementLabel::blink);
  kinds.insert(kinds.end(), static_cast<std::size_t>(n_saccades), MovementLabel::saccade);
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  if (kinds.empty()) return spec;

  const Micros slot = o.duration / static_cast<Micros>(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const bool blink = kinds[i] == MovementLabel::blink;
    const Micros dur = blink ? rng.uniform_int(o.blink_min, o.blink_max)
                             : rng.uniform_int(o.saccade_min, o.saccade_max);
    const Micros lo = static_cast<Micros>(i) * slot + o.min_gap / 2;
    const Micros hi = std::max(lo, static_cast<Micros>(i + 1) * slot - o.min_gap / 2 - dur);
    const Movement m{rng.uniform_int(lo, hi), dur};
    (blink ? spec.blinks : spec.saccades).push_back(m);
  }
  spec.validate();
  return spec;
}

}  // namespace evlive
