// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "evlive/event.hpp"
#include "evlive/ocular.hpp"

namespace evlive {

/// Deterministic random source. Draws are built directly from the 64-bit
/// Mersenne Twister output (whose sequence is fixed by the standard), so
/// streams are reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Exponential waiting time with the given rate.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

struct Movement {
  Micros onset = 0;
  Micros duration = 0;
};

/// Blink burst layout: a positive-dominant closing burst, a quiet plateau,
/// then a longer, weaker negative-dominant reopening burst.
struct BlinkShape {
  double closing_rate = 50'000.0;  // events/s over the eye ROI
  double closing_on_fraction = 0.62;
  double reopening_rate_ratio = 0.5;
  double reopening_off_fraction = 0.66;
  double reopening_duration_ratio = 1.5;
  double plateau_ratio = 0.4;  // plateau length relative to closing length
};

struct SaccadeShape {
  double rate = 20'000.0;  // events/s over the eye ROI
  double on_fraction = 0.5;
};

struct ClipSpec {
  Micros duration = 6'000'000;
  int width = 128;
  int height = 96;
  RegionOfInterest eye_roi{40, 28, 60, 40, RoiLabel::left_eye};
  std::vector<Movement> blinks;
  std::vector<Movement> saccades;
  double noise_rate = 0.5;  // events/s/pixel over the whole sensor
  std::uint64_t seed = 0;
  double amplitude = 1.0;   // scales every burst rate
  Micros annotation_margin = 8'000;
  BlinkShape blink_shape;
  SaccadeShape saccade_shape;

  /// Throws OverlappingMovements or InvalidArgument.
  void validate() const;
};

struct BlinkPhases {
  Micros closing = 0;
  Micros plateau = 0;
  Micros reopening = 0;
};

/// Split of a total blink duration into closing / plateau / reopening.
BlinkPhases blink_phases(Micros duration, const BlinkShape& shape);

/// Ground-truth segments of a spec (movement extent plus annotation margin,
/// clipped to the clip), sorted by onset.
std::vector<TemporalSegment> ground_truth(const ClipSpec& spec);

struct SyntheticClip {
  EventStream stream;
  std::vector<TemporalSegment> truth;
};

SyntheticClip synth_genuine(const ClipSpec& spec);

struct ReplaySpec {
  double fps = 50.0;
  double brightness_factor = 0.6;
  Micros jitter = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Timestamp of display frame k (rounded to whole microseconds).
Micros frame_time(std::int64_t k, double fps);

/// Display replay: quantize to the next frame boundary, collapse same-polarity
/// duplicates per pixel and frame, thin by brightness, add jitter.
EventStream synth_replay(const EventStream& genuine, const ReplaySpec& spec);

/// Options for drawing random clip specs (test and benchmark suites).
struct SuiteOptions {
  Micros duration = 6'000'000;
  int min_blinks = 1;
  int max_blinks = 4;
  int min_saccades = 0;
  int max_saccades = 0;
  Micros blink_min = 150'000;
  Micros blink_max = 300'000;
  Micros saccade_min = 25'000;
  Micros saccade_max = 80'000;
  Micros min_gap = 300'000;
  double noise_rate = 0.5;
  double amplitude_min = 0.85;
  double amplitude_max = 1.15;
};

/// Random but valid spec; the same seed always yields the same spec.
ClipSpec random_clip_spec(std::uint64_t seed, const SuiteOptions& options = {});

}  // namespace evlive
