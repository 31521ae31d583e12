// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "evlive/activity.hpp"
#include "evlive/event.hpp"

namespace evlive {

enum class MovementLabel { blink, saccade };

std::string_view to_string(MovementLabel label) noexcept;
MovementLabel movement_from_string(std::string_view s);

struct TemporalSegment {
  Micros onset = 0;
  Micros offset = 0;
  MovementLabel label = MovementLabel::blink;
  double score = 1.0;

  Micros duration() const noexcept { return offset - onset; }
  friend bool operator==(const TemporalSegment&, const TemporalSegment&) = default;
};

/// Blink detector settings. Prominences are in units of the clip-normalized
/// difference signal.
struct BlinkParams {
  Micros gaussian_sigma = 6'000;
  double pos_prominence = 0.25;
  double neg_prominence = 0.15;
  Micros search_window = 200'000;
  /// Closing/reopening peaks narrower than this are fluctuations, not lid motion.
  Micros min_peak_width = 16'000;
  /// Minimum |A_on - A_off| / (A_on + A_off) at each peak (smoothed signals).
  double min_polarity_balance = 0.1;
  /// Peak prominence must exceed this multiple of the robust noise scale.
  double min_noise_ratio = 12.0;

  void validate() const;
};

struct SaccadeParams {
  double peak_threshold = 0.5;
  Micros min_width = 20'000;
  Micros max_width = 150'000;
  Micros min_segment = 20'000;
  /// Blink segments are widened by this much on each side before suppression;
  /// peaks touching the widened blinks are discarded.
  Micros blink_guard = 40'000;
  double min_noise_ratio = 8.0;

  void validate() const;
};

/// Gaussian smoothing of a uniform series; kernel truncated at +-4 sigma,
/// reflect-padded, same grid.
ActivitySeries gaussian_smooth(const ActivitySeries& series, Micros sigma);

/// Double-peak blink detector on the ON/OFF activity pair.
///
/// Candidates are positive-to-negative zero crossings of the smoothed,
/// max-normalized difference D = A_on - A_off. A candidate survives when the
/// nearest qualifying peak of D on its left and of -D on its right lie within
/// the search window with no opposite-sign qualifying peak in between. The
/// segment spans [z - left_width, z + right_width] using half-prominence
/// widths. Overlapping detections keep the higher score.
std::vector<TemporalSegment> detect_blinks(const ActivitySeries& a_on,
                                           const ActivitySeries& a_off,
                                           const BlinkParams& params = {});

/// 95th percentile (linear interpolation) of observed blink durations.
Micros fit_blink_window(std::span<const Micros> training_durations);

/// Replaces samples inside each blink by the straight line joining the series
/// values at the blink's boundaries. Overlapping blinks are merged first.
ActivitySeries suppress_blinks(const ActivitySeries& series,
                               std::span<const TemporalSegment> blinks);

/// Prominent-peak saccade detector on the polarity-agnostic activity, after
/// blink suppression and normalization by the remaining maximum.
std::vector<TemporalSegment> detect_saccades(const ActivitySeries& series,
                                             std::span<const TemporalSegment> blinks,
                                             const SaccadeParams& params = {});

/// ON, OFF and ALL activity resampled on one shared grid spanning the stream.
struct OcularSignals {
  ActivitySeries on;
  ActivitySeries off;
  ActivitySeries all;
};

OcularSignals ocular_signals(const EventStream& stream, double tau = kDefaultTauUs,
                             Micros dt = kDefaultDtUs);

struct OcularDetection {
  std::vector<TemporalSegment> blinks;
  std::vector<TemporalSegment> saccades;

  /// Blinks and saccades merged, sorted by onset.
  std::vector<TemporalSegment> all() const;
};

/// Blink detection followed by saccade detection on blink-suppressed activity.
/// An empty stream yields no segments.
OcularDetection detect_ocular(const OcularSignals& signals,
                              const BlinkParams& blink = {},
                              const SaccadeParams& saccade = {});

}  // namespace evlive
