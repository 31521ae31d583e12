// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evlive/event.hpp"

namespace evlive {

inline constexpr Micros kDefaultWindowUs = 33'000;

struct WindowStats {
  Micros t_start = 0;
  Micros window_len = 0;
  std::size_t n_events = 0;
  double event_rate = 0;                    // events per second
  std::optional<double> polarity_balance;   // (N+ - N-) / (N+ + N-)
  std::optional<double> median_pixel_iei;   // us
};

/// Per-pixel inter-event intervals (us) of a time-sorted event range. Events
/// sharing a pixel and timestamp count as one arrival, so every interval is
/// strictly positive. Output is grouped by pixel (row-major), in time order.
std::vector<Micros> pixel_inter_event_intervals(std::span<const Event> events,
                                                int width);

/// Median over pixels of each pixel's median interval; empty if no pixel has
/// two distinct arrival times.
std::optional<double> median_pixel_iei(std::span<const Event> events, int width);

/// Consecutive non-overlapping windows aligned to the first event and covering
/// [t_first, t_last].
std::vector<WindowStats> window_stats(const EventStream& stream,
                                      Micros window_len = kDefaultWindowUs);

struct FeatureStat {
  double mean = 0;
  double std = 0;  // population standard deviation
};

struct ClipFeatures {
  RoiLabel roi_label = RoiLabel::face;
  std::size_t n_windows = 0;
  std::optional<FeatureStat> event_rate;
  std::optional<FeatureStat> polarity_balance;
  std::optional<FeatureStat> median_pixel_iei;
};

ClipFeatures clip_features(std::span<const WindowStats> windows,
                           RoiLabel roi_label = RoiLabel::face);

/// Flat feature names in the order used by `feature_vector`.
inline constexpr std::array<std::string_view, 6> kFeatureNames = {
    "event_rate_mean",       "event_rate_std",
    "polarity_balance_mean", "polarity_balance_std",
    "median_pixel_iei_mean", "median_pixel_iei_std"};

/// The six aggregates in `kFeatureNames` order; absent statistics are empty.
std::array<std::optional<double>, 6> feature_vector(const ClipFeatures& f);

}  // namespace evlive
