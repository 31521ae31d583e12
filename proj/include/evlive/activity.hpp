// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "evlive/event.hpp"

namespace evlive {

enum class Channel { on, off, all };

std::string_view to_string(Channel c) noexcept;
Channel channel_from_string(std::string_view s);

/// Exponentially decaying event activity, either sparse (one sample per event
/// arrival) or on a uniform grid after resampling.
struct ActivitySeries {
  Channel channel = Channel::all;
  double tau = 10'000.0;  // us
  double mu = 1.0;
  std::vector<Micros> times;
  Eigen::ArrayXd values;
  std::optional<Micros> uniform_dt;
  /// Set when the source stream had no events of the requested polarity.
  bool empty_channel = false;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  bool is_uniform() const noexcept { return uniform_dt.has_value(); }
};

inline constexpr double kDefaultTauUs = 10'000.0;
inline constexpr Micros kDefaultDtUs = 2'000;

/// Event-driven recursion A(t_i) = A(t_u) e^{-(t_i - t_u)/tau} + 1/mu over the
/// events of `channel`. Events sharing a timestamp produce a single sample
/// holding their accumulated increment.
ActivitySeries activity_profile(const EventStream& stream, Channel channel,
                                double tau = kDefaultTauUs, double mu = 1.0);

/// Continuous activity at time t: the latest sample at or before t, decayed.
/// Zero before the first sample.
double activity_at(const ActivitySeries& series, Micros t);

/// Uniform grid from the first to the last sample time at step dt, values by
/// linear interpolation between neighbouring samples.
ActivitySeries resample_activity(const ActivitySeries& series, Micros dt);

/// Resample onto the explicit grid t_begin, t_begin + dt, ..., <= t_end.
/// Before the first sample the value is 0; after the last sample it decays
/// exponentially with the series' tau.
ActivitySeries resample_activity(const ActivitySeries& series, Micros dt,
                                 Micros t_begin, Micros t_end);

/// Tidy CSV `t_us,a`.
std::string activity_csv(const ActivitySeries& series);

}  // namespace evlive
