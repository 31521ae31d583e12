// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/activity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evlive/error.hpp"

namespace evlive {

std::string_view to_string(Channel c) noexcept {
  switch (c) {
    case Channel::on: return "on";
    case Channel::off: return "off";
    case Channel::all: return "all";
  }
  return "all";
}

Channel channel_from_string(std::string_view s) {
  if (s == "on") return Channel::on;
  if (s == "off") return Channel::off;
  if (s == "all") return Channel::all;
  throw Error(ErrorCode::ParseError, "unknown channel '" + std::string(s) + "'");
}

ActivitySeries activity_profile(const EventStream& stream, Channel channel,
                                double tau, double mu) {
  if (!(tau > 0) || !(mu > 0)) {
    throw Error(ErrorCode::InvalidArgument, "tau and mu must be positive");
  }
  ActivitySeries out;
  out.channel = channel;
  out.tau = tau;
  out.mu = mu;

  std::vector<double> values;
  const double increment = 1.0 / mu;
  double a = 0.0;
  Micros t_u = 0;
  bool started = false;
  for (const Event& e : stream.events()) {
    if (channel == Channel::on && e.p != 1) continue;
    if (channel == Channel::off && e.p != -1) continue;
    if (started && e.t == t_u) {
      a += increment;
      values.back() = a;
      continue;
    }
    a = started ? a * std::exp(-static_cast<double>(e.t - t_u) / tau) + increment
                : increment;
    t_u = e.t;
    started = true;
    out.times.push_back(e.t);
    values.push_back(a);
  }
  out.values = Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                static_cast<Eigen::Index>(values.size()));
  out.empty_channel = out.times.empty();
  return out;
}

double activity_at(const ActivitySeries& series, Micros t) {
  auto it = std::upper_bound(series.times.begin(), series.times.end(), t);
  if (it == series.times.begin()) return 0.0;
  const auto i = static_cast<Eigen::Index>(std::distance(series.times.begin(), it) - 1);
  return series.values(i) *
         std::exp(-static_cast<double>(t - series.times[static_cast<std::size_t>(i)]) /
                  series.tau);
}

ActivitySeries resample_activity(const ActivitySeries& series, Micros dt) {
  if (series.empty()) throw Error(ErrorCode::EmptySeries, "cannot resample an empty series");
  return resample_activity(series, dt, series.times.front(), series.times.back());
}

ActivitySeries resample_activity(const ActivitySeries& series, Micros dt,
                                 Micros t_begin, Micros t_end) {
  if (dt <= 0) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (t_end < t_begin) {
    throw Error(ErrorCode::InvalidInterval, "resample grid ends before it begins");
  }
  ActivitySeries out;
  out.channel = series.channel;
  out.tau = series.tau;
  out.mu = series.mu;
  out.uniform_dt = dt;
  out.empty_channel = series.empty_channel;

  const auto n = static_cast<std::size_t>((t_end - t_begin) / dt) + 1;
  out.times.resize(n);
  out.values.resize(static_cast<Eigen::Index>(n));
  const auto& ts = series.times;
  std::size_t j = 0;  // first sample with time >= t
  for (std::size_t k = 0; k < n; ++k) {
    const Micros t = t_begin + static_cast<Micros>(k) * dt;
    out.times[k] = t;
    while (j < ts.size() && ts[j] < t) ++j;
    double v;
    if (ts.empty() || t < ts.front()) {
      v = 0.0;
    } else if (j == ts.size()) {
      v = series.values(static_cast<Eigen::Index>(ts.size() - 1)) *
          std::exp(-static_cast<double>(t - ts.back()) / series.tau);
    } else if (ts[j] == t) {
      v = series.values(static_cast<Eigen::Index>(j));
    } else {
      const double t0 = static_cast<double>(ts[j - 1]);
      const double t1 = static_cast<double>(ts[j]);
      const double a0 = series.values(static_cast<Eigen::Index>(j - 1));
      const double a1 = series.values(static_cast<Eigen::Index>(j));
      v = a0 + (a1 - a0) * (static_cast<double>(t) - t0) / (t1 - t0);
    }
    out.values(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

std::string activity_csv(const ActivitySeries& series) {
  std::string out = "t_us,a\n";
  char buf[64];
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int n = std::snprintf(buf, sizeof buf, "%lld,%.17g\n",
                                static_cast<long long>(series.times[i]),
                                series.values(static_cast<Eigen::Index>(i)));
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace evlive
