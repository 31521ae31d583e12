// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/window_stats.hpp"

#include <algorithm>
#include <cmath>

#include "evlive/error.hpp"
#include "evlive/signal.hpp"

namespace evlive {

namespace {

struct Arrival {
  std::uint32_t pixel;
  Micros t;
};

std::vector<Arrival> by_pixel(std::span<const Event> events, int width) {
  std::vector<Arrival> a;
  a.reserve(events.size());
  for (const Event& e : events) {
    a.push_back({static_cast<std::uint32_t>(e.y) * static_cast<std::uint32_t>(width) + e.x, e.t});
  }
  std::stable_sort(a.begin(), a.end(),
                   [](const Arrival& l, const Arrival& r) { return l.pixel < r.pixel; });
  return a;
}

template <typename Fn>
void for_each_pixel_run(const std::vector<Arrival>& a, Fn&& fn) {
  std::vector<Micros> intervals;
  for (std::size_t i = 0; i < a.size();) {
    std::size_t j = i + 1;
    intervals.clear();
    for (; j < a.size() && a[j].pixel == a[i].pixel; ++j) {
      const Micros d = a[j].t - a[j - 1].t;
      if (d > 0) intervals.push_back(d);
    }
    if (!intervals.empty()) fn(intervals);
    i = j;
  }
}

FeatureStat mean_std(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

}  // namespace

std::vector<Micros> pixel_inter_event_intervals(std::span<const Event> events,
                                                int width) {
  std::vector<Micros> out;
  for_each_pixel_run(by_pixel(events, width), [&](const std::vector<Micros>& iv) {
    out.insert(out.end(), iv.begin(), iv.end());
  });
  return out;
}

std::optional<double> median_pixel_iei(std::span<const Event> events, int width) {
  std::vector<double> per_pixel;
  for_each_pixel_run(by_pixel(events, width), [&](const std::vector<Micros>& iv) {
    per_pixel.push_back(signal::median(std::vector<double>(iv.begin(), iv.end())));
  });
  if (per_pixel.empty()) return std::nullopt;
  return signal::median(std::move(per_pixel));
}

std::vector<WindowStats> window_stats(const EventStream& stream, Micros window_len) {
  if (window_len <= 0) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
  if (stream.empty()) throw Error(ErrorCode::EmptyStream, "no events to window");
  const Micros t0 = stream.t_first();
  const auto n_windows = static_cast<std::size_t>((stream.t_last() - t0) / window_len) + 1;
  const auto events = stream.events();
  const double seconds = static_cast<double>(window_len) * 1e-6;

  std::vector<WindowStats> out;
  out.reserve(n_windows);
  std::size_t begin = 0;
  for (std::size_t k = 0; k < n_windows; ++k) {
    WindowStats w;
    w.t_start = t0 + static_cast<Micros>(k) * window_len;
    w.window_len = window_len;
    std::size_t end = begin;
    std::size_t n_pos = 0;
    while (end < events.size() && events[end].t < w.t_start + window_len) {
      if (events[end].p > 0) ++n_pos;
      ++end;
    }
    const auto slice = events.subspan(begin, end - begin);
    w.n_events = slice.size();
    w.event_rate = static_cast<double>(slice.size()) / seconds;
    if (!slice.empty()) {
      const auto n_neg = slice.size() - n_pos;
      w.polarity_balance = (static_cast<double>(n_pos) - static_cast<double>(n_neg)) /
                           static_cast<double>(slice.size());
    }
    w.median_pixel_iei = median_pixel_iei(slice, stream.width());
    out.push_back(w);
    begin = end;
  }
  return out;
}

ClipFeatures clip_features(std::span<const WindowStats> windows, RoiLabel roi_label) {
  if (windows.empty()) throw Error(ErrorCode::NoWindows, "no windows to aggregate");
  std::vector<double> rate, balance, iei;
  for (const WindowStats& w : windows) {
    rate.push_back(w.event_rate);
    if (w.polarity_balance) balance.push_back(*w.polarity_balance);
    if (w.median_pixel_iei) iei.push_back(*w.median_pixel_iei);
  }
  ClipFeatures f;
  f.roi_label = roi_label;
  f.n_windows = windows.size();
  f.event_rate = mean_std(rate);
  if (!balance.empty()) f.polarity_balance = mean_std(balance);
  if (!iei.empty()) f.median_pixel_iei = mean_std(iei);
  return f;
}

std::array<std::optional<double>, 6> feature_vector(const ClipFeatures& f) {
  std::array<std::optional<double>, 6> v;
  auto put = [&](std::size_t i, const std::optional<FeatureStat>& s) {
    if (s) {
      v[i] = s->mean;
      v[i + 1] = s->std;
    }
  };
  put(0, f.event_rate);
  put(2, f.polarity_balance);
  put(4, f.median_pixel_iei);
  return v;
}

}  // namespace evlive
