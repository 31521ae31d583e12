// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/ocular.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "evlive/error.hpp"
#include "evlive/signal.hpp"

namespace evlive {

namespace {

using Eigen::Index;

void require_uniform(const ActivitySeries& s, const char* what) {
  if (!s.is_uniform()) {
    throw Error(ErrorCode::NotUniform, std::string(what) + " must be resampled first");
  }
}

Micros to_time(const ActivitySeries& s, double index) {
  return s.times.front() + static_cast<Micros>(std::llround(index * static_cast<double>(*s.uniform_dt)));
}

bool overlaps(const TemporalSegment& a, const TemporalSegment& b) {
  return a.onset < b.offset && b.onset < a.offset;
}

/// Greedy non-maximum suppression: walk `order` and keep segments that do not
/// overlap anything already kept. Result is sorted by onset.
std::vector<TemporalSegment> keep_disjoint(std::vector<TemporalSegment> segs,
                                           const std::vector<double>& rank) {
  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank[a] != rank[b]) return rank[a] > rank[b];
    return segs[a].onset < segs[b].onset;
  });
  std::vector<TemporalSegment> kept;
  for (std::size_t i : order) {
    const bool clash = std::any_of(kept.begin(), kept.end(),
                                   [&](const TemporalSegment& k) { return overlaps(k, segs[i]); });
    if (!clash) kept.push_back(segs[i]);
  }
  std::sort(kept.begin(), kept.end(), [](const TemporalSegment& a, const TemporalSegment& b) {
    return a.onset < b.onset;
  });
  return kept;
}

struct Qualified {
  Index index;
  double prominence;
  double width;  // samples
};

}  // namespace

std::string_view to_string(MovementLabel label) noexcept {
  return label == MovementLabel::blink ? "blink" : "saccade";
}

MovementLabel movement_from_string(std::string_view s) {
  if (s == "blink") return MovementLabel::blink;
  if (s == "saccade") return MovementLabel::saccade;
  throw Error(ErrorCode::ParseError, "unknown movement label '" + std::string(s) + "'");
}

void BlinkParams::validate() const {
  if (gaussian_sigma <= 0 || !(pos_prominence > 0) || !(neg_prominence > 0) ||
      search_window <= 0 || min_peak_width < 0 || min_polarity_balance < 0 ||
      min_noise_ratio < 0) {
    throw Error(ErrorCode::InvalidArgument, "blink parameters must be positive");
  }
}

void SaccadeParams::validate() const {
  if (!(peak_threshold > 0) || min_width <= 0 || max_width <= min_width ||
      min_segment < 0 || blink_guard < 0 || min_noise_ratio < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "saccade parameters need 0 < min_width < max_width and a positive threshold");
  }
}

ActivitySeries gaussian_smooth(const ActivitySeries& series, Micros sigma) {
  require_uniform(series, "series");
  if (sigma <= 0) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  ActivitySeries out = series;
  if (series.empty()) return out;
  out.values = signal::gaussian_filter(
      series.values, static_cast<double>(sigma) / static_cast<double>(*series.uniform_dt));
  return out;
}

std::vector<TemporalSegment> detect_blinks(const ActivitySeries& a_on,
                                           const ActivitySeries& a_off,
                                           const BlinkParams& params) {
  params.validate();
  require_uniform(a_on, "ON activity");
  require_uniform(a_off, "OFF activity");
  if (a_on.uniform_dt != a_off.uniform_dt || a_on.size() != a_off.size() ||
      (!a_on.empty() && a_on.times.front() != a_off.times.front())) {
    throw Error(ErrorCode::GridMismatch, "ON and OFF activity are on different grids");
  }
  const Index n = static_cast<Index>(a_on.size());
  if (n < 3) return {};
  const double dt = static_cast<double>(*a_on.uniform_dt);
  const double sigma = static_cast<double>(params.gaussian_sigma) / dt;

  const Eigen::ArrayXd diff = signal::gaussian_filter(a_on.values - a_off.values, sigma);
  const Eigen::ArrayXd total = signal::gaussian_filter(a_on.values + a_off.values, sigma);
  const double scale = diff.abs().maxCoeff();
  if (!(scale > 0)) return {};
  const Eigen::ArrayXd d = diff / scale;
  const double noise = signal::mad_sigma(diff) / scale;

  const auto window = static_cast<Index>(static_cast<double>(params.search_window) / dt);
  const Index wlen = 2 * window + 1;
  const double min_width = static_cast<double>(params.min_peak_width) / dt;

  auto qualify = [&](const Eigen::ArrayXd& x, double min_prominence) {
    std::vector<Qualified> out;
    for (const signal::Peak& pk : signal::find_peaks(x, 0.5, wlen)) {
      if (pk.prominence < min_prominence) continue;
      if (pk.prominence < params.min_noise_ratio * noise) continue;
      if (pk.width() < min_width) continue;
      const double tot = total(pk.index);
      if (!(tot > 0) || x(pk.index) * scale / tot < params.min_polarity_balance) continue;
      out.push_back({pk.index, pk.prominence, pk.width()});
    }
    return out;
  };
  const std::vector<Qualified> closing = qualify(d, params.pos_prominence);
  const Eigen::ArrayXd neg = -d;
  const std::vector<Qualified> reopening = qualify(neg, params.neg_prominence);

  auto any_between = [](const std::vector<Qualified>& peaks, double lo, double hi) {
    return std::any_of(peaks.begin(), peaks.end(), [&](const Qualified& q) {
      return static_cast<double>(q.index) > lo && static_cast<double>(q.index) < hi;
    });
  };

  std::vector<TemporalSegment> found;
  std::vector<double> rank;
  for (Index i = 0; i + 1 < n; ++i) {
    if (!(d(i) > 0 && d(i + 1) <= 0)) continue;
    const double z = static_cast<double>(i) + d(i) / (d(i) - d(i + 1));

    const Qualified* left = nullptr;
    for (const Qualified& q : closing) {
      const double idx = static_cast<double>(q.index);
      if (idx < z && z - idx <= static_cast<double>(window)) left = &q;
    }
    const Qualified* right = nullptr;
    for (const Qualified& q : reopening) {
      const double idx = static_cast<double>(q.index);
      if (idx > z && idx - z <= static_cast<double>(window)) {
        right = &q;
        break;
      }
    }
    if (!left || !right) continue;
    if (any_between(reopening, static_cast<double>(left->index), z)) continue;
    if (any_between(closing, z, static_cast<double>(right->index))) continue;

    TemporalSegment seg;
    seg.label = MovementLabel::blink;
    seg.onset = to_time(a_on, z - left->width);
    seg.offset = to_time(a_on, z + right->width);
    const double summed = left->prominence + right->prominence;
    seg.score = std::min(1.0, summed / 2.0);
    if (seg.offset <= seg.onset) continue;
    found.push_back(seg);
    rank.push_back(summed);
  }
  return keep_disjoint(std::move(found), rank);
}

Micros fit_blink_window(std::span<const Micros> training_durations) {
  if (training_durations.empty()) {
    throw Error(ErrorCode::EmptyInput, "no blink durations to fit");
  }
  std::vector<double> v(training_durations.begin(), training_durations.end());
  return static_cast<Micros>(std::llround(signal::quantile(std::move(v), 0.95)));
}

ActivitySeries suppress_blinks(const ActivitySeries& series,
                               std::span<const TemporalSegment> blinks) {
  require_uniform(series, "series");
  ActivitySeries out = series;
  if (series.empty() || blinks.empty()) return out;
  const Index n = static_cast<Index>(series.size());
  const double dt = static_cast<double>(*series.uniform_dt);
  const Micros t0 = series.times.front();
  const Micros t_end = series.times.back();

  std::vector<std::pair<Index, Index>> spans;
  for (const TemporalSegment& b : blinks) {
    if (b.offset < t0 || b.onset > t_end) continue;
    auto lo = static_cast<Index>(std::floor(static_cast<double>(b.onset - t0) / dt));
    auto hi = static_cast<Index>(std::ceil(static_cast<double>(b.offset - t0) / dt));
    lo = std::clamp<Index>(lo, 0, n - 1);
    hi = std::clamp<Index>(hi, 0, n - 1);
    if (hi > lo) spans.emplace_back(lo, hi);
  }
  std::sort(spans.begin(), spans.end());
  std::vector<std::pair<Index, Index>> merged;
  for (const auto& s : spans) {
    if (!merged.empty() && s.first < merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }
  for (const auto& [lo, hi] : merged) {
    const double a = out.values(lo);
    const double b = out.values(hi);
    for (Index i = lo + 1; i < hi; ++i) {
      out.values(i) = a + (b - a) * static_cast<double>(i - lo) / static_cast<double>(hi - lo);
    }
  }
  return out;
}

std::vector<TemporalSegment> detect_saccades(const ActivitySeries& series,
                                             std::span<const TemporalSegment> blinks,
                                             const SaccadeParams& params) {
  params.validate();
  require_uniform(series, "series");
  if (series.empty()) throw Error(ErrorCode::EmptySeries, "no activity samples");

  std::vector<TemporalSegment> guarded(blinks.begin(), blinks.end());
  for (TemporalSegment& b : guarded) {
    b.onset -= params.blink_guard;
    b.offset += params.blink_guard;
  }
  const ActivitySeries clean = suppress_blinks(series, guarded);
  const double scale = clean.values.maxCoeff();
  if (!(scale > 0) || clean.size() < 3) return {};
  const Eigen::ArrayXd x = clean.values / scale;
  const double noise = signal::mad_sigma(clean.values) / scale;
  const double dt = static_cast<double>(*series.uniform_dt);

  std::vector<TemporalSegment> found;
  std::vector<double> rank;
  for (const signal::Peak& pk : signal::find_peaks(x)) {
    if (pk.prominence < params.peak_threshold) continue;
    if (pk.prominence < params.min_noise_ratio * noise) continue;
    const double width = pk.width() * dt;
    if (width < static_cast<double>(params.min_width) ||
        width > static_cast<double>(params.max_width)) {
      continue;
    }
    TemporalSegment seg;
    seg.label = MovementLabel::saccade;
    seg.onset = to_time(series, pk.left_ips);
    seg.offset = to_time(series, pk.right_ips);
    seg.score = std::clamp(pk.height, 0.0, 1.0);
    const Micros dur = seg.duration();
    if (dur < params.min_segment || dur < params.min_width || dur > params.max_width) continue;
    const bool near_blink = std::any_of(guarded.begin(), guarded.end(),
                                        [&](const TemporalSegment& b) { return overlaps(b, seg); });
    if (near_blink) continue;
    found.push_back(seg);
    rank.push_back(pk.prominence);
  }
  return keep_disjoint(std::move(found), rank);
}

OcularSignals ocular_signals(const EventStream& stream, double tau, Micros dt) {
  OcularSignals s;
  const auto on = activity_profile(stream, Channel::on, tau);
  const auto off = activity_profile(stream, Channel::off, tau);
  const auto all = activity_profile(stream, Channel::all, tau);
  if (stream.empty()) {
    s.on = on;
    s.off = off;
    s.all = all;
    s.on.uniform_dt = s.off.uniform_dt = s.all.uniform_dt = dt;
    return s;
  }
  const Micros t0 = stream.t_first();
  const Micros t1 = stream.t_last();
  s.on = resample_activity(on, dt, t0, t1);
  s.off = resample_activity(off, dt, t0, t1);
  s.all = resample_activity(all, dt, t0, t1);
  return s;
}

std::vector<TemporalSegment> OcularDetection::all() const {
  std::vector<TemporalSegment> out = blinks;
  out.insert(out.end(), saccades.begin(), saccades.end());
  std::stable_sort(out.begin(), out.end(), [](const TemporalSegment& a, const TemporalSegment& b) {
    return a.onset < b.onset;
  });
  return out;
}

OcularDetection detect_ocular(const OcularSignals& signals, const BlinkParams& blink,
                              const SaccadeParams& saccade) {
  OcularDetection out;
  if (signals.all.empty()) return out;
  out.blinks = detect_blinks(signals.on, signals.off, blink);
  out.saccades = detect_saccades(signals.all, out.blinks, saccade);
  return out;
}

}  // namespace evlive
