// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evlive {

/// Timestamps are integer microseconds everywhere in the library.
using Micros = std::int64_t;

constexpr Micros ms_to_us(double ms) noexcept {
  return static_cast<Micros>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5));
}

/// One brightness-change event: pixel (x, y), time t, polarity p in {-1, +1}.
struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Micros t = 0;
  std::int8_t p = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Time-ordered event sequence bound to a sensor geometry.
///
/// Construction validates polarity, bounds and ordering; the stream is
/// immutable afterwards, so it can be shared freely between threads.
class EventStream {
 public:
  EventStream() = default;
  EventStream(int width, int height);
  /// Throws NonMonotonic if timestamps decrease.
  EventStream(int width, int height, std::vector<Event> events);

  /// Stable-sorts by timestamp before validating; `reordered` receives the
  /// number of events that were out of order in the input.
  static EventStream from_unsorted(int width, int height,
                                   std::vector<Event> events,
                                   std::size_t* reordered = nullptr);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  Micros t_first() const;
  Micros t_last() const;

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Event> events_;
};

enum class RoiLabel { face, left_eye, right_eye, custom };

std::string_view to_string(RoiLabel label) noexcept;
RoiLabel roi_label_from_string(std::string_view s);

struct RegionOfInterest {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  RoiLabel label = RoiLabel::custom;

  bool contains(int x, int y) const noexcept {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }

  friend bool operator==(const RegionOfInterest&,
                         const RegionOfInterest&) = default;
};

/// ROI spanning the whole sensor of `stream`.
RegionOfInterest full_frame(const EventStream& stream,
                            RoiLabel label = RoiLabel::face);

/// Events inside `roi`, re-based to the ROI origin, geometry (w, h).
EventStream crop_roi(const EventStream& stream, const RegionOfInterest& roi);

/// Events with t0 <= t < t1. Timestamps keep their absolute values.
EventStream slice_time(const EventStream& stream, Micros t0, Micros t1);

/// Shifts every timestamp by -origin. Throws InvalidArgument if a shifted
/// timestamp would become negative.
EventStream rebase_time(const EventStream& stream, Micros origin);

}  // namespace evlive
