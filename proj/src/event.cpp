// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/event.hpp"

#include <algorithm>
#include <string>

#include "evlive/error.hpp"

namespace evlive {

namespace {

void validate_geometry(int width, int height) {
  if (width < 0 || height < 0 || width > 65535 || height > 65535) {
    throw Error(ErrorCode::InvalidArgument,
                "sensor geometry out of range: " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
}

void validate_event(const Event& e, int width, int height, std::size_t index) {
  if (e.p != 1 && e.p != -1) {
    throw Error(ErrorCode::BadPolarity,
                "event " + std::to_string(index) + " has polarity " +
                    std::to_string(int{e.p}));
  }
  if (e.x >= width || e.y >= height) {
    throw Error(ErrorCode::OutOfBounds,
                "event " + std::to_string(index) + " at (" +
                    std::to_string(e.x) + "," + std::to_string(e.y) +
                    ") outside " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (e.t < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "event " + std::to_string(index) + " has negative timestamp");
  }
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::TruncatedRecord: return "TruncatedRecord";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::BadPolarity: return "BadPolarity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::NotUniform: return "NotUniform";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoWindows: return "NoWindows";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::OverlappingMovements: return "OverlappingMovements";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

EventStream::EventStream(int width, int height)
    : width_(width), height_(height) {
  validate_geometry(width, height);
}

EventStream::EventStream(int width, int height, std::vector<Event> events)
    : width_(width), height_(height), events_(std::move(events)) {
  validate_geometry(width, height);
  for (std::size_t i = 0; i < events_.size(); ++i) {
    validate_event(events_[i], width, height, i);
    if (i > 0 && events_[i].t < events_[i - 1].t) {
      throw Error(ErrorCode::NonMonotonic,
                  "timestamp decreases at event " + std::to_string(i));
    }
  }
}

EventStream EventStream::from_unsorted(int width, int height,
                                       std::vector<Event> events,
                                       std::size_t* reordered) {
  std::size_t count = 0;
  Micros running_max = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0 && events[i].t < running_max) ++count;
    running_max = std::max(running_max, events[i].t);
  }
  if (count > 0) {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
  }
  if (reordered) *reordered = count;
  return EventStream(width, height, std::move(events));
}

Micros EventStream::t_first() const {
  if (events_.empty()) throw Error(ErrorCode::EmptyStream, "stream is empty");
  return events_.front().t;
}

Micros EventStream::t_last() const {
  if (events_.empty()) throw Error(ErrorCode::EmptyStream, "stream is empty");
  return events_.back().t;
}

std::string_view to_string(RoiLabel label) noexcept {
  switch (label) {
    case RoiLabel::face: return "face";
    case RoiLabel::left_eye: return "left_eye";
    case RoiLabel::right_eye: return "right_eye";
    case RoiLabel::custom: return "custom";
  }
  return "custom";
}

RoiLabel roi_label_from_string(std::string_view s) {
  if (s == "face") return RoiLabel::face;
  if (s == "left_eye") return RoiLabel::left_eye;
  if (s == "right_eye") return RoiLabel::right_eye;
  if (s == "custom") return RoiLabel::custom;
  throw Error(ErrorCode::ParseError, "unknown ROI label '" + std::string(s) + "'");
}

RegionOfInterest full_frame(const EventStream& stream, RoiLabel label) {
  return {0, 0, stream.width(), stream.height(), label};
}

EventStream crop_roi(const EventStream& stream, const RegionOfInterest& roi) {
  if (roi.w <= 0 || roi.h <= 0 || roi.x0 < 0 || roi.y0 < 0 ||
      roi.x0 + roi.w > stream.width() || roi.y0 + roi.h > stream.height()) {
    throw Error(ErrorCode::RoiOutOfBounds,
                "ROI (" + std::to_string(roi.x0) + "," + std::to_string(roi.y0) +
                    "," + std::to_string(roi.w) + "," + std::to_string(roi.h) +
                    ") not inside " + std::to_string(stream.width()) + "x" +
                    std::to_string(stream.height()));
  }
  std::vector<Event> out;
  for (const Event& e : stream.events()) {
    if (roi.contains(e.x, e.y)) {
      out.push_back({static_cast<std::uint16_t>(e.x - roi.x0),
                     static_cast<std::uint16_t>(e.y - roi.y0), e.t, e.p});
    }
  }
  return EventStream(roi.w, roi.h, std::move(out));
}

EventStream slice_time(const EventStream& stream, Micros t0, Micros t1) {
  if (t0 > t1) {
    throw Error(ErrorCode::InvalidInterval,
                "slice [" + std::to_string(t0) + ", " + std::to_string(t1) +
                    ") has t0 > t1");
  }
  auto events = stream.events();
  auto by_time = [](const Event& e, Micros t) { return e.t < t; };
  auto lo = std::lower_bound(events.begin(), events.end(), t0, by_time);
  auto hi = std::lower_bound(lo, events.end(), t1, by_time);
  return EventStream(stream.width(), stream.height(),
                     std::vector<Event>(lo, hi));
}

EventStream rebase_time(const EventStream& stream, Micros origin) {
  std::vector<Event> out(stream.events().begin(), stream.events().end());
  for (Event& e : out) {
    e.t -= origin;
    if (e.t < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "rebase origin is after an event timestamp");
    }
  }
  return EventStream(stream.width(), stream.height(), std::move(out));
}

}  // namespace evlive
