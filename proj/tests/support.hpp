// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "evlive/event.hpp"

namespace evlive::test {

/// Random sorted stream; `t_span` bounds the timestamps, duplicates allowed.
inline EventStream random_stream(std::uint64_t seed, std::size_t n, int w, int h,
                                 Micros t_span = 1'000'000) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1), dp(0, 1);
  std::uniform_int_distribution<Micros> dt(0, t_span);
  std::vector<Event> ev(n);
  for (auto& e : ev) {
    e.x = static_cast<std::uint16_t>(dx(rng));
    e.y = static_cast<std::uint16_t>(dy(rng));
    e.t = dt(rng);
    e.p = dp(rng) ? 1 : -1;
  }
  std::stable_sort(ev.begin(), ev.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return EventStream(w, h, std::move(ev));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("evlive_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace evlive::test
