// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evlive/event.hpp"

namespace evlive {

/// Surface of active events: per pixel and polarity, exp(-(t_ref - t_last)/tau)
/// of the most recent event at or before t_ref; 0 where no event occurred yet.
/// Maps are indexed (row = y, col = x).
struct SAEFrame {
  int width = 0;
  int height = 0;
  Micros t_ref = 0;
  double tau = 0;
  Eigen::ArrayXXd values_pos;
  Eigen::ArrayXXd values_neg;
};

inline constexpr double kDefaultSaeTauUs = 66'000.0;

SAEFrame sae_frame(const EventStream& stream, Micros t_ref,
                   double tau = kDefaultSaeTauUs);

/// Row-major CSV of one polarity map (one sensor row per line).
std::string sae_csv(const Eigen::ArrayXXd& map);

/// Event counts of shape [T, C=2, H, W]; channel 0 holds p = +1 events.
struct VoxelGrid {
  int t_bins = 0;
  int channels = 2;
  int height = 0;
  int width = 0;
  Micros t_start = 0;
  Micros t_end = 0;
  std::vector<std::uint32_t> counts;

  std::size_t offset(int t, int c, int y, int x) const {
    return ((static_cast<std::size_t>(t) * channels + c) * height + y) * width + x;
  }
  std::uint32_t at(int t, int c, int y, int x) const { return counts[offset(t, c, y, x)]; }
  std::uint64_t total() const;
};

/// Bin of an event: floor((t - t_start) * T / (t_end - t_start + 1)).
int voxel_bin(Micros t, Micros t_start, Micros t_end, int t_bins);

VoxelGrid voxel_grid(const EventStream& stream, int t_bins);

}  // namespace evlive
