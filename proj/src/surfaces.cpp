// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/surfaces.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "evlive/error.hpp"

namespace evlive {

SAEFrame sae_frame(const EventStream& stream, Micros t_ref, double tau) {
  if (!(tau > 0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (!stream.empty() && t_ref < stream.t_first()) {
    throw Error(ErrorCode::InvalidArgument,
                "t_ref precedes the first event of the stream");
  }
  const int w = stream.width();
  const int h = stream.height();
  using Stamps = Eigen::Array<Micros, Eigen::Dynamic, Eigen::Dynamic>;
  Stamps last_pos = Stamps::Constant(h, w, -1);
  Stamps last_neg = Stamps::Constant(h, w, -1);
  for (const Event& e : stream.events()) {
    if (e.t > t_ref) break;
    (e.p > 0 ? last_pos : last_neg)(e.y, e.x) = e.t;
  }

  // Very old events must still read as populated, so clamp away from zero.
  const double floor = std::numeric_limits<double>::min();
  auto surface = [&](const Stamps& last) {
    Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(h, w);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (last(y, x) < 0) continue;
        const double v = std::exp(-static_cast<double>(t_ref - last(y, x)) / tau);
        out(y, x) = std::max(v, floor);
      }
    }
    return out;
  };

  SAEFrame frame;
  frame.width = w;
  frame.height = h;
  frame.t_ref = t_ref;
  frame.tau = tau;
  frame.values_pos = surface(last_pos);
  frame.values_neg = surface(last_neg);
  return frame;
}

std::string sae_csv(const Eigen::ArrayXXd& map) {
  std::string out;
  char buf[40];
  for (Eigen::Index y = 0; y < map.rows(); ++y) {
    for (Eigen::Index x = 0; x < map.cols(); ++x) {
      const int n = std::snprintf(buf, sizeof buf, x == 0 ? "%.9g" : ",%.9g", map(y, x));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

std::uint64_t VoxelGrid::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

int voxel_bin(Micros t, Micros t_start, Micros t_end, int t_bins) {
  __extension__ using Wide = unsigned __int128;
  const auto num = static_cast<Wide>(t - t_start) * static_cast<Wide>(t_bins);
  const auto den = static_cast<Wide>(t_end - t_start + 1);
  return static_cast<int>(num / den);
}

VoxelGrid voxel_grid(const EventStream& stream, int t_bins) {
  if (t_bins < 1) throw Error(ErrorCode::InvalidArgument, "t_bins must be >= 1");
  if (stream.empty()) throw Error(ErrorCode::EmptyStream, "cannot voxelize an empty stream");
  VoxelGrid g;
  g.t_bins = t_bins;
  g.height = stream.height();
  g.width = stream.width();
  g.t_start = stream.t_first();
  g.t_end = stream.t_last();
  g.counts.assign(static_cast<std::size_t>(t_bins) * 2 * g.height * g.width, 0);
  for (const Event& e : stream.events()) {
    const int bin = voxel_bin(e.t, g.t_start, g.t_end, t_bins);
    const int c = e.p > 0 ? 0 : 1;
    ++g.counts[g.offset(bin, c, e.y, e.x)];
  }
  return g;
}

}  // namespace evlive
