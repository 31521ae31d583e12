// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Dense 1-D signal kernels shared by the detectors. Everything here is a free
// function over Eigen dense expressions so callers can pass arrays, blocks or
// scaled expressions without materializing copies first.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace evlive::signal {

using Eigen::Index;

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Half-sample symmetric reflection (d c b a | a b c d | d c b a) of an
/// arbitrary index into [0, n).
inline Index reflect_index(Index i, Index n) {
  const Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

/// Normalized sampled Gaussian, truncated at +-4 sigma.
template <typename Scalar = double>
Array<Scalar> gaussian_kernel(double sigma_samples) {
  if (!(sigma_samples > 0)) throw std::invalid_argument("sigma must be > 0");
  const auto radius = static_cast<Index>(std::ceil(4.0 * sigma_samples));
  Array<Scalar> k(2 * radius + 1);
  for (Index i = -radius; i <= radius; ++i) {
    const double z = static_cast<double>(i) / sigma_samples;
    k(i + radius) = static_cast<Scalar>(std::exp(-0.5 * z * z));
  }
  return k / k.sum();
}

/// Same-length convolution with a symmetric odd-length kernel, reflect-padded.
template <typename Derived, typename KernelDerived>
Array<typename Derived::Scalar> convolve_reflect(
    const Eigen::DenseBase<Derived>& x,
    const Eigen::DenseBase<KernelDerived>& kernel) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.size();
  const Index radius = kernel.size() / 2;
  Array<Scalar> out(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = 0;
    for (Index k = -radius; k <= radius; ++k) {
      acc += kernel(k + radius) * x(reflect_index(i - k, n));
    }
    out(i) = acc;
  }
  return out;
}

template <typename Derived>
Array<typename Derived::Scalar> gaussian_filter(
    const Eigen::DenseBase<Derived>& x, double sigma_samples) {
  return convolve_reflect(x, gaussian_kernel<typename Derived::Scalar>(sigma_samples));
}

/// Local maximum with its topographic prominence and the width of the peak
/// measured at half prominence. Interpolated positions are in samples.
struct Peak {
  Index index = 0;
  double height = 0;
  double prominence = 0;
  Index left_base = 0;
  Index right_base = 0;
  double left_ips = 0;
  double right_ips = 0;

  double width() const { return right_ips - left_ips; }
};

/// Indices of strict local maxima; flat tops report their midpoint.
template <typename Derived>
std::vector<Index> local_maxima(const Eigen::DenseBase<Derived>& x) {
  std::vector<Index> peaks;
  const Index n = x.size();
  Index i = 1;
  while (i < n - 1) {
    if (x(i - 1) < x(i)) {
      Index ahead = i + 1;
      while (ahead < n - 1 && x(ahead) == x(i)) ++ahead;
      if (x(ahead) < x(i)) {
        peaks.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }
  return peaks;
}

namespace detail {

template <typename Derived>
void measure(const Eigen::DenseBase<Derived>& x, Peak& pk, double rel_height,
             Index wlen) {
  const Index p = pk.index;
  Index i_min = 0;
  Index i_max = x.size() - 1;
  if (wlen > 1) {
    i_min = std::max<Index>(p - wlen / 2, 0);
    i_max = std::min<Index>(p + wlen / 2, x.size() - 1);
  }
  const double top = static_cast<double>(x(p));

  double left_min = top;
  Index left_base = p;
  for (Index i = p; i >= i_min && static_cast<double>(x(i)) <= top; --i) {
    if (static_cast<double>(x(i)) < left_min) {
      left_min = static_cast<double>(x(i));
      left_base = i;
    }
  }
  double right_min = top;
  Index right_base = p;
  for (Index i = p; i <= i_max && static_cast<double>(x(i)) <= top; ++i) {
    if (static_cast<double>(x(i)) < right_min) {
      right_min = static_cast<double>(x(i));
      right_base = i;
    }
  }
  pk.height = top;
  pk.left_base = left_base;
  pk.right_base = right_base;
  pk.prominence = top - std::max(left_min, right_min);

  const double line = top - pk.prominence * rel_height;
  Index i = p;
  while (left_base < i && line < static_cast<double>(x(i))) --i;
  double left = static_cast<double>(i);
  if (static_cast<double>(x(i)) < line) {
    left += (line - x(i)) / static_cast<double>(x(i + 1) - x(i));
  }
  i = p;
  while (i < right_base && line < static_cast<double>(x(i))) ++i;
  double right = static_cast<double>(i);
  if (static_cast<double>(x(i)) < line) {
    right -= (line - x(i)) / static_cast<double>(x(i - 1) - x(i));
  }
  pk.left_ips = left;
  pk.right_ips = right;
}

}  // namespace detail

/// All local maxima with prominence and width at `rel_height` of prominence
/// (0.5 gives the half-prominence width). A `wlen` > 1 restricts the base
/// search to wlen samples centred on each peak.
template <typename Derived>
std::vector<Peak> find_peaks(const Eigen::DenseBase<Derived>& x,
                             double rel_height = 0.5, Index wlen = 0) {
  std::vector<Peak> peaks;
  for (Index idx : local_maxima(x)) {
    Peak pk;
    pk.index = idx;
    detail::measure(x, pk, rel_height, wlen);
    peaks.push_back(pk);
  }
  return peaks;
}

/// Linear-interpolation quantile (the common "type 7" definition).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) {
  return quantile(std::move(values), 0.5);
}

/// Robust noise scale: 1.4826 * median absolute deviation.
template <typename Derived>
double mad_sigma(const Eigen::DenseBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  std::vector<double> v(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) v[static_cast<std::size_t>(i)] = x(i);
  const double med = median(v);
  for (double& d : v) d = std::abs(d - med);
  return 1.4826 * median(std::move(v));
}

}  // namespace evlive::signal
