// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic sample sets for the asymptotic estimate checks: log-spaced
// radii along a fixed direction family, and uniform x grids over one
// (quasi-)period. The direction family contains the coordinate axes, evenly
// spread unit vectors, a seeded pseudo-random batch, and a quarter-octave
// dyadic ladder of near-axis tilts; the ladder is what exposes
// quasi-homogeneous behavior (worst directions at angle ~ r^{-1/2}).

#ifndef APCALC_SAMPLING_HPP
#define APCALC_SAMPLING_HPP

#include <cmath>
#include <numbers>
#include <cstdint>
#include <vector>

#include "apcalc/rng.hpp"

namespace apcalc {

struct RaySampler {
  std::vector<double> radii;
  std::vector<std::vector<double>> directions;  // unit vectors, dim entries each

  static RaySampler make(int dim, double r_min, double r_max, int n_radii,
                         std::uint64_t seed = 1, bool dyadic_tilts = true) {
    RaySampler s;
    s.radii.reserve(n_radii);
    for (int k = 0; k < n_radii; ++k)
      s.radii.push_back(r_min * std::pow(r_max / r_min, n_radii == 1 ? 0.0 : double(k) / (n_radii - 1)));

    auto push_unit = [&](std::vector<double> v) {
      double n2 = 0;
      for (double c : v) n2 += c * c;
      if (n2 <= 0) return;
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : v) c *= inv;
      s.directions.push_back(std::move(v));
    };

    for (int a = 0; a < dim; ++a)
      for (int sign : {+1, -1}) {
        std::vector<double> v(dim, 0.0);
        v[a] = sign;
        push_unit(std::move(v));
      }

    if (dim == 2) {
      for (int k = 0; k < 64; ++k) {
        const double th = 2 * std::numbers::pi * k / 64.0;
        push_unit({std::cos(th), std::sin(th)});
      }
    }

    Rng rng(seed);
    const int n_random = dim >= 2 ? 32 : 0;
    for (int k = 0; k < n_random; ++k) {
      std::vector<double> v(dim);
      // Box-Muller-free isotropic-enough directions: uniform cube, normalized.
      for (double& c : v) c = rng.uniform(-1, 1);
      push_unit(std::move(v));
    }

    if (dyadic_tilts && dim >= 2) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          if (a == b) continue;
          for (int k = 1; k <= 60; ++k) {
            const double t = std::pow(2.0, -0.25 * k);
            for (int sign : {+1, -1}) {
              std::vector<double> v(dim, 0.0);
              v[a] = 1.0;
              v[b] = sign * t;
              push_unit(std::move(v));
            }
          }
        }
    }
    return s;
  }

  std::vector<double> point(size_t dir, size_t rad) const {
    std::vector<double> p = directions[dir];
    for (double& c : p) c *= radii[rad];
    return p;
  }
};

// Uniform grid with n points per axis over [0, period)^dim.
inline std::vector<std::vector<double>> x_grid(int dim, double period, int n_per_axis) {
  std::vector<std::vector<double>> out;
  size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<size_t>(n_per_axis);
  out.reserve(total);
  for (size_t idx = 0; idx < total; ++idx) {
    std::vector<double> p(dim);
    size_t rem = idx;
    for (int a = 0; a < dim; ++a) {
      p[a] = period * static_cast<double>(rem % n_per_axis) / n_per_axis;
      rem /= n_per_axis;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace apcalc

#endif
