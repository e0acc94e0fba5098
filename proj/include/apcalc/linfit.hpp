// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#ifndef APCALC_LINFIT_HPP
#define APCALC_LINFIT_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace apcalc {

struct LinFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double rms = 0;
  size_t n = 0;
};

inline LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinFit f;
  f.n = x.size();
  if (f.n < 2) return f;
  double sx = 0, sy = 0;
  for (size_t i = 0; i < f.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / f.n, my = sy / f.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < f.n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.rms = std::sqrt(ss_res / f.n);
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace apcalc

#endif
