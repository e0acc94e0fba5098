// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Numerical mean value and Bohr-Fourier coefficients for black-box almost
// periodic callables. Each T gives a tensor-grid trapezoid estimate over the
// centered cube of side T; the schedule combines them. The error indicator
// is the spread of the last per-T estimates (a heuristic, not a bound).

#ifndef APCALC_BOHR_HPP
#define APCALC_BOHR_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "apcalc/trigpoly.hpp"

namespace apcalc::bohr {

using apcalc::Cplx;

using Callable = std::function<Cplx(std::span<const double>)>;

struct MeanSchedule {
  std::vector<double> T_values;
  int points_per_axis = 64;
  enum class Extrap { none, richardson } extrapolation = Extrap::richardson;

  // n_values cube sides growing linearly up to t_max.
  static MeanSchedule ladder(double t_max, int n_values = 8, int pts = 64);
  void validate(int dim) const;
};

struct MeanEstimate {
  Cplx estimate{};
  double error_indicator = 0;
  std::vector<Cplx> per_T;
};

MeanEstimate numerical_mean(const Callable& fn, int dim, const MeanSchedule& schedule);
MeanEstimate numerical_mean(const TrigPolyD& f, const MeanSchedule& schedule);

MeanEstimate numerical_bohr_coeff(const Callable& fn, std::span<const double> xi,
                                  const MeanSchedule& schedule);
MeanEstimate numerical_bohr_coeff(const TrigPolyD& f, std::span<const double> xi,
                                  const MeanSchedule& schedule);

// Pre-sampled one-dimensional signal: trapezoid in the given sample points.
struct SampledSignal {
  std::vector<double> x;
  std::vector<Cplx> values;
};

SampledSignal read_signal_csv(const std::string& path);
MeanEstimate mean_from_samples(const SampledSignal& sig, double xi = 0.0);

}  // namespace apcalc::bohr

#endif
