// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "apcalc/errors.hpp"
#include "apcalc/kernels.hpp"

namespace apcalc::bohr {

namespace {

constexpr size_t kChunk = 1 << 14;

// Per-axis trapezoid nodes/weights on [-T/2, T/2], weights normalized so a
// constant integrand gives exactly 1.
void axis_rule(double T, int n, std::vector<double>& nodes, std::vector<double>& wts) {
  nodes.resize(n);
  wts.resize(n);
  const double h = 1.0 / (n - 1);
  for (int j = 0; j < n; ++j) {
    nodes[j] = -T / 2 + T * j * h;
    wts[j] = (j == 0 || j == n - 1) ? h / 2 : h;
  }
}

// One trapezoid estimate of mean over the centered cube of side T. With
// windowed=true the integrand is weighted per axis by cos^2(pi x_a / T),
// which plays the role of a smooth T-averaging of the nested cube means:
// the window vanishes to first order at the cube boundary, so the
// oscillatory O(1/T) term of the plain cube mean is suppressed to
// O((nu T)^-3) and the trapezoid discretization error stays spectral.
template <class EvalChunk>
Cplx cube_mean(int dim, double T, int n, bool windowed, EvalChunk&& eval_chunk) {
  std::vector<double> nodes, wts;
  axis_rule(T, n, nodes, wts);
  if (windowed) {
    double total = 0;
    for (int j = 0; j < n; ++j) {
      const double c = std::cos(std::numbers::pi * nodes[j] / T);
      wts[j] *= c * c;
      total += wts[j];
    }
    for (int j = 0; j < n; ++j) wts[j] /= total;
  }
  size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<size_t>(n);

  std::vector<double> pts;
  std::vector<double> ptwts;
  std::vector<Cplx> vals;
  Cplx acc = 0;
  size_t idx = 0;
  while (idx < total) {
    const size_t m = std::min(kChunk, total - idx);
    pts.resize(m * dim);
    ptwts.resize(m);
    for (size_t r = 0; r < m; ++r) {
      size_t rem = idx + r;
      double w = 1;
      for (int a = 0; a < dim; ++a) {
        const int j = static_cast<int>(rem % n);
        rem /= n;
        pts[r * dim + a] = nodes[j];
        w *= wts[j];
      }
      ptwts[r] = w;
    }
    vals.resize(m);
    eval_chunk(pts.data(), m, vals.data());
    for (size_t r = 0; r < m; ++r) {
      if (!std::isfinite(vals[r].real()) || !std::isfinite(vals[r].imag())) {
        std::vector<double> pt(pts.begin() + r * dim, pts.begin() + (r + 1) * dim);
        throw EvalDomainError("numerical_mean: non-finite sample value", pt);
      }
    }
    acc += kern::weighted_sum(vals.data(), ptwts.data(), m);
    idx += m;
  }
  return acc;
}

template <class EvalChunk>
MeanEstimate mean_impl(int dim, const MeanSchedule& sched, EvalChunk&& eval_chunk) {
  sched.validate(dim);
  MeanEstimate out;
  out.per_T.reserve(sched.T_values.size());
  for (double T : sched.T_values)
    out.per_T.push_back(cube_mean(dim, T, sched.points_per_axis, false, eval_chunk));

  if (sched.extrapolation == MeanSchedule::Extrap::none || out.per_T.size() == 1) {
    out.estimate = out.per_T.back();
  } else {
    // Smooth limiting form of averaging the nested cube estimates over T;
    // evaluated directly at the largest T so the result does not depend on
    // how the ladder happens to sample the oscillation.
    out.estimate = cube_mean(dim, sched.T_values.back(), sched.points_per_axis, true, eval_chunk);
  }

  const size_t n = out.per_T.size();
  const size_t take = std::min<size_t>(3, n);
  double spread = 0;
  for (size_t i = n - take; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) spread = std::max(spread, std::abs(out.per_T[i] - out.per_T[j]));
  out.error_indicator = spread;
  return out;
}

}  // namespace

MeanSchedule MeanSchedule::ladder(double t_max, int n_values, int pts) {
  MeanSchedule s;
  s.points_per_axis = pts;
  for (int k = 1; k <= n_values; ++k) s.T_values.push_back(t_max * k / n_values);
  return s;
}

void MeanSchedule::validate(int dim) const {
  if (dim < 1 || dim > 3) throw InputError("MeanSchedule: black-box quadrature limited to d <= 3");
  if (T_values.empty()) throw InputError("MeanSchedule: need at least one T value");
  for (size_t i = 0; i + 1 < T_values.size(); ++i)
    if (!(T_values[i] < T_values[i + 1]))
      throw InputError("MeanSchedule: T_values must be strictly increasing");
  if (T_values.front() <= 0) throw InputError("MeanSchedule: T values must be positive");
  if (points_per_axis < 16) throw InputError("MeanSchedule: points_per_axis must be >= 16");
}

MeanEstimate numerical_mean(const Callable& fn, int dim, const MeanSchedule& schedule) {
  return mean_impl(dim, schedule, [&](const double* pts, size_t m, Cplx* out) {
    for (size_t r = 0; r < m; ++r) out[r] = fn(std::span<const double>(pts + r * dim, dim));
  });
}

MeanEstimate numerical_mean(const TrigPolyD& f, const MeanSchedule& schedule) {
  const auto plan = f.to_plan();
  return mean_impl(f.dim(), schedule, [&](const double* pts, size_t m, Cplx* out) {
    kern::eval_trig_batch(plan, pts, m, out);
  });
}

MeanEstimate numerical_bohr_coeff(const Callable& fn, std::span<const double> xi,
                                  const MeanSchedule& schedule) {
  const int dim = static_cast<int>(xi.size());
  std::vector<double> x(xi.begin(), xi.end());
  Callable g = [fn, x](std::span<const double> pt) {
    double phase = 0;
    for (size_t a = 0; a < x.size(); ++a) phase -= 2.0 * std::numbers::pi * x[a] * pt[a];
    return fn(pt) * Cplx(std::cos(phase), std::sin(phase));
  };
  return numerical_mean(g, dim, schedule);
}

MeanEstimate numerical_bohr_coeff(const TrigPolyD& f, std::span<const double> xi,
                                  const MeanSchedule& schedule) {
  kern::TrigPlan plan = f.to_plan();
  for (size_t k = 0; k < plan.nterms; ++k)
    for (int a = 0; a < plan.dim; ++a)
      plan.w[k * plan.dim + a] -= 2.0 * std::numbers::pi * xi[a];
  return mean_impl(f.dim(), schedule, [&](const double* pts, size_t m, Cplx* out) {
    kern::eval_trig_batch(plan, pts, m, out);
  });
}

SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("read_signal_csv: cannot open " + path);
  SampledSignal sig;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, re, im = 0;
    if (!(ss >> x >> re)) {
      if (sig.x.empty()) continue;  // header
      throw InputError("read_signal_csv: malformed line '" + line + "'");
    }
    ss >> im;
    sig.x.push_back(x);
    sig.values.emplace_back(re, im);
  }
  if (sig.x.size() < 2) throw InputError("read_signal_csv: need at least two samples");
  for (size_t i = 0; i + 1 < sig.x.size(); ++i)
    if (!(sig.x[i] < sig.x[i + 1])) throw InputError("read_signal_csv: x must be increasing");
  return sig;
}

MeanEstimate mean_from_samples(const SampledSignal& sig, double xi) {
  auto window_mean = [&](size_t lo, size_t hi) {
    Cplx acc = 0;
    for (size_t i = lo; i + 1 <= hi; ++i) {
      if (i + 1 > hi) break;
      const double h = sig.x[i + 1] - sig.x[i];
      auto mod = [&](size_t k) {
        const double th = -2.0 * std::numbers::pi * xi * sig.x[k];
        return sig.values[k] * Cplx(std::cos(th), std::sin(th));
      };
      acc += 0.5 * h * (mod(i) + mod(i + 1));
    }
    return acc / (sig.x[hi] - sig.x[lo]);
  };
  MeanEstimate out;
  const size_t n = sig.x.size();
  Cplx full = window_mean(0, n - 1);
  Cplx half = window_mean(n / 4, n - 1 - n / 4);
  out.per_T = {half, full};
  out.estimate = full;
  out.error_indicator = std::abs(full - half);
  return out;
}

}  // namespace apcalc::bohr
