// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops used by the quadrature and sampling paths:
// batch evaluation of trigonometric polynomials at many points, and a few
// reductions. A scalar reference implementation always exists; an AVX2
// variant is selected at runtime when the CPU supports it. The two are
// equivalence-tested against each other.

#ifndef APCALC_KERNELS_HPP
#define APCALC_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace apcalc::kern {

using Cplx = std::complex<double>;

// Flattened trig polynomial: value(x) = sum_k (cre[k] + i*cim[k]) * exp(i * <w_k, x>)
// where w_k is row k of w (dim doubles), already scaled by 2*pi.
struct TrigPlan {
  int dim = 1;
  std::size_t nterms = 0;
  std::vector<double> w;    // nterms * dim
  std::vector<double> cre;  // nterms
  std::vector<double> cim;  // nterms
};

// pts is row-major npts x dim; out receives npts values.
void eval_trig_batch(const TrigPlan& plan, const double* pts, std::size_t npts, Cplx* out);

// sum_k v[k] * wts[k]
Cplx weighted_sum(const Cplx* v, const double* wts, std::size_t n);

// sum_k |v[k]|^2
double sum_abs2(const Cplx* v, std::size_t n);

double max_abs(const double* v, std::size_t n);

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa);
// Test hook: pin the implementation (throws if unavailable). nullopt = auto.
void force_isa(std::optional<Isa> isa);
bool avx2_available();

}  // namespace apcalc::kern

#endif
