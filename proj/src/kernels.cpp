// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace apcalc::kern {

namespace detail {

void eval_trig_batch_scalar(const TrigPlan& plan, const double* pts, std::size_t npts,
                            Cplx* out) {
  const int d = plan.dim;
  for (std::size_t p = 0; p < npts; ++p) out[p] = Cplx(0, 0);
  for (std::size_t k = 0; k < plan.nterms; ++k) {
    const double* wk = plan.w.data() + k * d;
    const double cr = plan.cre[k], ci = plan.cim[k];
    for (std::size_t p = 0; p < npts; ++p) {
      double phase = 0;
      for (int i = 0; i < d; ++i) phase += wk[i] * pts[p * d + i];
      const double s = std::sin(phase), c = std::cos(phase);
      out[p] += Cplx(cr * c - ci * s, cr * s + ci * c);
    }
  }
}

Cplx weighted_sum_scalar(const Cplx* v, const double* wts, std::size_t n) {
  double re = 0, im = 0;
  for (std::size_t k = 0; k < n; ++k) {
    re += v[k].real() * wts[k];
    im += v[k].imag() * wts[k];
  }
  return {re, im};
}

double sum_abs2_scalar(const Cplx* v, std::size_t n) {
  double s = 0;
  for (std::size_t k = 0; k < n; ++k) s += v[k].real() * v[k].real() + v[k].imag() * v[k].imag();
  return s;
}

double max_abs_scalar(const double* v, std::size_t n) {
  double m = 0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::fabs(v[k]));
  return m;
}

#ifdef APCALC_HAVE_AVX2
void eval_trig_batch_avx2(const TrigPlan&, const double*, std::size_t, Cplx*);
Cplx weighted_sum_avx2(const Cplx*, const double*, std::size_t);
double sum_abs2_avx2(const Cplx*, std::size_t);
double max_abs_avx2(const double*, std::size_t);
#endif

}  // namespace detail

namespace {

std::optional<Isa> g_forced;
std::once_flag g_detect_once;
Isa g_detected = Isa::scalar;

void detect() {
#ifdef APCALC_HAVE_AVX2
  bool want_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (const char* env = std::getenv("APCALC_SIMD")) {
    std::string v(env);
    if (v == "scalar") want_avx2 = false;
    else if (v == "avx2" && !want_avx2)
      throw std::runtime_error("APCALC_SIMD=avx2 requested but CPU lacks avx2/fma");
  }
  g_detected = want_avx2 ? Isa::avx2 : Isa::scalar;
#else
  g_detected = Isa::scalar;
#endif
}

Isa current() {
  if (g_forced) return *g_forced;
  std::call_once(g_detect_once, detect);
  return g_detected;
}

}  // namespace

bool avx2_available() {
#ifdef APCALC_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current(); }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(std::optional<Isa> isa) {
  if (isa && *isa == Isa::avx2 && !avx2_available())
    throw std::runtime_error("force_isa: avx2 not available");
  g_forced = isa;
}

void eval_trig_batch(const TrigPlan& plan, const double* pts, std::size_t npts, Cplx* out) {
#ifdef APCALC_HAVE_AVX2
  if (current() == Isa::avx2) {
    detail::eval_trig_batch_avx2(plan, pts, npts, out);
    return;
  }
#endif
  detail::eval_trig_batch_scalar(plan, pts, npts, out);
}

Cplx weighted_sum(const Cplx* v, const double* wts, std::size_t n) {
#ifdef APCALC_HAVE_AVX2
  if (current() == Isa::avx2) return detail::weighted_sum_avx2(v, wts, n);
#endif
  return detail::weighted_sum_scalar(v, wts, n);
}

double sum_abs2(const Cplx* v, std::size_t n) {
#ifdef APCALC_HAVE_AVX2
  if (current() == Isa::avx2) return detail::sum_abs2_avx2(v, n);
#endif
  return detail::sum_abs2_scalar(v, n);
}

double max_abs(const double* v, std::size_t n) {
#ifdef APCALC_HAVE_AVX2
  if (current() == Isa::avx2) return detail::max_abs_avx2(v, n);
#endif
  return detail::max_abs_scalar(v, n);
}

}  // namespace apcalc::kern
