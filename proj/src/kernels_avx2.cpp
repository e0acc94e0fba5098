// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 variants. Compiled with -mavx2 -mfma; only reached after a runtime
// CPU check in kernels.cpp. The sin/cos kernel is the usual Cody-Waite
// pi/2 reduction plus minimax polynomials on [-pi/4, pi/4]; lanes with
// |phase| beyond the reduction's safe range fall back to libm.

#include "apcalc/kernels.hpp"

#ifdef APCALC_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <vector>

namespace apcalc::kern::detail {

namespace {

constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kDP1 = 1.57079632673412561417e+00;
constexpr double kDP2 = 6.07710050630396597660e-11;
constexpr double kDP3 = 2.02226624879595063154e-21;
// Reduction is accurate while q*kDP3 stays below the target ulp.
constexpr double kMaxPhase = 1.0e8;

constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

inline __m256d mask_from_epi32(__m128i m32) {
  return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m32));
}

// 4-lane sin/cos. Caller guarantees |theta| <= kMaxPhase.
inline void sincos4(__m256d theta, __m256d& s_out, __m256d& c_out) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(theta, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kDP1), theta);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kDP2), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kDP3), r);

  const __m128i qi = _mm256_cvtpd_epi32(q);
  const __m128i k = _mm_and_si128(qi, _mm_set1_epi32(3));

  const __m256d z = _mm256_mul_pd(r, r);

  __m256d sp = _mm256_set1_pd(kS6);
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kS5));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kS4));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kS3));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kS2));
  sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kS1));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), sp, r);

  __m256d cp = _mm256_set1_pd(kC6);
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kC5));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kC4));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kC3));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kC2));
  cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kC1));
  const __m256d zz = _mm256_mul_pd(z, z);
  __m256d cos_r = _mm256_fmadd_pd(zz, cp, _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5),
                                                           _mm256_set1_pd(1.0)));

  // Quadrant selection: odd k swaps sin/cos; k in {2,3} negates sin,
  // k in {1,2} negates cos.
  const __m256d swap = mask_from_epi32(
      _mm_cmpeq_epi32(_mm_and_si128(k, _mm_set1_epi32(1)), _mm_set1_epi32(1)));
  const __m256d neg_s = mask_from_epi32(
      _mm_cmpeq_epi32(_mm_and_si128(k, _mm_set1_epi32(2)), _mm_set1_epi32(2)));
  const __m256d neg_c = mask_from_epi32(_mm_cmpeq_epi32(
      _mm_and_si128(_mm_add_epi32(k, _mm_set1_epi32(1)), _mm_set1_epi32(2)),
      _mm_set1_epi32(2)));

  __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
  __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
  const __m256d signbit = _mm256_set1_pd(-0.0);
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_s, signbit));
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_c, signbit));
  s_out = s;
  c_out = c;
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void eval_trig_batch_avx2(const TrigPlan& plan, const double* pts, std::size_t npts,
                          Cplx* out) {
  const int d = plan.dim;
  // Transpose to one contiguous buffer per axis.
  std::vector<double> soa(static_cast<std::size_t>(d) * npts);
  for (std::size_t p = 0; p < npts; ++p)
    for (int i = 0; i < d; ++i) soa[static_cast<std::size_t>(i) * npts + p] = pts[p * d + i];

  std::vector<double> acc_re(npts, 0.0), acc_im(npts, 0.0);
  const std::size_t nv = npts / 4 * 4;
  const __m256d maxph = _mm256_set1_pd(kMaxPhase);

  for (std::size_t k = 0; k < plan.nterms; ++k) {
    const double* wk = plan.w.data() + k * d;
    const __m256d cr = _mm256_set1_pd(plan.cre[k]);
    const __m256d ci = _mm256_set1_pd(plan.cim[k]);
    for (std::size_t p = 0; p < nv; p += 4) {
      __m256d phase = _mm256_setzero_pd();
      for (int i = 0; i < d; ++i) {
        const __m256d xi = _mm256_loadu_pd(soa.data() + static_cast<std::size_t>(i) * npts + p);
        phase = _mm256_fmadd_pd(_mm256_set1_pd(wk[i]), xi, phase);
      }
      __m256d s, c;
      const __m256d absph = _mm256_andnot_pd(_mm256_set1_pd(-0.0), phase);
      if (_mm256_movemask_pd(_mm256_cmp_pd(absph, maxph, _CMP_GT_OQ)) != 0) {
        alignas(32) double ph[4], ss[4], cc[4];
        _mm256_store_pd(ph, phase);
        for (int l = 0; l < 4; ++l) {
          ss[l] = std::sin(ph[l]);
          cc[l] = std::cos(ph[l]);
        }
        s = _mm256_load_pd(ss);
        c = _mm256_load_pd(cc);
      } else {
        sincos4(phase, s, c);
      }
      __m256d re = _mm256_loadu_pd(acc_re.data() + p);
      __m256d im = _mm256_loadu_pd(acc_im.data() + p);
      re = _mm256_fmadd_pd(cr, c, re);
      re = _mm256_fnmadd_pd(ci, s, re);
      im = _mm256_fmadd_pd(cr, s, im);
      im = _mm256_fmadd_pd(ci, c, im);
      _mm256_storeu_pd(acc_re.data() + p, re);
      _mm256_storeu_pd(acc_im.data() + p, im);
    }
    for (std::size_t p = nv; p < npts; ++p) {
      double phase = 0;
      for (int i = 0; i < d; ++i) phase += wk[i] * soa[static_cast<std::size_t>(i) * npts + p];
      const double s = std::sin(phase), c = std::cos(phase);
      acc_re[p] += plan.cre[k] * c - plan.cim[k] * s;
      acc_im[p] += plan.cre[k] * s + plan.cim[k] * c;
    }
  }
  for (std::size_t p = 0; p < npts; ++p) out[p] = Cplx(acc_re[p], acc_im[p]);
}

Cplx weighted_sum_avx2(const Cplx* v, const double* wts, std::size_t n) {
  const double* raw = reinterpret_cast<const double*>(v);
  __m256d acc = _mm256_setzero_pd();  // [re0 im0 re1 im1] pattern
  const std::size_t nv = n / 2 * 2;
  for (std::size_t k = 0; k < nv; k += 2) {
    const __m256d vals = _mm256_loadu_pd(raw + 2 * k);
    const __m128d wlo = _mm_loaddup_pd(wts + k);
    const __m128d whi = _mm_loaddup_pd(wts + k + 1);
    const __m256d ww = _mm256_set_m128d(whi, wlo);
    acc = _mm256_fmadd_pd(vals, ww, acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(lo);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  for (std::size_t k = nv; k < n; ++k) {
    re += v[k].real() * wts[k];
    im += v[k].imag() * wts[k];
  }
  return {re, im};
}

double sum_abs2_avx2(const Cplx* v, std::size_t n) {
  const double* raw = reinterpret_cast<const double*>(v);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t nd = 2 * n;
  const std::size_t nv = nd / 4 * 4;
  for (std::size_t k = 0; k < nv; k += 4) {
    const __m256d x = _mm256_loadu_pd(raw + k);
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  double s = hsum(acc);
  for (std::size_t k = nv; k < nd; ++k) s += raw[k] * raw[k];
  return s;
}

double max_abs_avx2(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d signbit = _mm256_set1_pd(-0.0);
  const std::size_t nv = n / 4 * 4;
  for (std::size_t k = 0; k < nv; k += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(signbit, _mm256_loadu_pd(v + k)));
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_max_pd(lo, hi);
  double m = std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
  for (std::size_t k = nv; k < n; ++k) m = std::max(m, std::fabs(v[k]));
  return m;
}

}  // namespace apcalc::kern::detail

#endif  // APCALC_HAVE_AVX2
