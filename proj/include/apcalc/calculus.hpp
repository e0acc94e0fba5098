// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Asymptotic symbol calculus: formal sums, the symbol product
//   c_j = sum_{|alpha|+k+l=j} (alpha!)^{-1} (2 pi i)^{-|alpha|}
//           d_xi^alpha a_k  d_x^alpha b_l,
// transpose and amplitude-to-symbol reductions, cutoff summation, and the
// parametrix recursion. The combinatorial formulas are written once as
// templates over an algebra concept and instantiated both for exact
// differential-operator symbols (the oracle path) and for general symbol
// expressions (the asymptotic path), so the two routes cannot drift apart.

#ifndef APCALC_CALCULUS_HPP
#define APCALC_CALCULUS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apcalc/diffop.hpp"
#include "apcalc/hypoell.hpp"
#include "apcalc/symexpr.hpp"

namespace apcalc::cal {

// ---- algebra glue -----------------------------------------------------------

template <class S>
struct SymTraits;

template <>
struct SymTraits<symb::SymbolExpr> {
  using S = symb::SymbolExpr;
  static S add(const S& a, const S& b) { return a + b; }
  static S mul(const S& a, const S& b) { return a * b; }
  static S dxi(const S& a, const MultiIndex& al) { return a.dxi_multi(al); }
  static S dx(const S& a, const MultiIndex& al) { return a.dx_multi(al); }
  static S xi_negate(const S& a) { return a.subst_xi_neg(); }
  static S scale(const S& a, const Rational& r, int two_pi_i_pow) {
    return a.scaled(scalar_rat_2pii<Cplx>(r, two_pi_i_pow));
  }
  static S zero_like(const S& proto) { return S::zero(proto.dim()); }
  static bool is_zero(const S& a) { return a.is_zero(); }
};

template <class TP>
struct SymTraits<DiffOpSymbol<TP>> {
  using S = DiffOpSymbol<TP>;
  using C = typename TP::Coeff;
  static S add(const S& a, const S& b) { return a + b; }
  static S mul(const S& a, const S& b) { return a * b; }
  static S dxi(const S& a, const MultiIndex& al) { return a.dxi_multi(al); }
  static S dx(const S& a, const MultiIndex& al) { return a.dx_multi(al); }
  static S xi_negate(const S& a) { return a.xi_negate(); }
  static S scale(const S& a, const Rational& r, int two_pi_i_pow) {
    return a.scaled(scalar_rat_2pii<C>(r, two_pi_i_pow));
  }
  static S zero_like(const S& proto) { return S(proto.dim(), proto.basis()); }
  static bool is_zero(const S& a) { return a.is_zero(); }
};

// ---- shared formulas --------------------------------------------------------

// j-th term of the symbol product (left carries the xi-derivatives).
template <class S>
S composition_term(std::span<const S> left, std::span<const S> right, int j) {
  using T = SymTraits<S>;
  if (left.empty() || right.empty()) throw InputError("composition_term: empty factor");
  const int d = left[0].dim();
  S acc = T::zero_like(left[0]);
  for (int k = 0; k <= j && k < static_cast<int>(left.size()); ++k) {
    for (int l = 0; k + l <= j && l < static_cast<int>(right.size()); ++l) {
      const int na = j - k - l;
      for (const auto& alpha : multiindices_of_order(d, na)) {
        S term = T::mul(T::dxi(left[k], alpha), T::dx(right[l], alpha));
        if (T::is_zero(term)) continue;
        term = T::scale(term, Rational(1, static_cast<long long>(mi_factorial(alpha))), -na);
        acc = T::add(acc, term);
      }
    }
  }
  return acc;
}

template <class S>
S composition_term(const S& a, const S& b, int j) {
  return composition_term(std::span<const S>(&a, 1), std::span<const S>(&b, 1), j);
}

// j-th term of the transpose expansion:
//   b_j = (-2 pi i)^{-j} sum_{|alpha|=j} (alpha!)^{-1} (d_xi^alpha d_x^alpha b)(x,-xi);
// the derivatives fall on b, the substitution xi -> -xi comes last (the
// opposite order flips signs and does not reproduce the transpose of a
// differential operator).
template <class S>
S transpose_term(const S& b, int j) {
  using T = SymTraits<S>;
  const int d = b.dim();
  S acc = T::zero_like(b);
  const long long sign = j % 2 == 0 ? 1 : -1;
  for (const auto& alpha : multiindices_of_order(d, j)) {
    S term = T::xi_negate(T::dx(T::dxi(b, alpha), alpha));
    if (T::is_zero(term)) continue;
    term = T::scale(term, Rational(sign, static_cast<long long>(mi_factorial(alpha))), -j);
    acc = T::add(acc, term);
  }
  return acc;
}

// j-th term of the amplitude-to-symbol reduction:
//   a_j = (2 pi i)^{-j} sum_{|alpha|=j} (alpha!)^{-1} d_y^alpha d_xi^alpha a |_{y=x}.
// Works for any amplitude type providing dy_multi, dxi_multi and
// subst_y_to_x (DiffOpAmplitude and SymbolExpr both do).
template <class A>
auto amplitude_reduce_term(const A& amp, int j) {
  using S = std::decay_t<decltype(amp.subst_y_to_x())>;
  using T = SymTraits<S>;
  const int d = amp.dim();
  std::optional<S> acc;
  for (const auto& alpha : multiindices_of_order(d, j)) {
    S term = amp.dy_multi(alpha).dxi_multi(alpha).subst_y_to_x();
    if (T::is_zero(term)) continue;
    term = T::scale(term, Rational(1, static_cast<long long>(mi_factorial(alpha))), -j);
    acc = acc ? T::add(*acc, term) : term;
  }
  if (acc) return *acc;
  return T::zero_like(amp.subst_y_to_x());
}

// ---- formal sums and cutoffs -------------------------------------------------

struct FormalSum {
  std::vector<symb::SymbolExpr> terms;
  symb::ClassParams params;

  double order_drop() const { return params.rho - params.delta; }
  // Term-j class check at the shifted order m - (rho-delta) j; the fitted
  // constant absorbs the (j!)^{s(rho-delta)} factor of the term bound.
  symb::ClassCheckReport check_term(size_t j, const RaySampler& rays,
                                    int x_points_per_axis = 7) const;
};

struct CutoffFamily {
  double R = 4;
  double s = 1;

  double lo(int j) const { return 2 * R * std::pow(j + 1.0, s); }
  double hi(int j) const { return 3 * R * std::pow(j + 1.0, s); }
  static double smooth_step(double t);  // 0 for t<=0, 1 for t>=1
  double phi(int j, double abs_xi) const {
    return smooth_step((abs_xi - lo(j)) / (R * std::pow(j + 1.0, s)));
  }
};

using SymbolCallable =
    std::function<Cplx(std::span<const double>, std::span<const double>)>;

// (x, xi) -> sum_{j <= N_trunc} phi_j(|xi|) a_j(x, xi); terms with vanishing
// cutoff are never evaluated, so quotient terms stay inside their domain.
SymbolCallable sum_formal(const FormalSum& F, const CutoffFamily& cut, int N_trunc);

// ---- equivalence -------------------------------------------------------------

struct EquivalenceReport {
  std::vector<double> C_of_N;  // fitted constant per truncation order, 0 = vanishing
  bool pass = false;
  double front_back_ratio = 1;  // growth of the fitted constants
  size_t points = 0;
};

EquivalenceReport equivalence_check(const FormalSum& A, const FormalSum& B, int N_max,
                                    const RaySampler& rays, int x_points_per_axis = 7);

// ---- parametrix ---------------------------------------------------------------

struct Parametrix {
  std::vector<symb::SymbolExpr> terms;  // b_0 .. b_N
  double validity_radius = 0;
  std::vector<std::string> warnings;

  symb::SymbolExpr truncated_sum() const;  // plain sum of the terms
};

// b_0 = 1/a, b_n = -(1/a) sum_{k<n} sum_{|alpha|=n-k} (alpha!)^{-1}
//                  (2 pi i)^{-|alpha|} d_xi^alpha b_k d_x^alpha a.
// The inner sum is literally composition_term(b_prefix, {a}, n).
Parametrix parametrix(const symb::SymbolExpr& a, const hypo::HypoellParams& hp, int N,
                      const RaySampler* check_rays = nullptr);

// sigma(B(x,D) a(x,D)) evaluated exactly through the frequency-shift formula
// sum_mu g_mu(xi) e^{2 pi i mu.x} B(x, xi + mu), where a = sum_mu g_mu e_mu.
SymbolCallable composed_symbol_callable(std::vector<symb::SymbolExpr> B_terms,
                                        const symb::SymbolExpr& a);

struct ResidualDecay {
  std::vector<double> radii;
  std::vector<double> max_abs;   // sup over x and directions at each radius
  double slope = 0;              // log-log fit
  double r2 = 0;
};

ResidualDecay parametrix_residual_decay(const Parametrix& b, const symb::SymbolExpr& a,
                                        double r_min, double r_max, int n_radii,
                                        int x_points_per_axis = 17);

}  // namespace apcalc::cal

#endif
