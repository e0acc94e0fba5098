// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Polynomial strength analysis and hypoellipticity diagnostics. All checks
// are sample-based over deterministic ray families; they are diagnostics on
// samples, not proofs.

#ifndef APCALC_HYPOELL_HPP
#define APCALC_HYPOELL_HPP

#include <json.hpp>

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "apcalc/multiindex.hpp"
#include "apcalc/sampling.hpp"
#include "apcalc/symexpr.hpp"
#include "apcalc/trigpoly.hpp"

namespace apcalc::hypo {

using apcalc::Cplx;

// Multivariate polynomial in xi with complex coefficients.
class PolySymbol {
 public:
  explicit PolySymbol(int dim = 1) : dim_(dim) {}

  static PolySymbol monomial(MultiIndex alpha, Cplx c) {
    PolySymbol p(static_cast<int>(alpha.size()));
    p.set(std::move(alpha), c);
    return p;
  }
  static PolySymbol constant(int dim, Cplx c) { return monomial(MultiIndex(dim, 0), c); }

  int dim() const { return dim_; }
  int degree() const;
  bool is_zero() const { return mono_.empty(); }
  const std::map<MultiIndex, Cplx>& monomials() const { return mono_; }

  void set(MultiIndex alpha, Cplx c);
  void add_monomial(const MultiIndex& alpha, Cplx c);

  Cplx eval(std::span<const double> xi) const;
  PolySymbol derivative(const MultiIndex& beta) const;  // plain d/dxi, no 2 pi i
  PolySymbol conj_coeffs() const;

  friend PolySymbol operator+(const PolySymbol& a, const PolySymbol& b);
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);
  PolySymbol scaled(Cplx s) const;

  nlohmann::json to_json() const;
  static PolySymbol from_json(const nlohmann::json& j);

 private:
  int dim_;
  std::map<MultiIndex, Cplx> mono_;
};

// P~^2 = sum_alpha |d^alpha P|^2, exact real coefficients.
PolySymbol strength_sq(const PolySymbol& P);

struct HypoellParams {
  double m = 0;
  double m0 = 0;
  double rho = 1;
  double s = 1;
  double A = 0;
  double B = 0;
  double C = 1;
  double C1 = 1;

  void validate() const {
    if (!(m0 <= m)) throw InputError("HypoellParams: m0 <= m");
    if (!(rho > 0 && rho <= 1)) throw InputError("HypoellParams: rho in (0,1]");
    if (!(s >= 1 && s * rho >= 1)) throw InputError("HypoellParams: s >= max(1, 1/rho)");
    if (!(C > 0 && C1 > 0)) throw InputError("HypoellParams: C, C1 > 0");
  }
};

struct SlopeFit {
  MultiIndex beta;
  double slope = 0;
  double r2 = 0;
  size_t n_points = 0;
};

struct HypoellReport {
  bool pass = false;
  double rho_hat = 0;
  double A_used = 0;
  double C_hat = 0;   // fitted constant of the ratio bound
  double C1_hat = 0;  // fitted lower-bound constant |a| >= C1 <xi>^{m0}
  std::vector<SlopeFit> fits;
  std::vector<std::vector<double>> excluded_points;  // samples with |P| = 0 beyond A
  std::string verdict;
  std::vector<double> witness;  // a point responsible for failure, when any
};

struct WeakerResult {
  bool pass = false;
  double C_hat = 0;
  double trend_slope = 0;
};

WeakerResult weaker_check(const PolySymbol& Q, const PolySymbol& P, const RaySampler& rays);

HypoellReport s_hypoelliptic_fit(const PolySymbol& P, const RaySampler& rays);

struct ConstantStrengthReport {
  bool pass = false;
  double eps_hat = 0;        // min |p(x,xi)| / |P0(xi)|
  double trend_slope = 0;    // log-ratio trend over the top radii
  bool leading_ok = false;   // sum_{|alpha|=m} |a_alpha(x)|^2 > 0 at all sampled x
  double leading_min = 0;
  std::vector<double> witness_x;
};

ConstantStrengthReport constant_strength_check(const std::vector<TrigPolyD>& c,
                                               const std::vector<PolySymbol>& P,
                                               const RaySampler& rays, int x_points_per_axis = 17);

// Formally s-hypoelliptic check for a general symbol expression:
// |a| >= C1 <xi>^{m0} for |xi| >= A, and the derivative-over-symbol ratios
// with weights (alpha!)^{s rho} beta! <xi>^{-rho |beta|} for
// |xi| >= max(A, B |beta|^s). alpha are x-derivatives, beta xi-derivatives.
HypoellReport aphs_check(const symb::SymbolExpr& a, const HypoellParams& hp, int max_order,
                         const RaySampler& rays, int x_points_per_axis = 9);

}  // namespace apcalc::hypo

#endif
