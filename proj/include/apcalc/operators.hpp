// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Applying symbols and amplitudes to trigonometric polynomials. On trig
// polynomials the Kohn-Nirenberg action is the finite sum
//   a(x,D) f = sum_eta f_eta a(., eta) e_eta,
// exact whenever the coefficient arithmetic is; the oscillatory-integral
// definition is never discretized. The exact differential-operator route
// lives in diffop.hpp; this module adds the general symbol-expression route
// whose outputs are APFunction values (frequency list with x-dependent
// coefficient functions).

#ifndef APCALC_OPERATORS_HPP
#define APCALC_OPERATORS_HPP

#include <optional>
#include <vector>

#include "apcalc/bohr.hpp"
#include "apcalc/diffop.hpp"
#include "apcalc/symexpr.hpp"

namespace apcalc::ops {

struct APTerm {
  Frequency freq;
  symb::SymbolExpr coeff;  // x-only expression
};

class APFunction {
 public:
  explicit APFunction(int dim = 1, std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial())
      : dim_(dim), basis_(std::move(basis)) {}

  int dim() const { return dim_; }
  const std::shared_ptr<const FreqBasis>& basis() const { return basis_; }
  const std::vector<APTerm>& terms() const { return terms_; }

  void add_term(const Frequency& freq, const symb::SymbolExpr& coeff);

  Cplx eval(std::span<const double> x) const;

  // Trig polynomial with identical pointwise values, when every coefficient
  // collapses.
  std::optional<TrigPolyD> collapse() const;

  friend APFunction operator+(const APFunction& a, const APFunction& b);
  APFunction scaled(Cplx c) const;

 private:
  int dim_;
  std::shared_ptr<const FreqBasis> basis_;
  std::vector<APTerm> terms_;  // sorted by frequency
};

// a(x,D) f for a symbol expression. Frequencies eta with <eta> below
// validity_A are refused unless a low-frequency fallback symbol is given.
APFunction apply_symbol(const symb::SymbolExpr& a, const TrigPolyD& f, double validity_A = 0,
                        const symb::SymbolExpr* low_freq_fallback = nullptr);

// Amplitude action via the exact frequency-shift form; requires the y
// dependence to enter through trig-poly factors (finite y-spectrum).
APFunction apply_amplitude(const symb::SymbolExpr& a, const TrigPolyD& f, double validity_A = 0);

// Oracle composition: a(x,D) applied to the collapse of b(x,D) f.
APFunction compose_direct(const symb::SymbolExpr& a, const symb::SymbolExpr& b,
                          const TrigPolyD& f, double validity_A = 0);

// Differential operator applied to an APFunction:
// p(x,D)(c e_eta) = sum_beta p_beta(x) sum_{kappa<=beta} binom(beta,kappa)
//                   eta^{beta-kappa} (2 pi i)^{-|kappa|} d_x^kappa c  e_eta.
APFunction apply_diffop(const DiffOpD& p, const APFunction& g);

APFunction from_trigpoly(const TrigPolyD& f);

struct ResidualNorms {
  bool collapsed = false;
  std::vector<double> values;  // one per requested norm
  std::vector<NormParams> norms;
  size_t extracted_coeffs = 0;  // sampled route only
};

// Norms of collapse(g) - f; when g does not collapse, Bohr coefficients of
// g - f are extracted numerically on the candidate frequency set.
ResidualNorms residual_norms(const APFunction& g, const TrigPolyD& f,
                             const std::vector<NormParams>& norms);
ResidualNorms residual_norms_sampled(const APFunction& g, const TrigPolyD& f,
                                     const std::vector<NormParams>& norms,
                                     const std::vector<Frequency>& candidates,
                                     const bohr::MeanSchedule& schedule);

}  // namespace apcalc::ops

#endif
