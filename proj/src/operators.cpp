// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/operators.hpp"

#include <algorithm>
#include <cmath>

namespace apcalc::ops {

using symb::SymbolExpr;

void APFunction::add_term(const Frequency& freq, const SymbolExpr& coeff) {
  if (coeff.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), freq,
                             [](const APTerm& t, const Frequency& f) { return t.freq < f; });
  if (it != terms_.end() && it->freq == freq)
    it->coeff = it->coeff + coeff;
  else
    terms_.insert(it, APTerm{freq, coeff});
}

Cplx APFunction::eval(std::span<const double> x) const {
  Cplx acc(0, 0);
  for (const auto& t : terms_) {
    double phase = 0;
    for (int a = 0; a < dim_; ++a)
      phase += 2 * std::numbers::pi * t.freq.value(a, *basis_) * x[a];
    acc += t.coeff.eval(x, {}) * Cplx(std::cos(phase), std::sin(phase));
  }
  return acc;
}

std::optional<TrigPolyD> APFunction::collapse() const {
  TrigPolyD out(dim_, basis_);
  for (const auto& t : terms_) {
    auto p = t.coeff.to_trigpoly();
    if (!p) return std::nullopt;
    out = out + *p * TrigPolyD::wave(t.freq, Cplx(1, 0), basis_);
  }
  return out;
}

APFunction operator+(const APFunction& a, const APFunction& b) {
  if (a.dim_ != b.dim_) throw DimensionError("APFunction: dimension mismatch");
  APFunction r = a;
  for (const auto& t : b.terms_) r.add_term(t.freq, t.coeff);
  return r;
}

APFunction APFunction::scaled(Cplx c) const {
  APFunction r(dim_, basis_);
  for (const auto& t : terms_) r.add_term(t.freq, t.coeff.scaled(c));
  return r;
}

APFunction from_trigpoly(const TrigPolyD& f) {
  APFunction g(f.dim(), f.basis());
  for (const auto& [xi, c] : f.terms())
    g.add_term(xi, SymbolExpr::constant(f.dim(), c));
  return g;
}

namespace {

double bracket_of(const Frequency& eta, const FreqBasis& basis) {
  double n2 = 1;
  for (int a = 0; a < eta.dim(); ++a) {
    const double v = eta.value(a, basis);
    n2 += v * v;
  }
  return std::sqrt(n2);
}

}  // namespace

APFunction apply_symbol(const SymbolExpr& a, const TrigPolyD& f, double validity_A,
                        const SymbolExpr* low_freq_fallback) {
  if (a.has_y()) throw InputError("apply_symbol: amplitude passed; use apply_amplitude");
  if (a.dim() != f.dim()) throw DimensionError("apply_symbol: dimension mismatch");
  APFunction out(f.dim(), f.basis());
  for (const auto& [eta, feta] : f.terms()) {
    const SymbolExpr* sym = &a;
    if (bracket_of(eta, *f.basis()) < validity_A) {
      if (low_freq_fallback == nullptr)
        throw EvalDomainError("apply_symbol: frequency below the validity radius",
                              eta.values(*f.basis()));
      sym = low_freq_fallback;
    }
    const auto vals = eta.values(*f.basis());
    out.add_term(eta, sym->subst_xi(vals).scaled(feta));
  }
  return out;
}

APFunction apply_amplitude(const SymbolExpr& a, const TrigPolyD& f, double validity_A) {
  if (a.dim() != f.dim()) throw DimensionError("apply_amplitude: dimension mismatch");
  if (!a.has_y()) return apply_symbol(a, f, validity_A);
  APFunction out(f.dim(), f.basis());
  for (const auto& [mu, g] : a.y_modulated_decomposition()) {
    // g depends on (x, xi); the action shifts the covariable by mu.
    for (const auto& [eta, feta] : f.terms()) {
      const Frequency shifted = eta + mu;
      if (bracket_of(shifted, *f.basis()) < validity_A)
        throw EvalDomainError("apply_amplitude: shifted frequency below the validity radius",
                              shifted.values(*f.basis()));
      const auto vals = shifted.values(*f.basis());
      out.add_term(shifted, g.subst_xi(vals).scaled(feta));
    }
  }
  return out;
}

APFunction compose_direct(const SymbolExpr& a, const SymbolExpr& b, const TrigPolyD& f,
                          double validity_A) {
  auto bf = apply_symbol(b, f, validity_A);
  auto collapsed = bf.collapse();
  if (!collapsed)
    throw InputError(
        "compose_direct: inner application does not collapse to a trig polynomial; "
        "compare the operators by sampling instead");
  return apply_symbol(a, *collapsed, validity_A);
}

APFunction apply_diffop(const DiffOpD& p, const APFunction& g) {
  if (p.dim() != g.dim()) throw DimensionError("apply_diffop: dimension mismatch");
  APFunction out(g.dim(), g.basis());
  const int d = g.dim();
  for (const auto& t : g.terms()) {
    SymbolExpr acc = SymbolExpr::zero(d);
    for (const auto& [beta, pb] : p.coeffs()) {
      SymbolExpr inner = SymbolExpr::zero(d);
      for (const auto& kappa : multiindices_below(beta)) {
        double eta_pow = 1;
        const MultiIndex rest = mi_sub(beta, kappa);
        for (int a = 0; a < d; ++a)
          for (int k = 0; k < rest[a]; ++k) eta_pow *= t.freq.value(a, *g.basis());
        const Cplx scale = static_cast<double>(mi_binomial(beta, kappa)) * eta_pow *
                           scalar_rat_2pii<Cplx>(Rational(1), -mi_order(kappa));
        if (scale == Cplx(0, 0)) continue;
        SymbolExpr dc = t.coeff.dx_multi(kappa);
        if (dc.is_zero()) continue;
        inner = inner + dc.scaled(scale);
      }
      if (inner.is_zero()) continue;
      acc = acc + SymbolExpr::xpoly(pb) * inner;
    }
    out.add_term(t.freq, acc);
  }
  return out;
}

ResidualNorms residual_norms(const APFunction& g, const TrigPolyD& f,
                             const std::vector<NormParams>& norms) {
  auto collapsed = g.collapse();
  if (!collapsed)
    throw InputError(
        "residual_norms: output does not collapse; use residual_norms_sampled with a candidate "
        "frequency set");
  ResidualNorms out;
  out.collapsed = true;
  out.norms = norms;
  TrigPolyD diff = *collapsed - f;
  for (const auto& np : norms) out.values.push_back(diff.norm(np));
  return out;
}

ResidualNorms residual_norms_sampled(const APFunction& g, const TrigPolyD& f,
                                     const std::vector<NormParams>& norms,
                                     const std::vector<Frequency>& candidates,
                                     const bohr::MeanSchedule& schedule) {
  ResidualNorms out;
  out.collapsed = false;
  out.norms = norms;
  const auto& basis = *f.basis();
  auto residual = [&](std::span<const double> x) { return g.eval(x) - f.eval(x); };

  std::vector<std::pair<double, double>> data;  // (|freq|, |coeff|)
  for (const auto& nu : candidates) {
    const auto vals = nu.values(basis);
    auto est = bohr::numerical_bohr_coeff(residual, vals, schedule);
    double abs_nu = 0;
    for (double v : vals) abs_nu += v * v;
    data.emplace_back(std::sqrt(abs_nu), std::abs(est.estimate));
  }
  out.extracted_coeffs = data.size();

  for (const auto& np : norms) {
    np.validate();
    if (std::isinf(np.p)) {
      double m = 0;
      for (const auto& [r, mag] : data) m = std::max(m, np.weight_at(r) * mag);
      out.values.push_back(m);
    } else {
      double s = 0;
      for (const auto& [r, mag] : data) s += std::pow(np.weight_at(r) * mag, np.p);
      out.values.push_back(std::pow(s, 1.0 / np.p));
    }
  }
  return out;
}

}  // namespace apcalc::ops
