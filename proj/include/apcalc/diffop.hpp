// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Differential-operator symbols: polynomials in xi whose coefficients are
// trigonometric polynomials in x (symbols) or in (x,y) (amplitudes). This is
// the subalgebra on which the whole calculus is exact: products, derivatives,
// transpositions and applications to trig polynomials terminate and can be
// carried out in exact arithmetic. It is the oracle side of every
// asymptotic-expansion check.
//
// Amplitude coefficients are trig polynomials of dimension 2d whose first d
// axes are x and last d axes are y.

#ifndef APCALC_DIFFOP_HPP
#define APCALC_DIFFOP_HPP

#include <map>
#include <span>

#include "apcalc/symexpr.hpp"
#include "apcalc/trigpoly.hpp"

namespace apcalc {

// r * (2 pi i)^k in the coefficient field of C.
template <class C>
C scalar_rat_2pii(const Rational& r, int k);

template <>
inline Cplx scalar_rat_2pii<Cplx>(const Rational& r, int k) {
  Cplx f(1, 0);
  const Cplx base(0, 2 * std::numbers::pi);
  for (int i = 0; i < std::abs(k); ++i) f *= base;
  if (k < 0) f = Cplx(1, 0) / f;
  return to_double(r) * f;
}

template <>
inline ExactComplex scalar_rat_2pii<ExactComplex>(const Rational& r, int k) {
  return ExactComplex(ExactScalar(r)) * two_pi_i_pow(k);
}

// eta^beta in the coefficient field; exact mode requires rational frequencies.
template <class C>
C freq_power(const Frequency& eta, const MultiIndex& beta, const FreqBasis& basis) {
  if constexpr (coeff::is_exact_v<C>) {
    Rational p = 1;
    for (size_t a = 0; a < beta.size(); ++a)
      for (int k = 0; k < beta[a]; ++k) p *= eta.rational_value(static_cast<int>(a));
    return ExactComplex(ExactScalar(p));
  } else {
    double p = 1;
    for (size_t a = 0; a < beta.size(); ++a)
      for (int k = 0; k < beta[a]; ++k) p *= eta.value(static_cast<int>(a), basis);
    return Cplx(p, 0);
  }
}

template <class TP>
class DiffOpSymbol {
 public:
  using Poly = TP;
  using Coeff = typename TP::Coeff;

  explicit DiffOpSymbol(int dim = 1,
                        std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial())
      : dim_(dim), basis_(std::move(basis)) {}

  static DiffOpSymbol from_term(MultiIndex beta, TP c) {
    DiffOpSymbol s(static_cast<int>(beta.size()), c.basis());
    s.set_coeff(std::move(beta), std::move(c));
    return s;
  }
  static DiffOpSymbol multiplier(MultiIndex beta,
                                 std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial()) {
    const int d = static_cast<int>(beta.size());
    return from_term(std::move(beta), TP::constant(d, Coeff(1), std::move(basis)));
  }

  int dim() const { return dim_; }
  const std::shared_ptr<const FreqBasis>& basis() const { return basis_; }
  const std::map<MultiIndex, TP>& coeffs() const { return coef_; }
  bool is_zero() const { return coef_.empty(); }

  int xi_degree() const {
    int deg = -1;
    for (const auto& [b, c] : coef_) deg = std::max(deg, mi_order(b));
    return deg;
  }

  void set_coeff(MultiIndex beta, TP c) {
    if (static_cast<int>(beta.size()) != dim_)
      throw DimensionError("DiffOpSymbol: bad xi multi-index");
    if (c.is_zero())
      coef_.erase(beta);
    else
      coef_[std::move(beta)] = std::move(c);
  }

  void add_coeff(const MultiIndex& beta, const TP& c) {
    auto it = coef_.find(beta);
    if (it == coef_.end()) {
      if (!c.is_zero()) coef_.emplace(beta, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coef_.erase(it);
    }
  }

  friend DiffOpSymbol operator+(const DiffOpSymbol& a, const DiffOpSymbol& b) {
    DiffOpSymbol r = a;
    for (const auto& [be, c] : b.coef_) r.add_coeff(be, c);
    return r;
  }

  friend DiffOpSymbol operator*(const DiffOpSymbol& a, const DiffOpSymbol& b) {
    DiffOpSymbol r(a.dim_, a.basis_);
    for (const auto& [b1, c1] : a.coef_)
      for (const auto& [b2, c2] : b.coef_) r.add_coeff(mi_add(b1, b2), c1 * c2);
    return r;
  }

  DiffOpSymbol scaled(const Coeff& s) const {
    DiffOpSymbol r(dim_, basis_);
    for (const auto& [be, c] : coef_) r.set_coeff(be, c.scaled(s));
    return r;
  }

  DiffOpSymbol dxi(int axis) const {
    DiffOpSymbol r(dim_, basis_);
    for (const auto& [be, c] : coef_) {
      if (be[axis] == 0) continue;
      MultiIndex nb = be;
      nb[axis] -= 1;
      r.add_coeff(nb, c.scaled(Coeff(be[axis])));
    }
    return r;
  }

  DiffOpSymbol dx(int axis) const {
    DiffOpSymbol r(dim_, basis_);
    MultiIndex e(dim_, 0);
    e[axis] = 1;
    for (const auto& [be, c] : coef_) r.add_coeff(be, c.derivative(e));
    return r;
  }

  DiffOpSymbol dxi_multi(const MultiIndex& alpha) const {
    DiffOpSymbol r = *this;
    for (int a = 0; a < dim_; ++a)
      for (int k = 0; k < alpha[a]; ++k) r = r.dxi(a);
    return r;
  }
  DiffOpSymbol dx_multi(const MultiIndex& alpha) const {
    DiffOpSymbol r = *this;
    for (int a = 0; a < dim_; ++a)
      for (int k = 0; k < alpha[a]; ++k) r = r.dx(a);
    return r;
  }

  DiffOpSymbol xi_negate() const {
    DiffOpSymbol r(dim_, basis_);
    for (const auto& [be, c] : coef_)
      r.set_coeff(be, mi_order(be) % 2 == 0 ? c : c.scaled(Coeff(-1)));
    return r;
  }

  // Kohn-Nirenberg action on a trig polynomial, exact:
  // a(x,D) f = sum_eta f_eta ( sum_beta eta^beta c_beta(x) ) e_eta.
  TP apply(const TP& f) const {
    if (f.dim() != dim_) throw DimensionError("DiffOpSymbol::apply: dimension mismatch");
    TP out(dim_, f.basis());
    for (const auto& [eta, feta] : f.terms()) {
      TP factor(dim_, f.basis());
      for (const auto& [be, c] : coef_)
        factor = factor + c.scaled(freq_power<Coeff>(eta, be, *f.basis()));
      if (factor.is_zero()) continue;
      out = out + factor * TP::wave(eta, feta, f.basis());
    }
    return out;
  }

  Cplx eval(std::span<const double> x, std::span<const double> xi) const {
    Cplx s(0, 0);
    for (const auto& [be, c] : coef_) {
      double m = 1;
      for (int a = 0; a < dim_; ++a)
        for (int k = 0; k < be[a]; ++k) m *= xi[a];
      s += m * c.eval(x);
    }
    return s;
  }

  symb::SymbolExpr to_symexpr() const {
    symb::SymbolExpr acc = symb::SymbolExpr::zero(dim_);
    for (const auto& [be, c] : coef_) {
      TrigPolyD cf = [&] {
        if constexpr (coeff::is_exact_v<Coeff>)
          return c.to_float();
        else
          return c;
      }();
      acc = acc + symb::SymbolExpr::xpoly(cf) * symb::SymbolExpr::xi_mono(be);
    }
    return acc;
  }

 private:
  int dim_;
  std::shared_ptr<const FreqBasis> basis_;
  std::map<MultiIndex, TP> coef_;
};

// Frequency block helpers for amplitude coefficients (dim 2d: x block then y).
inline Frequency freq_concat(const Frequency& fx, const Frequency& fy) {
  Frequency out(fx.dim() + fy.dim(), fx.basis_size());
  for (int a = 0; a < fx.dim(); ++a)
    for (int b = 0; b < fx.basis_size(); ++b) out.coord(a, b) = fx.coord(a, b);
  for (int a = 0; a < fy.dim(); ++a)
    for (int b = 0; b < fy.basis_size(); ++b) out.coord(fx.dim() + a, b) = fy.coord(a, b);
  return out;
}

inline std::pair<Frequency, Frequency> freq_split(const Frequency& f, int d) {
  Frequency fx(d, f.basis_size()), fy(f.dim() - d, f.basis_size());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < f.basis_size(); ++b) fx.coord(a, b) = f.coord(a, b);
  for (int a = d; a < f.dim(); ++a)
    for (int b = 0; b < f.basis_size(); ++b) fy.coord(a - d, b) = f.coord(a, b);
  return {fx, fy};
}

template <class TP>
class DiffOpAmplitude {
 public:
  using Poly = TP;
  using Coeff = typename TP::Coeff;
  using Symbol = DiffOpSymbol<TP>;

  explicit DiffOpAmplitude(int dim = 1,
                           std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial())
      : dim_(dim), basis_(std::move(basis)) {}

  static DiffOpAmplitude from_term(MultiIndex beta, TP coeff_2d) {
    if (coeff_2d.dim() != 2 * static_cast<int>(beta.size()))
      throw DimensionError("DiffOpAmplitude: coefficient must have dimension 2d");
    DiffOpAmplitude a(static_cast<int>(beta.size()), coeff_2d.basis());
    a.coef_[std::move(beta)] = std::move(coeff_2d);
    return a;
  }

  // Lift a symbol to a y-independent amplitude.
  static DiffOpAmplitude from_symbol(const Symbol& s) {
    DiffOpAmplitude a(s.dim(), s.basis());
    for (const auto& [be, c] : s.coeffs()) {
      TP c2(2 * s.dim(), c.basis());
      for (const auto& [eta, v] : c.terms())
        c2.add_term(freq_concat(eta, Frequency(s.dim(), eta.basis_size())), v);
      a.coef_[be] = std::move(c2);
    }
    return a;
  }

  int dim() const { return dim_; }
  const std::map<MultiIndex, TP>& coeffs() const { return coef_; }
  bool is_zero() const { return coef_.empty(); }

  void add_coeff(const MultiIndex& beta, const TP& c) {
    auto it = coef_.find(beta);
    if (it == coef_.end()) {
      if (!c.is_zero()) coef_.emplace(beta, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coef_.erase(it);
    }
  }

  friend DiffOpAmplitude operator+(const DiffOpAmplitude& a, const DiffOpAmplitude& b) {
    DiffOpAmplitude r = a;
    for (const auto& [be, c] : b.coef_) r.add_coeff(be, c);
    return r;
  }

  DiffOpAmplitude scaled(const Coeff& s) const {
    DiffOpAmplitude r(dim_, basis_);
    for (const auto& [be, c] : coef_) {
      TP sc = c.scaled(s);
      if (!sc.is_zero()) r.coef_[be] = std::move(sc);
    }
    return r;
  }

  DiffOpAmplitude dxi(int axis) const {
    DiffOpAmplitude r(dim_, basis_);
    for (const auto& [be, c] : coef_) {
      if (be[axis] == 0) continue;
      MultiIndex nb = be;
      nb[axis] -= 1;
      r.add_coeff(nb, c.scaled(Coeff(be[axis])));
    }
    return r;
  }

  DiffOpAmplitude dy(int axis) const {
    DiffOpAmplitude r(dim_, basis_);
    MultiIndex e(2 * dim_, 0);
    e[dim_ + axis] = 1;
    for (const auto& [be, c] : coef_) r.add_coeff(be, c.derivative(e));
    return r;
  }

  DiffOpAmplitude dxi_multi(const MultiIndex& alpha) const {
    DiffOpAmplitude r = *this;
    for (int a = 0; a < dim_; ++a)
      for (int k = 0; k < alpha[a]; ++k) r = r.dxi(a);
    return r;
  }
  DiffOpAmplitude dy_multi(const MultiIndex& alpha) const {
    DiffOpAmplitude r = *this;
    for (int a = 0; a < dim_; ++a)
      for (int k = 0; k < alpha[a]; ++k) r = r.dy(a);
    return r;
  }

  // y := x, folding each (mu_x | mu_y) frequency into mu_x + mu_y.
  Symbol subst_y_to_x() const {
    Symbol s(dim_, basis_);
    for (const auto& [be, c] : coef_) {
      TP folded(dim_, basis_);
      for (const auto& [f, v] : c.terms()) {
        auto [fx, fy] = freq_split(f, dim_);
        folded.add_term(fx + fy, v);
      }
      s.add_coeff(be, folded);
    }
    return s;
  }

  // Formal-adjoint amplitude: conj(a(y, x, xi)).
  DiffOpAmplitude adjoint() const {
    DiffOpAmplitude r(dim_, basis_);
    for (const auto& [be, c] : coef_) {
      TP sw(2 * dim_, c.basis());
      for (const auto& [f, v] : c.terms()) {
        auto [fx, fy] = freq_split(f, dim_);
        sw.add_term(freq_concat(fy, fx), v);
      }
      r.coef_[be] = sw.conj();
    }
    return r;
  }

  // Exact action: a(x,D) f = sum_eta sum_{(mu_x|mu_y)} f_eta g_{beta,(mu_x|mu_y)}
  //                           (eta + mu_y)^beta e_{mu_x + mu_y + eta}.
  TP apply(const TP& f) const {
    if (f.dim() != dim_) throw DimensionError("DiffOpAmplitude::apply: dimension mismatch");
    TP out(dim_, f.basis());
    for (const auto& [be, c] : coef_) {
      for (const auto& [g, v] : c.terms()) {
        auto [mux, muy] = freq_split(g, dim_);
        for (const auto& [eta, feta] : f.terms()) {
          const Frequency shifted = eta + muy;
          Coeff val = v * feta * freq_power<Coeff>(shifted, be, *f.basis());
          out.add_term(mux + shifted, std::move(val));
        }
      }
    }
    return out;
  }

  Cplx eval(std::span<const double> x, std::span<const double> y,
            std::span<const double> xi) const {
    std::vector<double> xy(x.begin(), x.end());
    xy.insert(xy.end(), y.begin(), y.end());
    Cplx s(0, 0);
    for (const auto& [be, c] : coef_) {
      double m = 1;
      for (int a = 0; a < dim_; ++a)
        for (int k = 0; k < be[a]; ++k) m *= xi[a];
      s += m * c.eval(xy);
    }
    return s;
  }

 private:
  int dim_;
  std::shared_ptr<const FreqBasis> basis_;
  std::map<MultiIndex, TP> coef_;
};

using DiffOpD = DiffOpSymbol<TrigPolyD>;
using DiffOpX = DiffOpSymbol<TrigPolyX>;
using DiffAmpD = DiffOpAmplitude<TrigPolyD>;
using DiffAmpX = DiffOpAmplitude<TrigPolyX>;

}  // namespace apcalc

#endif
