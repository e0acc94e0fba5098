// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Trigonometric polynomials f(x) = sum_xi a_xi e^{2 pi i xi.x} over exact
// frequency vectors. Frequencies are rational coordinate vectors over a
// declared real basis (default {1}), so frequency matching in products and
// convolutions is exact even for incommensurable frequency sets.
//
// The coefficient type is a template parameter: std::complex<double> for
// float mode, ExactComplex (Q(pi) + i) for the exact oracle mode.

#ifndef APCALC_TRIGPOLY_HPP
#define APCALC_TRIGPOLY_HPP

#include <cmath>
#include <complex>
#include <compare>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apcalc/errors.hpp"
#include "apcalc/exact.hpp"
#include "apcalc/kernels.hpp"
#include "apcalc/multiindex.hpp"
#include "apcalc/rational.hpp"

namespace apcalc {

class FreqBasis {
 public:
  FreqBasis() : names_{"1"}, values_{1.0} {}
  explicit FreqBasis(const std::vector<std::string>& names) {
    if (names.empty() || names[0] != "1")
      throw InputError("FreqBasis: first basis element must be \"1\"");
    names_ = names;
    values_.reserve(names.size());
    for (const auto& n : names) values_.push_back(parse_name(n));
  }

  static std::shared_ptr<const FreqBasis> trivial() {
    static const auto b = std::make_shared<const FreqBasis>();
    return b;
  }

  size_t size() const { return values_.size(); }
  bool is_trivial() const { return values_.size() == 1; }
  double value(size_t i) const { return values_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const FreqBasis& a, const FreqBasis& b) { return a.names_ == b.names_; }

 private:
  static double parse_name(const std::string& n) {
    if (n == "1") return 1.0;
    if (n == "pi") return std::numbers::pi;
    if (n.rfind("sqrt", 0) == 0) {
      std::string arg = n.substr(4);
      if (!arg.empty() && arg.front() == '(' && arg.back() == ')')
        arg = arg.substr(1, arg.size() - 2);
      return std::sqrt(to_double(parse_rational(arg)));
    }
    return to_double(parse_rational(n));
  }

  std::vector<std::string> names_;
  std::vector<double> values_;
};

// A frequency vector: dim axes, each a rational coordinate vector over the
// workspace basis. Equality and ordering are exact (rational comparisons).
class Frequency {
 public:
  Frequency() : dim_(0), bsize_(1) {}
  Frequency(int dim, int bsize) : dim_(dim), bsize_(bsize), coords_(dim * bsize, Rational(0)) {}

  static Frequency rational_vec(std::vector<Rational> comps) {
    Frequency f(static_cast<int>(comps.size()), 1);
    f.coords_ = std::move(comps);
    return f;
  }

  int dim() const { return dim_; }
  int basis_size() const { return bsize_; }
  const Rational& coord(int axis, int b) const { return coords_[axis * bsize_ + b]; }
  Rational& coord(int axis, int b) { return coords_[axis * bsize_ + b]; }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  // True when every axis value lies in Q (no irrational basis contribution).
  bool is_rational() const {
    for (int a = 0; a < dim_; ++a)
      for (int b = 1; b < bsize_; ++b)
        if (coord(a, b) != 0) return false;
    return true;
  }

  Rational rational_value(int axis) const {
    if (!is_rational()) throw ExactnessError("Frequency: irrational component");
    return coord(axis, 0);
  }

  double value(int axis, const FreqBasis& basis) const {
    double v = 0;
    for (int b = 0; b < bsize_; ++b) v += to_double(coord(axis, b)) * basis.value(b);
    return v;
  }

  std::vector<double> values(const FreqBasis& basis) const {
    std::vector<double> v(dim_);
    for (int a = 0; a < dim_; ++a) v[a] = value(a, basis);
    return v;
  }

  double abs(const FreqBasis& basis) const {
    double s = 0;
    for (int a = 0; a < dim_; ++a) {
      double v = value(a, basis);
      s += v * v;
    }
    return std::sqrt(s);
  }

  Frequency operator+(const Frequency& o) const {
    Frequency r = *this;
    for (size_t i = 0; i < coords_.size(); ++i) r.coords_[i] += o.coords_[i];
    return r;
  }
  Frequency operator-() const {
    Frequency r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }

  friend bool operator==(const Frequency& a, const Frequency& b) {
    return a.dim_ == b.dim_ && a.bsize_ == b.bsize_ && a.coords_ == b.coords_;
  }
  friend bool operator<(const Frequency& a, const Frequency& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    if (a.bsize_ != b.bsize_) return a.bsize_ < b.bsize_;
    for (size_t i = 0; i < a.coords_.size(); ++i) {
      if (a.coords_[i] < b.coords_[i]) return true;
      if (b.coords_[i] < a.coords_[i]) return false;
    }
    return false;
  }

 private:
  int dim_, bsize_;
  std::vector<Rational> coords_;  // axis-major
};

struct NormParams {
  double p = 2;
  enum class Weight { poly, exp } weight = Weight::poly;
  double t = 0;    // poly weight order
  double s = 1;    // Gevrey index
  double eps = 0;  // exponential rate

  static NormParams sobolev(double p, double t) {
    NormParams n;
    n.p = p;
    n.weight = Weight::poly;
    n.t = t;
    n.validate();
    return n;
  }
  static NormParams gevrey_weight(double p, double s, double eps) {
    NormParams n;
    n.p = p;
    n.weight = Weight::exp;
    n.s = s;
    n.eps = eps;
    n.validate();
    return n;
  }
  void validate() const {
    if (!(p >= 1)) throw InputError("NormParams: p must be >= 1");
    if (weight == Weight::exp && !(s >= 1)) throw InputError("NormParams: s must be >= 1");
  }
  double weight_at(double abs_xi) const {
    if (weight == Weight::poly) return std::pow(std::sqrt(1.0 + abs_xi * abs_xi), t);
    return std::exp(-eps * std::pow(abs_xi, 1.0 / s));
  }
};

namespace coeff {

inline bool is_zero(const Cplx& c) { return c == Cplx(0, 0); }
inline bool is_zero(const ExactComplex& c) { return c.is_zero(); }
inline Cplx conj_of(const Cplx& c) { return std::conj(c); }
inline ExactComplex conj_of(const ExactComplex& c) { return c.conj(); }
inline Cplx to_cplx(const Cplx& c) { return c; }
inline Cplx to_cplx(const ExactComplex& c) { return c.to_complex(); }
template <class C>
constexpr bool is_exact_v = std::is_same_v<C, ExactComplex>;

}  // namespace coeff

template <class C>
class TrigPoly {
 public:
  using Coeff = C;
  static constexpr bool exact_mode = coeff::is_exact_v<C>;
  static constexpr double kPruneRel = 1e-14;

  explicit TrigPoly(int dim = 1, std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial())
      : dim_(dim), basis_(std::move(basis)) {
    if (dim_ < 1) throw DimensionError("TrigPoly: dim must be positive");
  }

  static TrigPoly wave(Frequency xi, C coeff, std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial()) {
    TrigPoly f(xi.dim(), std::move(basis));
    f.add_term(std::move(xi), std::move(coeff));
    return f;
  }

  static TrigPoly constant(int dim, C coeff, std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial()) {
    TrigPoly f(dim, basis);
    f.add_term(Frequency(dim, static_cast<int>(f.basis_->size())), std::move(coeff));
    return f;
  }

  int dim() const { return dim_; }
  const std::shared_ptr<const FreqBasis>& basis() const { return basis_; }
  const std::map<Frequency, C>& terms() const { return terms_; }
  size_t nterms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Frequency xi, C coeff) {
    if (xi.dim() != dim_) throw DimensionError("TrigPoly::add_term: dimension mismatch");
    auto it = terms_.find(xi);
    if (it == terms_.end())
      terms_.emplace(std::move(xi), std::move(coeff));
    else
      it->second = it->second + coeff;
    prune();
  }

  friend TrigPoly operator+(const TrigPoly& f, const TrigPoly& g) {
    f.check_compat(g, "add");
    TrigPoly r = f;
    for (const auto& [xi, c] : g.terms_) {
      auto [it, inserted] = r.terms_.emplace(xi, c);
      if (!inserted) it->second = it->second + c;
    }
    r.prune();
    return r;
  }

  friend TrigPoly operator-(const TrigPoly& f, const TrigPoly& g) { return f + (-g); }

  TrigPoly operator-() const {
    TrigPoly r = *this;
    for (auto& [xi, c] : r.terms_) c = -c;
    return r;
  }

  friend TrigPoly operator*(const TrigPoly& f, const TrigPoly& g) {
    f.check_compat(g, "mul");
    TrigPoly r(f.dim_, f.basis_);
    for (const auto& [xi, a] : f.terms_)
      for (const auto& [eta, b] : g.terms_) {
        Frequency sum = xi + eta;
        C prod = a * b;
        auto it = r.terms_.find(sum);
        if (it == r.terms_.end())
          r.terms_.emplace(std::move(sum), std::move(prod));
        else
          it->second = it->second + prod;
      }
    r.prune();
    return r;
  }

  TrigPoly scaled(const C& s) const {
    TrigPoly r = *this;
    for (auto& [xi, c] : r.terms_) c = c * s;
    r.prune();
    return r;
  }

  TrigPoly conj() const {
    TrigPoly r(dim_, basis_);
    for (const auto& [xi, c] : terms_) r.terms_.emplace(-xi, coeff::conj_of(c));
    return r;
  }

  // d^alpha f: coefficient at xi becomes (2 pi i xi)^alpha f_xi.
  TrigPoly derivative(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
      throw DimensionError("TrigPoly::derivative: bad multi-index length");
    TrigPoly r(dim_, basis_);
    const int total = mi_order(alpha);
    for (const auto& [xi, c] : terms_) {
      if constexpr (exact_mode) {
        if (!xi.is_rational())
          throw ExactnessError("TrigPoly::derivative: irrational frequency in exact mode");
        Rational xi_pow = 1;
        for (int a = 0; a < dim_; ++a)
          for (int k = 0; k < alpha[a]; ++k) xi_pow *= xi.rational_value(a);
        if (xi_pow == 0) continue;
        Rational two_pow = 1;
        for (int k = 0; k < total; ++k) two_pow *= 2;
        ExactComplex factor =
            ExactComplex(ExactScalar::pi_pow(total, two_pow * xi_pow)).times_i(total);
        r.terms_.emplace(xi, c * factor);
      } else {
        Cplx factor = 1;
        for (int a = 0; a < dim_; ++a) {
          const Cplx base(0.0, 2.0 * std::numbers::pi * xi.value(a, *basis_));
          for (int k = 0; k < alpha[a]; ++k) factor *= base;
        }
        if (coeff::is_zero(factor)) continue;
        r.terms_.emplace(xi, c * factor);
      }
    }
    r.prune();
    return r;
  }

  // f(. + tau) for rational tau: coefficient picks up e^{2 pi i xi.tau}.
  TrigPoly translate(const std::vector<Rational>& tau) const {
    if (static_cast<int>(tau.size()) != dim_)
      throw DimensionError("TrigPoly::translate: bad shift length");
    TrigPoly r(dim_, basis_);
    for (const auto& [xi, c] : terms_) {
      if constexpr (exact_mode) {
        if (!xi.is_rational())
          throw ExactnessError("TrigPoly::translate: irrational frequency in exact mode");
        Rational dot = 0;
        for (int a = 0; a < dim_; ++a) dot += xi.rational_value(a) * tau[a];
        Rational four_dot = dot * 4;
        auto q = as_int64(four_dot);
        if (!q)
          throw ExactnessError(
              "TrigPoly::translate: exact mode needs 4(xi.tau) integral; use float mode");
        r.terms_.emplace(xi, c.times_i(static_cast<int>(((*q % 4) + 4) % 4)));
      } else {
        double dot = 0;
        for (int a = 0; a < dim_; ++a) dot += xi.value(a, *basis_) * to_double(tau[a]);
        const double th = 2.0 * std::numbers::pi * dot;
        r.terms_.emplace(xi, c * Cplx(std::cos(th), std::sin(th)));
      }
    }
    return r;
  }

  C mean_value() const { return bohr_coeff(Frequency(dim_, static_cast<int>(basis_->size()))); }

  C bohr_coeff(const Frequency& xi) const {
    auto it = terms_.find(xi);
    return it == terms_.end() ? C{} : it->second;
  }

  // (f,g)_B = sum_xi f_xi conj(g_xi)
  C besicovitch_inner(const TrigPoly& g) const {
    check_compat(g, "besicovitch_inner");
    C s{};
    for (const auto& [xi, c] : terms_) {
      auto it = g.terms_.find(xi);
      if (it != g.terms_.end()) s = s + c * coeff::conj_of(it->second);
    }
    return s;
  }

  // Mean-value convolution: coefficientwise product of the coefficient maps.
  TrigPoly mv_convolution(const TrigPoly& g) const {
    check_compat(g, "mv_convolution");
    TrigPoly r(dim_, basis_);
    for (const auto& [xi, c] : terms_) {
      auto it = g.terms_.find(xi);
      if (it != g.terms_.end()) {
        C prod = c * it->second;
        if (!coeff::is_zero(prod)) r.terms_.emplace(xi, std::move(prod));
      }
    }
    r.prune();
    return r;
  }

  double norm(const NormParams& np) const {
    np.validate();
    if (std::isinf(np.p)) {
      double m = 0;
      for (const auto& [xi, c] : terms_)
        m = std::max(m, np.weight_at(xi.abs(*basis_)) * std::abs(coeff::to_cplx(c)));
      return m;
    }
    double s = 0;
    for (const auto& [xi, c] : terms_)
      s += std::pow(np.weight_at(xi.abs(*basis_)) * std::abs(coeff::to_cplx(c)), np.p);
    return std::pow(s, 1.0 / np.p);
  }

  double l1_coeff_norm() const {
    double s = 0;
    for (const auto& [xi, c] : terms_) s += std::abs(coeff::to_cplx(c));
    return s;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [xi, c] : terms_) m = std::max(m, std::abs(coeff::to_cplx(c)));
    return m;
  }

  kern::TrigPlan to_plan() const {
    kern::TrigPlan plan;
    plan.dim = dim_;
    plan.nterms = terms_.size();
    plan.w.reserve(plan.nterms * dim_);
    plan.cre.reserve(plan.nterms);
    plan.cim.reserve(plan.nterms);
    for (const auto& [xi, c] : terms_) {
      for (int a = 0; a < dim_; ++a)
        plan.w.push_back(2.0 * std::numbers::pi * xi.value(a, *basis_));
      const Cplx z = coeff::to_cplx(c);
      plan.cre.push_back(z.real());
      plan.cim.push_back(z.imag());
    }
    return plan;
  }

  Cplx eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionError("TrigPoly::eval: bad point");
    Cplx out;
    auto plan = to_plan();
    kern::eval_trig_batch(plan, x.data(), 1, &out);
    return out;
  }

  void eval_batch(const double* pts, size_t npts, Cplx* out) const {
    auto plan = to_plan();
    kern::eval_trig_batch(plan, pts, npts, out);
  }

  TrigPoly<Cplx> to_float() const {
    TrigPoly<Cplx> r(dim_, basis_);
    for (const auto& [xi, c] : terms_) r.add_term(xi, coeff::to_cplx(c));
    return r;
  }

  // Smallest L > 0 with L*xi integral for every frequency component, when the
  // basis is trivial and frequencies are rational. Used for x-sampling grids.
  std::optional<double> common_period() const {
    if (!basis_->is_trivial()) return std::nullopt;
    BigInt den_lcm = 1, num_gcd = 0;
    for (const auto& [xi, c] : terms_) {
      for (int a = 0; a < dim_; ++a) {
        Rational q = xi.coord(a, 0);
        if (q == 0) continue;
        den_lcm = boost::multiprecision::lcm(den_lcm, denominator(q));
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numerator(q)));
      }
    }
    if (num_gcd == 0) return std::nullopt;  // constant
    return Rational(den_lcm, num_gcd).convert_to<double>();
  }

  void prune() {
    if constexpr (exact_mode) {
      for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    } else {
      double m = max_abs_coeff();
      const double thresh = m * kPruneRel;
      for (auto it = terms_.begin(); it != terms_.end();) {
        double a = std::abs(it->second);
        it = (a == 0.0 || a <= thresh) ? terms_.erase(it) : std::next(it);
      }
    }
  }

 private:
  void check_compat(const TrigPoly& g, const char* op) const {
    if (dim_ != g.dim_) throw DimensionError(std::string("TrigPoly::") + op + ": dimension mismatch");
    if (!(*basis_ == *g.basis_))
      throw DimensionError(std::string("TrigPoly::") + op + ": frequency basis mismatch");
  }

  int dim_;
  std::shared_ptr<const FreqBasis> basis_;
  std::map<Frequency, C> terms_;
};

using TrigPolyD = TrigPoly<Cplx>;
using TrigPolyX = TrigPoly<ExactComplex>;

inline TrigPolyD to_float(const TrigPolyX& f) { return f.to_float(); }

// Convenience: e_k in one dimension with rational frequency.
template <class C = Cplx>
TrigPoly<C> wave1d(const Rational& freq, C coeff = C(1)) {
  return TrigPoly<C>::wave(Frequency::rational_vec({freq}), std::move(coeff));
}

struct GevreySeminormBounds {
  double lower = 0;  // grid maximum of the weighted derivative sups
  double upper = 0;  // same weights against the l^1 coefficient bound
};

// Lower/upper bounds for sup_alpha C^{-|alpha|} (alpha!)^{-s} sup_x |d^alpha f|
// truncated at |alpha| <= max_order, with x restricted to a grid over one
// (quasi-)period per axis.
template <class C>
GevreySeminormBounds gevrey_seminorm_lb(const TrigPoly<C>& f, double s, double Cconst,
                                        int max_order, int points_per_axis = 129) {
  if (!(Cconst > 0) || !(s >= 1)) throw InputError("gevrey_seminorm_lb: need C>0, s>=1");
  GevreySeminormBounds out;
  const int d = f.dim();
  auto fl = f.to_float();
  double L = fl.common_period().value_or(8.0);
  L = std::min(L, 64.0);
  std::vector<double> pts;
  size_t npts = 1;
  for (int a = 0; a < d; ++a) npts *= points_per_axis;
  pts.reserve(npts * d);
  for (size_t idx = 0; idx < npts; ++idx) {
    size_t rem = idx;
    for (int a = 0; a < d; ++a) {
      pts.push_back(L * static_cast<double>(rem % points_per_axis) / points_per_axis);
      rem /= points_per_axis;
    }
  }
  std::vector<Cplx> vals(npts);
  for (const auto& alpha : multiindices_up_to(d, max_order)) {
    auto g = fl.derivative(alpha);
    const double scale =
        std::pow(Cconst, -mi_order(alpha)) * std::pow(static_cast<double>(mi_factorial(alpha)), -s);
    if (g.is_zero()) continue;
    g.eval_batch(pts.data(), npts, vals.data());
    double sup = 0;
    for (const auto& v : vals) sup = std::max(sup, std::abs(v));
    out.lower = std::max(out.lower, scale * sup);
    out.upper = std::max(out.upper, scale * g.l1_coeff_norm());
  }
  return out;
}

}  // namespace apcalc

#endif
