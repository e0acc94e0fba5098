// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/hypoell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "apcalc/linfit.hpp"

namespace apcalc::hypo {

namespace {

constexpr double kZeroRel = 1e-12;   // |P| below this times P~ counts as a zero
constexpr double kTrendTol = 0.05;   // acceptable log-log growth slope

// Top-decade fit of log(values) against log(1+radius).
LinFit trend_fit(const std::vector<double>& radii, const std::vector<double>& vals) {
  std::vector<double> xs, ys;
  const double r_hi = radii.empty() ? 0 : radii.back();
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < r_hi / 10) continue;
    if (!(vals[i] > 0) || !std::isfinite(vals[i])) continue;
    xs.push_back(std::log(1 + radii[i]));
    ys.push_back(std::log(vals[i]));
  }
  return linear_fit(xs, ys);
}

double combined_period(const std::vector<TrigPolyD>& polys) {
  BigInt den_lcm = 1, num_gcd = 0;
  for (const auto& p : polys) {
    if (!p.basis()->is_trivial()) return 8.0;
    for (const auto& [xi, c] : p.terms())
      for (int a = 0; a < p.dim(); ++a) {
        Rational q = xi.coord(a, 0);
        if (q == 0) continue;
        den_lcm = boost::multiprecision::lcm(den_lcm, denominator(q));
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numerator(q)));
      }
  }
  if (num_gcd == 0) return 1.0;
  return std::min(Rational(den_lcm, num_gcd).convert_to<double>(), 64.0);
}

}  // namespace

// ---- PolySymbol -------------------------------------------------------------

int PolySymbol::degree() const {
  int d = 0;
  for (const auto& [a, c] : mono_) d = std::max(d, mi_order(a));
  return d;
}

void PolySymbol::set(MultiIndex alpha, Cplx c) {
  if (static_cast<int>(alpha.size()) != dim_) throw DimensionError("PolySymbol::set: bad alpha");
  if (c == Cplx(0, 0))
    mono_.erase(alpha);
  else
    mono_[std::move(alpha)] = c;
}

void PolySymbol::add_monomial(const MultiIndex& alpha, Cplx c) {
  auto it = mono_.find(alpha);
  Cplx v = (it == mono_.end() ? Cplx(0, 0) : it->second) + c;
  set(alpha, v);
}

Cplx PolySymbol::eval(std::span<const double> xi) const {
  Cplx s(0, 0);
  for (const auto& [a, c] : mono_) {
    double m = 1;
    for (int ax = 0; ax < dim_; ++ax)
      for (int k = 0; k < a[ax]; ++k) m *= xi[ax];
    s += c * m;
  }
  return s;
}

PolySymbol PolySymbol::derivative(const MultiIndex& beta) const {
  PolySymbol r(dim_);
  for (const auto& [a, c] : mono_) {
    if (!mi_leq(beta, a)) continue;
    double fact = 1;
    for (int ax = 0; ax < dim_; ++ax)
      for (int k = 0; k < beta[ax]; ++k) fact *= a[ax] - k;
    r.add_monomial(mi_sub(a, beta), c * fact);
  }
  return r;
}

PolySymbol PolySymbol::conj_coeffs() const {
  PolySymbol r(dim_);
  for (const auto& [a, c] : mono_) r.set(a, std::conj(c));
  return r;
}

PolySymbol operator+(const PolySymbol& a, const PolySymbol& b) {
  PolySymbol r = a;
  for (const auto& [al, c] : b.mono_) r.add_monomial(al, c);
  return r;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  PolySymbol r(a.dim_);
  for (const auto& [al, ca] : a.mono_)
    for (const auto& [be, cb] : b.mono_) r.add_monomial(mi_add(al, be), ca * cb);
  return r;
}

PolySymbol PolySymbol::scaled(Cplx s) const {
  PolySymbol r(dim_);
  for (const auto& [a, c] : mono_) r.set(a, c * s);
  return r;
}

nlohmann::json PolySymbol::to_json() const {
  nlohmann::json monos = nlohmann::json::array();
  for (const auto& [a, c] : mono_)
    monos.push_back({{"alpha", a}, {"re", c.real()}, {"im", c.imag()}});
  return {{"dim", dim_}, {"monomials", monos}};
}

PolySymbol PolySymbol::from_json(const nlohmann::json& j) {
  PolySymbol p(j.value("dim", 1));
  bool dim_known = j.contains("dim");
  for (const auto& m : j.at("monomials")) {
    MultiIndex a = m.at("alpha").get<MultiIndex>();
    if (!dim_known) {
      p = PolySymbol(static_cast<int>(a.size()));
      dim_known = true;
    }
    p.add_monomial(a, Cplx(m.at("re").get<double>(), m.value("im", 0.0)));
  }
  return p;
}

PolySymbol strength_sq(const PolySymbol& P) {
  PolySymbol acc(P.dim());
  const int deg = P.degree();
  for (const auto& alpha : multiindices_up_to(P.dim(), deg)) {
    PolySymbol dp = P.derivative(alpha);
    if (dp.is_zero()) continue;
    // |q|^2 on real arguments: real parts of q * conj(q), accumulated as
    // re*re + im*im so coefficients are exactly real.
    for (const auto& [a1, c1] : dp.monomials())
      for (const auto& [a2, c2] : dp.monomials()) {
        const double re = c1.real() * c2.real() + c1.imag() * c2.imag();
        acc.add_monomial(mi_add(a1, a2), Cplx(re, 0));
      }
  }
  return acc;
}

// ---- weaker / strength ------------------------------------------------------

WeakerResult weaker_check(const PolySymbol& Q, const PolySymbol& P, const RaySampler& rays) {
  if (P.is_zero()) throw InputError("weaker_check: P is identically zero");
  if (Q.dim() != P.dim()) throw DimensionError("weaker_check: dimension mismatch");
  const PolySymbol q2 = strength_sq(Q), p2 = strength_sq(P);
  WeakerResult out;
  std::vector<double> per_radius;
  per_radius.reserve(rays.radii.size());
  for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
    double worst = 0;
    for (size_t di = 0; di < rays.directions.size(); ++di) {
      const auto xi = rays.point(di, ri);
      const double qs = q2.eval(xi).real();
      const double ps = p2.eval(xi).real();
      worst = std::max(worst, std::sqrt(std::max(qs, 0.0) / std::max(ps, 1e-300)));
    }
    per_radius.push_back(worst);
    out.C_hat = std::max(out.C_hat, worst);
  }
  out.trend_slope = trend_fit(rays.radii, per_radius).slope;
  out.pass = out.trend_slope <= kTrendTol && std::isfinite(out.C_hat);
  return out;
}

// ---- s-hypoellipticity fit for polynomials ----------------------------------

HypoellReport s_hypoelliptic_fit(const PolySymbol& P, const RaySampler& rays) {
  if (P.degree() < 1) throw InputError("s_hypoelliptic_fit: P must be nonconstant");
  HypoellReport rep;
  const int d = P.dim();
  const PolySymbol p2 = strength_sq(P);

  // Default A: twice the smallest radius at which |P| is bounded away from
  // zero (relative to the strength) in every sampled direction.
  std::vector<char> radius_clean(rays.radii.size(), 1);
  for (size_t ri = 0; ri < rays.radii.size(); ++ri)
    for (size_t di = 0; di < rays.directions.size(); ++di) {
      const auto xi = rays.point(di, ri);
      const double ap = std::abs(P.eval(xi));
      const double st = std::sqrt(std::max(p2.eval(xi).real(), 0.0));
      if (ap <= kZeroRel * st) {
        radius_clean[ri] = 0;
        rep.excluded_points.push_back(xi);
        if (rep.witness.empty()) rep.witness = xi;
        break;
      }
    }
  size_t first_clean = radius_clean.size();
  for (size_t ri = 0; ri < radius_clean.size(); ++ri)
    if (radius_clean[ri]) {
      first_clean = ri;
      break;
    }
  size_t dirty_tail = 0;
  for (size_t ri = 0; ri < radius_clean.size(); ++ri)
    if (!radius_clean[ri] && rays.radii[ri] >= rays.radii.back() / 10) ++dirty_tail;

  if (first_clean == radius_clean.size() || dirty_tail > 0) {
    rep.pass = false;
    rep.verdict = "FAIL: |P| vanishes (relative to the strength) at arbitrarily large radii";
    return rep;
  }
  rep.A_used = 2 * rays.radii[first_clean];

  double rho_min = 1.0, rho_max = 0.0;
  bool fits_ok = true;
  for (int order = 1; order <= P.degree(); ++order) {
    for (const auto& beta : multiindices_of_order(d, order)) {
      PolySymbol dp = P.derivative(beta);
      if (dp.is_zero()) continue;
      std::vector<double> rs, sup_ratio;
      for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
        if (rays.radii[ri] < rep.A_used) continue;
        double worst = 0;
        bool any = false;
        for (size_t di = 0; di < rays.directions.size(); ++di) {
          const auto xi = rays.point(di, ri);
          const double ap = std::abs(P.eval(xi));
          const double st = std::sqrt(std::max(p2.eval(xi).real(), 0.0));
          if (ap <= kZeroRel * st) continue;  // excluded, already reported
          worst = std::max(worst, std::abs(dp.eval(xi)) / ap);
          any = true;
        }
        if (!any) continue;
        rs.push_back(rays.radii[ri]);
        sup_ratio.push_back(worst);
      }
      std::vector<double> xs, ys;
      for (size_t i = 0; i < rs.size(); ++i) {
        if (!(sup_ratio[i] > 0)) continue;
        xs.push_back(std::log(1 + rs[i]));
        ys.push_back(std::log(sup_ratio[i]));
      }
      if (xs.size() < 3) continue;
      LinFit f = linear_fit(xs, ys);
      SlopeFit sf;
      sf.beta = beta;
      sf.slope = f.slope;
      sf.r2 = f.r2;
      sf.n_points = xs.size();
      rep.fits.push_back(sf);
      double cand = -f.slope / order;
      cand = std::min(cand, 1.0);
      rho_min = std::min(rho_min, cand);
      rho_max = std::max(rho_max, cand);
      if (f.r2 < 0.98) fits_ok = false;
    }
  }
  if (rep.fits.empty()) {
    rep.pass = false;
    rep.verdict = "FAIL: no usable derivative data";
    return rep;
  }
  rep.rho_hat = rho_min;
  rep.pass = fits_ok && rho_min > 0;
  if (!rep.pass)
    rep.verdict = fits_ok ? "FAIL: no decay of derivative ratios" : "FAIL: ratio fits not linear";
  else
    rep.verdict = (rho_max - rho_min > 0.1)
                      ? "PASS (anisotropic: exponents differ across derivatives, reporting the minimum)"
                      : "PASS";

  // fitted C at the reported rho
  double c_hat = 0;
  for (int order = 1; order <= P.degree(); ++order)
    for (const auto& beta : multiindices_of_order(d, order)) {
      PolySymbol dp = P.derivative(beta);
      if (dp.is_zero()) continue;
      for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
        if (rays.radii[ri] < rep.A_used) continue;
        for (size_t di = 0; di < rays.directions.size(); ++di) {
          const auto xi = rays.point(di, ri);
          const double ap = std::abs(P.eval(xi));
          const double st = std::sqrt(std::max(p2.eval(xi).real(), 0.0));
          if (ap <= kZeroRel * st) continue;
          const double w = std::pow(1 + rays.radii[ri], -rep.rho_hat * order);
          c_hat = std::max(c_hat, std::abs(dp.eval(xi)) / (ap * w));
        }
      }
    }
  rep.C_hat = c_hat;
  return rep;
}

// ---- constant strength ------------------------------------------------------

ConstantStrengthReport constant_strength_check(const std::vector<TrigPolyD>& c,
                                               const std::vector<PolySymbol>& P,
                                               const RaySampler& rays, int x_points_per_axis) {
  if (c.empty() || c.size() != P.size())
    throw InputError("constant_strength_check: need matching coefficient/polynomial lists");
  const int d = P[0].dim();
  ConstantStrengthReport rep;
  const auto xs = x_grid(c[0].dim(), combined_period(c), x_points_per_axis);
  const PolySymbol& P0 = P[0];
  const PolySymbol p0s = strength_sq(P0);

  // A: twice the smallest radius where P0 is bounded away from zero.
  size_t first_clean = rays.radii.size();
  for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
    bool clean = true;
    for (size_t di = 0; di < rays.directions.size() && clean; ++di) {
      const auto xi = rays.point(di, ri);
      clean = std::abs(P0.eval(xi)) > kZeroRel * std::sqrt(std::max(p0s.eval(xi).real(), 0.0));
    }
    if (clean) {
      first_clean = ri;
      break;
    }
  }
  if (first_clean == rays.radii.size()) {
    rep.pass = false;
    return rep;
  }
  const double A = 2 * rays.radii[first_clean];

  std::vector<double> rs, min_ratio;
  rep.eps_hat = std::numeric_limits<double>::infinity();
  for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
    if (rays.radii[ri] < A) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (size_t di = 0; di < rays.directions.size(); ++di) {
      const auto xi = rays.point(di, ri);
      const double p0 = std::abs(P0.eval(xi));
      if (p0 <= 0) continue;
      std::vector<Cplx> pj(P.size());
      for (size_t j = 0; j < P.size(); ++j) pj[j] = P[j].eval(xi);
      for (const auto& x : xs) {
        Cplx p(0, 0);
        for (size_t j = 0; j < P.size(); ++j) p += c[j].eval(x) * pj[j];
        const double ratio = std::abs(p) / p0;
        if (ratio < worst) {
          worst = ratio;
          if (ratio < rep.eps_hat) {
            rep.eps_hat = ratio;
            rep.witness_x = x;
          }
        }
      }
    }
    if (std::isfinite(worst)) {
      rs.push_back(rays.radii[ri]);
      min_ratio.push_back(worst);
    }
  }
  rep.trend_slope = trend_fit(rs, min_ratio).slope;

  // Leading-order coefficient condition at every sampled x.
  int m = 0;
  for (const auto& pj : P) m = std::max(m, pj.degree());
  rep.leading_min = std::numeric_limits<double>::infinity();
  double leading_scale = 0;
  for (const auto& x : xs) {
    double s = 0;
    for (const auto& alpha : multiindices_of_order(d, m)) {
      Cplx a_alpha(0, 0);
      for (size_t j = 0; j < P.size(); ++j) {
        auto it = P[j].monomials().find(alpha);
        if (it != P[j].monomials().end()) a_alpha += c[j].eval(x) * it->second;
      }
      s += std::norm(a_alpha);
    }
    rep.leading_min = std::min(rep.leading_min, s);
    leading_scale = std::max(leading_scale, s);
  }
  rep.leading_ok = rep.leading_min > 1e-12 * std::max(leading_scale, 1e-30);

  rep.pass = rep.eps_hat > 1e-9 && rep.trend_slope >= -kTrendTol && rep.leading_ok;
  return rep;
}

// ---- formal s-hypoellipticity for symbol expressions -------------------------

HypoellReport aphs_check(const symb::SymbolExpr& a, const HypoellParams& hp, int max_order,
                         const RaySampler& rays, int x_points_per_axis) {
  hp.validate();
  if (max_order > 6) throw InputError("aphs_check: max_order <= 6");
  const int d = a.dim();
  HypoellReport rep;
  const auto xs = x_grid(d, a.x_period_hint(), x_points_per_axis);

  // |a| relative floor per radius, also fixes A when not supplied.
  std::vector<double> min_abs(rays.radii.size(), std::numeric_limits<double>::infinity());
  for (size_t ri = 0; ri < rays.radii.size(); ++ri)
    for (size_t di = 0; di < rays.directions.size(); ++di) {
      const auto xi = rays.point(di, ri);
      for (const auto& x : xs) min_abs[ri] = std::min(min_abs[ri], std::abs(a.eval(x, xi)));
    }
  double A = hp.A;
  if (A <= 0) {
    size_t first = rays.radii.size();
    for (size_t ri = 0; ri < rays.radii.size(); ++ri)
      if (min_abs[ri] > 1e-12) {
        first = ri;
        break;
      }
    if (first == rays.radii.size()) {
      rep.pass = false;
      rep.verdict = "FAIL: symbol vanishes on every sampled radius";
      return rep;
    }
    A = 2 * rays.radii[first];
  }
  rep.A_used = A;

  // Lower bound constant: per-radius min of |a| / <xi>^{m0}.
  std::vector<double> rs, c1_curve;
  rep.C1_hat = std::numeric_limits<double>::infinity();
  for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
    if (rays.radii[ri] < A) continue;
    const double br = std::sqrt(1 + rays.radii[ri] * rays.radii[ri]);
    const double v = min_abs[ri] / std::pow(br, hp.m0);
    rs.push_back(rays.radii[ri]);
    c1_curve.push_back(v);
    rep.C1_hat = std::min(rep.C1_hat, v);
  }
  const double c1_slope = trend_fit(rs, c1_curve).slope;
  const bool lower_ok = rep.C1_hat > 1e-12 && c1_slope >= -kTrendTol;

  // Ratio estimates: alpha x-derivatives, beta xi-derivatives.
  std::map<std::pair<MultiIndex, MultiIndex>, symb::SymbolExpr> cache;
  cache.emplace(std::make_pair(MultiIndex(d, 0), MultiIndex(d, 0)), a);
  std::function<const symb::SymbolExpr&(const MultiIndex&, const MultiIndex&)> deriv =
      [&](const MultiIndex& alpha, const MultiIndex& beta) -> const symb::SymbolExpr& {
    auto key = std::make_pair(alpha, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    for (int ax = 0; ax < d; ++ax) {
      if (alpha[ax] > 0) {
        MultiIndex am = alpha;
        am[ax] -= 1;
        return cache.emplace(key, deriv(am, beta).dx(ax)).first->second;
      }
      if (beta[ax] > 0) {
        MultiIndex bm = beta;
        bm[ax] -= 1;
        return cache.emplace(key, deriv(alpha, bm).dxi(ax)).first->second;
      }
    }
    throw std::logic_error("aphs_check: unreachable");
  };

  bool ratios_ok = true;
  double c_fit = 0;
  double rho_min = 1.0;
  for (int total = 1; total <= max_order; ++total) {
    for (int na = 0; na <= total; ++na) {
      for (const auto& alpha : multiindices_of_order(d, na)) {
        for (const auto& beta : multiindices_of_order(d, total - na)) {
          const symb::SymbolExpr& g = deriv(alpha, beta);
          if (g.is_zero()) continue;
          const int nb = total - na;
          const double scale =
              std::pow(static_cast<double>(mi_factorial(alpha)), hp.s * hp.rho) *
              static_cast<double>(mi_factorial(beta));
          std::vector<double> rr, sup_curve;
          for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
            const double r = rays.radii[ri];
            if (r < std::max(A, hp.B * std::pow(double(nb), hp.s))) continue;
            const double br = std::sqrt(1 + r * r);
            double sup = 0;
            for (size_t di = 0; di < rays.directions.size(); ++di) {
              const auto xi = rays.point(di, ri);
              for (const auto& x : xs) {
                const Cplx av = a.eval(x, xi);
                if (av == Cplx(0, 0)) continue;
                const double ratio = std::abs(g.eval(x, xi) / av);
                sup = std::max(sup, ratio / (scale * std::pow(br, -hp.rho * nb)));
              }
            }
            if (sup > 0) {
              rr.push_back(r);
              sup_curve.push_back(sup);
              c_fit = std::max(c_fit, std::pow(sup, 1.0 / total));
            }
          }
          if (rr.size() >= 3) {
            LinFit f = trend_fit(rr, sup_curve);
            SlopeFit sf;
            sf.beta = beta;
            sf.slope = f.slope;
            sf.r2 = f.r2;
            sf.n_points = rr.size();
            rep.fits.push_back(sf);
            if (f.slope > kTrendTol) {
              ratios_ok = false;
              if (rep.witness.empty() && !rr.empty()) rep.witness = {rr.back()};
            }
            if (na == 0 && nb > 0) {
              // raw decay rate of xi-derivative ratios, for the rho estimate
              double cand = std::min(1.0, -(f.slope - hp.rho * nb) / nb);
              rho_min = std::min(rho_min, cand);
            }
          }
        }
      }
    }
  }
  rep.C_hat = c_fit;
  rep.rho_hat = rho_min;
  rep.pass = lower_ok && ratios_ok;
  rep.verdict = rep.pass ? "PASS"
                         : (lower_ok ? "FAIL: derivative ratio exceeds the declared decay"
                                     : "FAIL: lower bound |a| >= C1 <xi>^{m0} not sustained");
  return rep;
}

}  // namespace apcalc::hypo
