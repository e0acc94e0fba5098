// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "apcalc/linfit.hpp"

namespace apcalc::cal {

using symb::SymbolExpr;

symb::ClassCheckReport FormalSum::check_term(size_t j, const RaySampler& rays,
                                             int x_points_per_axis) const {
  if (j >= terms.size()) throw InputError("FormalSum::check_term: no such term");
  symb::ClassParams p = params;
  p.m -= order_drop() * static_cast<double>(j);
  return symb::verify_class(terms[j], p, 2, rays, x_points_per_axis);
}

double CutoffFamily::smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double g = std::exp(-1.0 / t);
  const double h = std::exp(-1.0 / (1.0 - t));
  return g / (g + h);
}

SymbolCallable sum_formal(const FormalSum& F, const CutoffFamily& cut, int N_trunc) {
  const int n = std::min<int>(N_trunc, static_cast<int>(F.terms.size()) - 1);
  std::vector<SymbolExpr> terms(F.terms.begin(), F.terms.begin() + (n + 1));
  return [terms, cut](std::span<const double> x, std::span<const double> xi) {
    double r2 = 0;
    for (double v : xi) r2 += v * v;
    const double r = std::sqrt(r2);
    Cplx acc(0, 0);
    for (size_t j = 0; j < terms.size(); ++j) {
      const double w = cut.phi(static_cast<int>(j), r);
      if (w == 0.0) continue;
      acc += w * terms[j].eval(x, xi);
    }
    return acc;
  };
}

EquivalenceReport equivalence_check(const FormalSum& A, const FormalSum& B, int N_max,
                                    const RaySampler& rays, int x_points_per_axis) {
  if (N_max < 1) throw InputError("equivalence_check: N_max >= 1");
  const auto& p = A.params;
  const int d = A.terms.empty() ? (B.terms.empty() ? 1 : B.terms[0].dim()) : A.terms[0].dim();
  EquivalenceReport rep;

  double period = 8.0;
  if (!A.terms.empty())
    period = A.terms[0].x_period_hint();
  else if (!B.terms.empty())
    period = B.terms[0].x_period_hint();
  const auto xs = x_grid(d, period, x_points_per_axis);

  const double srd = p.s * (p.rho - p.delta);
  for (int N = 1; N <= N_max; ++N) {
    // partial difference sum_{j<N} (a_j - b_j)
    SymbolExpr diff = SymbolExpr::zero(d);
    SymbolExpr amag = SymbolExpr::zero(d);
    SymbolExpr bmag = SymbolExpr::zero(d);
    for (int j = 0; j < N; ++j) {
      if (j < static_cast<int>(A.terms.size())) {
        diff = diff + A.terms[j];
        amag = amag + A.terms[j];
      }
      if (j < static_cast<int>(B.terms.size())) {
        diff = diff - B.terms[j];
        bmag = bmag + B.terms[j];
      }
    }
    double worst_c = 0;
    const double nfact = static_cast<double>(factorial_u64(N));
    for (int na = 0; na <= 2; ++na) {          // x-derivatives
      for (int nb = 0; na + nb <= 2; ++nb) {   // xi-derivatives
        for (const auto& alpha : multiindices_of_order(d, na)) {
          for (const auto& beta : multiindices_of_order(d, nb)) {
            SymbolExpr g = diff.dx_multi(alpha).dxi_multi(beta);
            if (g.is_zero()) continue;
            SymbolExpr ga = amag.dx_multi(alpha).dxi_multi(beta);
            SymbolExpr gb = bmag.dx_multi(alpha).dxi_multi(beta);
            const double scale =
                std::pow(nfact * static_cast<double>(mi_factorial(alpha)), srd) *
                static_cast<double>(mi_factorial(beta));
            for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
              const double r = rays.radii[ri];
              const double br = std::sqrt(1 + r * r);
              if (br < p.B * std::pow(double(N + nb), p.s)) continue;
              const double weight =
                  scale * std::pow(br, p.m - p.rho * nb + p.delta * na -
                                           (p.rho - p.delta) * N);
              for (size_t di = 0; di < rays.directions.size(); ++di) {
                const auto xi = rays.point(di, ri);
                for (const auto& x : xs) {
                  const double val = std::abs(g.eval(x, xi));
                  ++rep.points;
                  // Cancellation floor: treat differences at roundoff level
                  // of the operands as exact zeros.
                  const double mag = std::abs(ga.eval(x, xi)) + std::abs(gb.eval(x, xi));
                  if (val <= 1e-12 * (mag + 1e-30)) continue;
                  const double cfit = std::pow(val / weight, 1.0 / (1.0 + na + nb + N));
                  worst_c = std::max(worst_c, cfit);
                }
              }
            }
          }
        }
      }
    }
    rep.C_of_N.push_back(worst_c);
  }

  std::vector<double> nonzero;
  for (double c : rep.C_of_N)
    if (c > 0) nonzero.push_back(c);
  if (nonzero.size() < 2) {
    rep.pass = true;
    rep.front_back_ratio = 1;
  } else {
    rep.front_back_ratio = nonzero.back() / nonzero.front();
    rep.pass = rep.front_back_ratio <= 3.0;
  }
  return rep;
}

SymbolExpr Parametrix::truncated_sum() const {
  if (terms.empty()) throw InputError("Parametrix: no terms");
  SymbolExpr s = terms[0];
  for (size_t j = 1; j < terms.size(); ++j) s = s + terms[j];
  return s;
}

Parametrix parametrix(const SymbolExpr& a, const hypo::HypoellParams& hp, int N,
                      const RaySampler* check_rays) {
  hp.validate();
  if (a.is_zero()) throw InputError("parametrix: symbol is structurally zero");
  if (N < 0 || N > 5) throw InputError("parametrix: order must be in [0, 5]");
  const int d = a.dim();

  Parametrix out;
  out.validity_radius = hp.A;
  SymbolExpr b0 = SymbolExpr::one(d) / a;
  out.terms.push_back(b0);
  for (int n = 1; n <= N; ++n) {
    SymbolExpr inner =
        composition_term(std::span<const SymbolExpr>(out.terms.data(), out.terms.size()),
                         std::span<const SymbolExpr>(&a, 1), n);
    SymbolExpr bn = (b0 * inner).scaled(Cplx(-1, 0));
    out.terms.push_back(std::move(bn));
  }

  if (check_rays != nullptr) {
    symb::ClassParams cp;
    cp.m = -hp.m0;
    cp.rho = hp.rho;
    cp.delta = 0;
    cp.s = hp.s;
    cp.B = std::max(hp.B, 1.0);
    cp.M = d / 2 + 1;
    cp.C = 1;
    auto rep = symb::verify_class(out.terms[0], cp, 2, *check_rays);
    cp.C = rep.fitted_C * 1.0001;
    if (cp.C <= 0 || !std::isfinite(cp.C)) {
      out.warnings.push_back("class check inconclusive for b_0");
    } else {
      auto rep2 = symb::verify_class(out.terms[0], cp, 2, *check_rays);
      if (!rep2.pass)
        out.warnings.push_back("b_0 failed its class estimate at the fitted constant");
    }
  }
  return out;
}

namespace {

std::shared_ptr<const FreqBasis> basis_of(const SymbolExpr& a) {
  std::shared_ptr<const FreqBasis> found = FreqBasis::trivial();
  std::function<void(const SymbolExpr::NodePtr&)> scan = [&](const SymbolExpr::NodePtr& n) {
    if (!n) return;
    switch (n->kind) {
      case SymbolExpr::Kind::XPoly:
      case SymbolExpr::Kind::YPoly:
        found = n->poly.basis();
        return;
      case SymbolExpr::Kind::Sum:
      case SymbolExpr::Kind::Prod:
        for (const auto& k : n->kids) scan(k);
        return;
      case SymbolExpr::Kind::Quot:
        scan(n->num);
        scan(n->den);
        return;
      case SymbolExpr::Kind::IPow:
        scan(n->base);
        return;
      default:
        return;
    }
  };
  scan(a.node());
  return found;
}

}  // namespace

SymbolCallable composed_symbol_callable(std::vector<SymbolExpr> B_terms, const SymbolExpr& a) {
  if (B_terms.empty()) throw InputError("composed_symbol_callable: empty B");
  const int d = a.dim();
  struct ModTerm {
    std::vector<double> mu;  // frequency values
    SymbolExpr g;            // xi-only factor
  };
  const auto basis = basis_of(a);
  std::vector<ModTerm> mods;
  for (auto& [mu, g] : a.modulated_decomposition()) {
    ModTerm t;
    t.g = g;
    t.mu.resize(d);
    for (int ax = 0; ax < d; ++ax) t.mu[ax] = mu.value(ax, *basis);
    mods.push_back(std::move(t));
  }

  return [mods = std::move(mods), terms = std::move(B_terms), d](
             std::span<const double> x, std::span<const double> xi) {
    Cplx acc(0, 0);
    std::vector<double> shifted(d);
    for (const auto& t : mods) {
      double phase = 0;
      for (int ax = 0; ax < d; ++ax) {
        shifted[ax] = xi[ax] + t.mu[ax];
        phase += 2 * std::numbers::pi * t.mu[ax] * x[ax];
      }
      Cplx bval(0, 0);
      for (const auto& b : terms) bval += b.eval(x, shifted);
      acc += t.g.eval(x, xi) * Cplx(std::cos(phase), std::sin(phase)) * bval;
    }
    return acc;
  };
}

ResidualDecay parametrix_residual_decay(const Parametrix& b, const SymbolExpr& a, double r_min,
                                        double r_max, int n_radii, int x_points_per_axis) {
  const int d = a.dim();
  auto composed = composed_symbol_callable(b.terms, a);
  const auto xs = x_grid(d, a.x_period_hint(), x_points_per_axis);

  ResidualDecay out;
  for (int k = 0; k < n_radii; ++k) {
    const double r =
        r_min * std::pow(r_max / r_min, n_radii == 1 ? 0.0 : double(k) / (n_radii - 1));
    double worst = 0;
    for (int axis = 0; axis < d; ++axis) {
      for (int sign : {+1, -1}) {
        std::vector<double> xi(d, 0.0);
        xi[axis] = sign * r;
        for (const auto& x : xs)
          worst = std::max(worst, std::abs(composed(x, xi) - Cplx(1, 0)));
      }
    }
    out.radii.push_back(r);
    out.max_abs.push_back(worst);
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < out.radii.size(); ++i) {
    if (!(out.max_abs[i] > 0)) continue;
    lx.push_back(std::log(out.radii[i]));
    ly.push_back(std::log(out.max_abs[i]));
  }
  LinFit f = linear_fit(lx, ly);
  out.slope = f.slope;
  out.r2 = f.r2;
  return out;
}

}  // namespace apcalc::cal
