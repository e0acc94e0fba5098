// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apcalc/calculus.hpp"
#include "apcalc/rng.hpp"

using namespace apcalc;
using cal::composition_term;
using cal::transpose_term;
using symb::SymbolExpr;

namespace {

const double kPi = std::numbers::pi;

TrigPolyX exact_wave(const Rational& q, ExactComplex c = ExactComplex(Rational(1))) {
  return TrigPolyX::wave(Frequency::rational_vec({q}), std::move(c));
}

TrigPolyX random_exact_poly(Rng& rng, int dim, int max_terms) {
  TrigPolyX f(dim);
  const int n = rng.uniform_int(1, max_terms);
  for (int k = 0; k < n; ++k) {
    std::vector<Rational> comps;
    for (int a = 0; a < dim; ++a)
      comps.emplace_back(rng.uniform_int(-3, 3), rng.uniform_int(1, 2));
    ExactComplex c(Rational(rng.uniform_int(-4, 4), rng.uniform_int(1, 3)),
                   ExactScalar(Rational(rng.uniform_int(-4, 4), rng.uniform_int(1, 3))));
    f.add_term(Frequency::rational_vec(comps), c);
  }
  return f;
}

DiffOpX random_diffop(Rng& rng, int dim, int max_deg, int max_terms) {
  DiffOpX a(dim);
  for (const auto& beta : multiindices_up_to(dim, max_deg)) {
    if (rng.next_double() < 0.45) continue;
    a.add_coeff(beta, random_exact_poly(rng, dim, max_terms));
  }
  if (a.is_zero()) a.add_coeff(MultiIndex(dim, 0), random_exact_poly(rng, dim, 1));
  return a;
}

}  // namespace

TEST_CASE("composition terms for multiplier against modulation") {
  // a = xi, b = e^{2 pi i x}: c_0 = xi e, c_1 = e, rest vanish
  auto a = DiffOpX::multiplier({1});
  auto b = DiffOpX::from_term({0}, exact_wave(Rational(1)));

  auto c0 = composition_term(a, b, 0);
  auto c1 = composition_term(a, b, 1);
  auto c2 = composition_term(a, b, 2);

  REQUIRE(c0.coeffs().size() == 1);
  CHECK(c0.coeffs().count(MultiIndex{1}) == 1);
  REQUIRE(c1.coeffs().size() == 1);
  auto it = c1.coeffs().find(MultiIndex{0});
  REQUIRE(it != c1.coeffs().end());
  ExactComplex cc = it->second.bohr_coeff(Frequency::rational_vec({Rational(1)}));
  CHECK(cc == ExactComplex(Rational(1)));
  CHECK(c2.is_zero());
}

TEST_CASE("x-independent symbols compose pointwise") {
  auto a = DiffOpX::multiplier({2});
  auto b = DiffOpX::multiplier({1});
  auto c0 = composition_term(a, b, 0);
  CHECK(c0.coeffs().count(MultiIndex{3}) == 1);
  CHECK(composition_term(a, b, 1).is_zero());
  CHECK(composition_term(a, b, 2).is_zero());
}

TEST_CASE("exact composition oracle") {
  // The asymptotic product, truncated at the xi-degree of a, must reproduce
  // the two-step operator application exactly on trig polynomials.
  Rng rng(90210);
  for (int rep = 0; rep < 6; ++rep) {
    const int dim = 1 + rep % 2;
    auto a = random_diffop(rng, dim, 2, 2);
    auto b = random_diffop(rng, dim, 2, 2);
    auto f = random_exact_poly(rng, dim, 3);

    TrigPolyX via_terms(dim);
    for (int j = 0; j <= a.xi_degree(); ++j)
      via_terms = via_terms + composition_term(a, b, j).apply(f);
    TrigPolyX direct = a.apply(b.apply(f));
    CHECK((via_terms - direct).is_zero());
  }
}

TEST_CASE("transpose expansion signs") {
  // b = e^{2 pi i x} xi: transpose terms are b_0 = -e xi, b_1 = -e
  auto b = DiffOpX::from_term({1}, exact_wave(Rational(1)));
  auto t0 = transpose_term(b, 0);
  auto t1 = transpose_term(b, 1);
  CHECK(transpose_term(b, 2).is_zero());

  auto c0 = t0.coeffs().find(MultiIndex{1});
  REQUIRE(c0 != t0.coeffs().end());
  CHECK(c0->second.bohr_coeff(Frequency::rational_vec({Rational(1)})) ==
        ExactComplex(Rational(-1)));

  auto c1 = t1.coeffs().find(MultiIndex{0});
  REQUIRE(c1 != t1.coeffs().end());
  CHECK(c1->second.bohr_coeff(Frequency::rational_vec({Rational(1)})) ==
        ExactComplex(Rational(-1)));

  // x-independent symbol: transpose is xi -> -xi only
  auto m = DiffOpX::multiplier({1});
  CHECK(transpose_term(m, 1).is_zero());
  auto m0 = transpose_term(m, 0);
  CHECK(m0.coeffs().find(MultiIndex{1})
            ->second.bohr_coeff(Frequency(1, 1)) == ExactComplex(Rational(-1)));

  // pure modulation has no xi-dependence: higher transpose terms vanish
  auto e = DiffOpX::from_term({0}, exact_wave(Rational(1)));
  CHECK(transpose_term(e, 1).is_zero());
  auto e0 = transpose_term(e, 0);
  CHECK(e0.coeffs().find(MultiIndex{0})
            ->second.bohr_coeff(Frequency::rational_vec({Rational(1)})) ==
        ExactComplex(Rational(1)));
}

TEST_CASE("double transpose is the identity on differential symbols") {
  Rng rng(777);
  for (int rep = 0; rep < 5; ++rep) {
    auto b = random_diffop(rng, 1, 3, 2);
    // full transpose symbol (finite sum for differential operators)
    DiffOpX t(b.dim(), b.basis());
    for (int j = 0; j <= b.xi_degree(); ++j) t = t + transpose_term(b, j);
    DiffOpX tt(b.dim(), b.basis());
    for (int j = 0; j <= t.xi_degree(); ++j) tt = tt + transpose_term(t, j);
    // tt == b exactly
    auto diff = tt + b.scaled(ExactComplex(Rational(-1)));
    CHECK(diff.is_zero());
  }
}

TEST_CASE("transpose against the besicovitch pairing") {
  // <B f, g>_B = <f, tB g>_B with the bilinear pairing M(f g).
  Rng rng(4242);
  for (int rep = 0; rep < 4; ++rep) {
    auto b = random_diffop(rng, 1, 2, 2);
    auto f = random_exact_poly(rng, 1, 3);
    auto g = random_exact_poly(rng, 1, 3);
    DiffOpX t(b.dim(), b.basis());
    for (int j = 0; j <= b.xi_degree(); ++j) t = t + transpose_term(b, j);
    ExactComplex lhs = (b.apply(f) * g).mean_value();
    ExactComplex rhs = (f * t.apply(g)).mean_value();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("amplitude reduction") {
  // y-independent amplitude reduces to the symbol itself
  auto sym = DiffOpX::from_term({1}, exact_wave(Rational(2)));
  auto amp = DiffAmpX::from_symbol(sym);
  auto a0 = cal::amplitude_reduce_term(amp, 0);
  CHECK((a0 + sym.scaled(ExactComplex(Rational(-1)))).is_zero());
  CHECK(cal::amplitude_reduce_term(amp, 1).is_zero());

  // a(x,y,xi) = e^{2 pi i y} xi: a_0 = e^{2 pi i x} xi, a_1 = e^{2 pi i x}
  TrigPolyX ywave(2);
  ywave.add_term(Frequency::rational_vec({Rational(0), Rational(1)}), ExactComplex(Rational(1)));
  auto amp2 = DiffAmpX::from_term({1}, ywave);
  auto b0 = cal::amplitude_reduce_term(amp2, 0);
  auto b1 = cal::amplitude_reduce_term(amp2, 1);
  CHECK(cal::amplitude_reduce_term(amp2, 2).is_zero());
  auto b0c = b0.coeffs().find(MultiIndex{1});
  REQUIRE(b0c != b0.coeffs().end());
  CHECK(b0c->second.bohr_coeff(Frequency::rational_vec({Rational(1)})) ==
        ExactComplex(Rational(1)));
  auto b1c = b1.coeffs().find(MultiIndex{0});
  REQUIRE(b1c != b1.coeffs().end());
  CHECK(b1c->second.bohr_coeff(Frequency::rational_vec({Rational(1)})) ==
        ExactComplex(Rational(1)));

  // adjoint amplitude of e^{2 pi i x}: reduces to e^{-2 pi i x}
  auto mod = DiffAmpX::from_symbol(DiffOpX::from_term({0}, exact_wave(Rational(1))));
  auto adj0 = cal::amplitude_reduce_term(mod.adjoint(), 0);
  auto adjc = adj0.coeffs().find(MultiIndex{0});
  REQUIRE(adjc != adj0.coeffs().end());
  CHECK(adjc->second.bohr_coeff(Frequency::rational_vec({Rational(-1)})) ==
        ExactComplex(Rational(1)));
}

TEST_CASE("cutoff family support and bounds") {
  cal::CutoffFamily cut;
  cut.R = 4;
  cut.s = 1.5;
  for (int j = 0; j < 5; ++j) {
    CHECK(cut.phi(j, cut.lo(j) * 0.999) == 0.0);
    CHECK(cut.phi(j, cut.lo(j) * 0.2) == 0.0);
    CHECK(cut.phi(j, cut.hi(j) * 1.001) == 1.0);
    CHECK(cut.phi(j, cut.hi(j) * 4 / 3) == 1.0);  // |xi| = 4 R (j+1)^s
    for (double t : {0.1, 0.3, 0.5, 0.8}) {
      double v = cut.phi(j, cut.lo(j) + t * (cut.hi(j) - cut.lo(j)));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  // sampled radial derivative bounds: |phi_j^(k)| <= C_k (R (j+1)^{s-1})^{-k},
  // with C_k taken from j = 0 (plus margin)
  for (int k = 1; k <= 3; ++k) {
    double c0 = 0;
    for (int j = 0; j < 4; ++j) {
      const double scale = cut.R * std::pow(j + 1.0, cut.s - 1);
      const double h = (cut.hi(j) - cut.lo(j)) / 4096;
      double worst = 0;
      for (double r = cut.lo(j) - 8 * h; r <= cut.hi(j) + 8 * h; r += h) {
        // central finite differences of order k
        double der = 0;
        switch (k) {
          case 1:
            der = (cut.phi(j, r + h) - cut.phi(j, r - h)) / (2 * h);
            break;
          case 2:
            der = (cut.phi(j, r + h) - 2 * cut.phi(j, r) + cut.phi(j, r - h)) / (h * h);
            break;
          default:
            der = (cut.phi(j, r + 2 * h) - 2 * cut.phi(j, r + h) + 2 * cut.phi(j, r - h) -
                   cut.phi(j, r - 2 * h)) /
                  (2 * h * h * h);
        }
        worst = std::max(worst, std::abs(der) * std::pow(scale, k));
      }
      if (j == 0)
        c0 = worst;
      else
        CHECK(worst <= c0 * 1.05);
    }
    CHECK(c0 > 0);
  }
}

TEST_CASE("sum_formal respects supports") {
  cal::FormalSum F;
  F.terms = {SymbolExpr::bracket(1, -2)};
  F.params.m = -2;
  F.params.s = 1;
  cal::CutoffFamily cut;
  cut.R = 4;
  cut.s = 1;
  auto fn = cal::sum_formal(F, cut, 3);
  double x = 0.3;
  // below every support: zero
  double xi_small = 2 * cut.R * 0.9;
  CHECK(std::abs(fn(std::span<const double>(&x, 1), std::span<const double>(&xi_small, 1))) ==
        0.0);
  // far out: equals a_0
  double xi_big = 100;
  Cplx v = fn(std::span<const double>(&x, 1), std::span<const double>(&xi_big, 1));
  CHECK(std::abs(v - F.terms[0].eval(std::span<const double>(&x, 1),
                                     std::span<const double>(&xi_big, 1))) < 1e-15);
}

namespace {

SymbolExpr bracket2pi_sq(int dim) {
  // <2 pi xi>^2 = 1 + 4 pi^2 |xi|^2, polynomial in xi
  SymbolExpr acc = SymbolExpr::one(dim);
  for (int a = 0; a < dim; ++a) {
    MultiIndex sq(dim, 0);
    sq[a] = 2;
    acc = acc + SymbolExpr::xi_mono(sq).scaled(Cplx(4 * kPi * kPi, 0));
  }
  return acc;
}

SymbolExpr perturbed_bracket_symbol(double eps) {
  auto e = SymbolExpr::xpoly(TrigPolyD::wave(Frequency::rational_vec({Rational(1)}), Cplx(eps, 0)));
  return bracket2pi_sq(1) + e;
}

}  // namespace

TEST_CASE("parametrix of a constant-coefficient symbol terminates") {
  auto a = bracket2pi_sq(1);
  hypo::HypoellParams hp;
  hp.m = 2;
  hp.m0 = 2;
  hp.rho = 1;
  hp.s = 1;
  hp.A = 0.5;
  auto b = cal::parametrix(a, hp, 3);
  REQUIRE(b.terms.size() == 4);
  for (int n = 1; n <= 3; ++n) CHECK(b.terms[n].is_zero());

  auto composed = cal::composed_symbol_callable(b.terms, a);
  double x = 0.4;
  for (double xi : {2.0, 17.0, 333.0}) {
    CHECK(std::abs(composed(std::span<const double>(&x, 1), std::span<const double>(&xi, 1)) -
                   Cplx(1, 0)) < 1e-15);
  }
}

TEST_CASE("parametrix first correction matches the hand recursion") {
  auto a = perturbed_bracket_symbol(0.5);
  hypo::HypoellParams hp;
  hp.m = 2;
  hp.m0 = 2;
  hp.rho = 1;
  hp.s = 1;
  hp.A = 2;
  auto b = cal::parametrix(a, hp, 1);
  REQUIRE(b.terms.size() == 2);

  // b_1 = -b_0 (2 pi i)^{-1} d_xi b_0 d_x a
  auto b0 = SymbolExpr::one(1) / a;
  auto expect = (b0 * b0.dxi(0) * a.dx(0)).scaled(Cplx(0, 1.0 / (2 * kPi))); // -(2 pi i)^{-1}
  Rng rng(31);
  for (int k = 0; k < 25; ++k) {
    double x = rng.uniform(0, 1), xi = rng.uniform(5, 50);
    Cplx lhs = b.terms[1].eval(std::span<const double>(&x, 1), std::span<const double>(&xi, 1));
    Cplx rhs = expect.eval(std::span<const double>(&x, 1), std::span<const double>(&xi, 1));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("parametrix residual decays at the expected rate") {
  auto a = perturbed_bracket_symbol(0.5);
  hypo::HypoellParams hp;
  hp.m = 2;
  hp.m0 = 2;
  hp.rho = 1;
  hp.s = 1;
  hp.A = 2;
  for (int N : {1, 2}) {
    auto b = cal::parametrix(a, hp, N);
    auto decay = cal::parametrix_residual_decay(b, a, 10, 1000, 12, 9);
    CHECK(decay.slope <= -(N + 1) + 0.2);
    CHECK(decay.r2 > 0.9);
  }
}

TEST_CASE("equivalence check") {
  auto rays = RaySampler::make(1, 1.0, 1000.0, 16, 3, false);
  auto a0 = bracket2pi_sq(1);
  auto a1 = SymbolExpr::bracket(1, 0.5);
  cal::FormalSum A;
  A.terms = {a0, a1};
  A.params.m = 2;
  A.params.rho = 1;
  A.params.delta = 0;
  A.params.s = 1;
  A.params.B = 1;
  A.params.C = 1;
  A.params.M = 1;

  // identical sums pass with vanishing constants
  auto same = cal::equivalence_check(A, A, 4, rays);
  CHECK(same.pass);
  for (double c : same.C_of_N) CHECK(c == 0.0);

  // a perturbation at the last tested order, shaped like the next weight,
  // is absorbed
  cal::FormalSum B = A;
  const int n0 = 3;  // perturb term N0 = N_max - 1 with a <xi>^{m - rho (N0+1)} term
  B.terms.resize(n0 + 1, SymbolExpr::zero(1));
  B.terms[n0] = SymbolExpr::bracket(1, A.params.m - A.params.rho * (n0 + 1));
  auto absorbed = cal::equivalence_check(A, B, 4, rays);
  CHECK(absorbed.pass);

  // an order-m defect (no decay) fails with growing constants
  cal::FormalSum C = A;
  C.terms[0] = a0 + SymbolExpr::bracket(1, 2).scaled(Cplx(0.5, 0));
  auto defect = cal::equivalence_check(A, C, 4, rays);
  CHECK_FALSE(defect.pass);
  CHECK(defect.front_back_ratio > 3);
}

TEST_CASE("formal sum term check") {
  auto rays = RaySampler::make(1, 1.0, 300.0, 10, 3, false);
  cal::FormalSum F;
  F.terms = {SymbolExpr::bracket(1, 2), SymbolExpr::bracket(1, 1)};
  F.params.m = 2;
  F.params.rho = 1;
  F.params.delta = 0;
  F.params.s = 1;
  F.params.B = 1;
  F.params.C = 40;
  F.params.M = 1;
  auto rep = F.check_term(1, rays);
  CHECK(rep.pass);  // <xi>^1 at shifted order m - 1 = 1
}
