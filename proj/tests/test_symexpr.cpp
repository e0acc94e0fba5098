// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apcalc/rng.hpp"
#include "apcalc/symexpr.hpp"

using namespace apcalc;
using symb::ClassParams;
using symb::SymbolExpr;

namespace {

const double kPi = std::numbers::pi;

SymbolExpr e2pix(int dim = 1) {
  return SymbolExpr::xpoly(TrigPolyD::wave(Frequency::rational_vec({Rational(1)}), Cplx(1, 0)));
}

Cplx ev(const SymbolExpr& a, double x, double xi) {
  return a.eval(std::span<const double>(&x, 1), std::span<const double>(&xi, 1));
}

// Random xi-only or mixed expression of bounded depth, quotient-free zeros.
SymbolExpr random_expr(Rng& rng, int depth) {
  if (depth == 0) {
    switch (rng.uniform_int(0, 3)) {
      case 0:
        return SymbolExpr::xi_mono({rng.uniform_int(0, 2)});
      case 1:
        return SymbolExpr::bracket(1, rng.uniform_int(-2, 3) * 0.5);
      case 2:
        return SymbolExpr::xpoly(TrigPolyD::wave(
            Frequency::rational_vec({Rational(rng.uniform_int(-2, 2))}),
            Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))));
      default:
        return SymbolExpr::constant(1, Cplx(rng.uniform(-2, 2), rng.uniform(-1, 1)));
    }
  }
  SymbolExpr a = random_expr(rng, depth - 1);
  SymbolExpr b = random_expr(rng, depth - 1);
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return a + b;
    case 1:
      return a * b;
    default:
      // keep denominators bounded away from zero
      return a / (SymbolExpr::bracket(1, 2) + SymbolExpr::constant(1, Cplx(3, 0)));
  }
}

}  // namespace

TEST_CASE("xi derivatives of monomials and brackets") {
  auto xi2 = SymbolExpr::xi_mono({2});
  auto d = xi2.dxi(0);
  for (double v : {0.3, 1.0, -2.5}) CHECK(ev(d, 0, v).real() == doctest::Approx(2 * v));

  for (double m : {1.0, 2.0, -3.5}) {
    auto br = SymbolExpr::bracket(1, m);
    auto db = br.dxi(0);
    for (double v : {0.5, 2.0}) {
      double expect = m * v * std::pow(1 + v * v, (m - 2) / 2);
      CHECK(ev(db, 0, v).real() == doctest::Approx(expect));
    }
  }
}

TEST_CASE("x derivative of a modulated symbol") {
  auto a = e2pix() * SymbolExpr::xi_mono({1});
  auto d = a.dx(0);
  const double x = 0.2, xi = 1.7;
  Cplx expect = Cplx(0, 2 * kPi) * std::exp(Cplx(0, 2 * kPi * x)) * xi;
  CHECK(std::abs(ev(d, x, xi) - expect) < 1e-12);
}

TEST_CASE("evaluation examples") {
  auto p = SymbolExpr::xi_mono({2}) + SymbolExpr::one(1);
  double x0 = 0;
  CHECK(ev(p, x0, 2.0) == Cplx(5, 0));

  auto q = SymbolExpr::one(1) / p;
  CHECK(ev(q, 0, 0) == Cplx(1, 0));

  auto m = e2pix() * SymbolExpr::xi_mono({1});
  CHECK(std::abs(ev(m, 0.25, 3.0) - Cplx(0, 3)) < 1e-12);
}

TEST_CASE("division by zero carries the point") {
  auto q = SymbolExpr::one(1) / SymbolExpr::xi_mono({1});
  CHECK_THROWS_AS(ev(q, 0, 0), EvalDomainError);
  try {
    ev(q, 0.5, 0.0);
  } catch (const EvalDomainError& e) {
    REQUIRE(e.point.size() == 2);
    CHECK(e.point[0] == 0.5);
    CHECK(e.point[1] == 0.0);
  }
}

TEST_CASE("derivatives match finite differences on random expressions") {
  Rng rng(314);
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep) {
    auto a = random_expr(rng, 3);
    auto da = a.dxi(0);
    auto dxa = a.dx(0);
    for (int k = 0; k < 5; ++k) {
      const double x = rng.uniform(-1, 1), xi = rng.uniform(-2, 2);
      const double h = 1e-5;
      Cplx fd_xi = (ev(a, x, xi + h) - ev(a, x, xi - h)) / (2 * h);
      Cplx an_xi = ev(da, x, xi);
      CHECK(std::abs(fd_xi - an_xi) <= 1e-6 * (1 + std::abs(an_xi)));
      Cplx fd_x = (ev(a, x + h, xi) - ev(a, x - h, xi)) / (2 * h);
      Cplx an_x = ev(dxa, x, xi);
      CHECK(std::abs(fd_x - an_x) <= 1e-6 * (1 + std::abs(an_x)));
      ++checked;
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("mixed partials commute") {
  Rng rng(2718);
  for (int rep = 0; rep < 8; ++rep) {
    auto a = random_expr(rng, 3);
    auto ab = a.dxi(0).dx(0);
    auto ba = a.dx(0).dxi(0);
    for (int k = 0; k < 5; ++k) {
      const double x = rng.uniform(-1, 1), xi = rng.uniform(-2, 2);
      CHECK(std::abs(ev(ab, x, xi) - ev(ba, x, xi)) <
            1e-12 * (1 + std::abs(ev(ab, x, xi))));
    }
  }
  // polynomial-type symbols commute structurally as well
  auto a = e2pix() * SymbolExpr::xi_mono({2}) + SymbolExpr::xi_mono({1});
  CHECK(a.dxi(0).dx(0).to_json() == a.dx(0).dxi(0).to_json());
}

TEST_CASE("structural zero propagation") {
  auto c = SymbolExpr::constant(1, Cplx(7, 0));
  CHECK(c.dx(0).is_zero());
  CHECK(c.dxi(0).is_zero());
  auto a = c * SymbolExpr::xi_mono({1});
  CHECK(a.dx(0).is_zero());
  // x-independent symbol: all x-derivatives must vanish structurally
  auto br = SymbolExpr::bracket(1, 2) + SymbolExpr::one(1);
  CHECK(br.dx(0).is_zero());
}

TEST_CASE("substitutions") {
  auto a = e2pix() * SymbolExpr::xi_mono({1});
  auto neg = a.subst_xi_neg();
  CHECK(std::abs(ev(neg, 0.1, 2.0) - (-ev(a, 0.1, -(-2.0)))) < 1e-12);
  CHECK(std::abs(ev(neg, 0.1, 2.0) - ev(a, 0.1, -2.0)) < 1e-12);

  double xi0 = 3.0;
  auto frozen = a.subst_xi(std::span<const double>(&xi0, 1));
  CHECK(frozen.is_xi_only() == false);
  auto collapsed = frozen.to_trigpoly();
  REQUIRE(collapsed.has_value());
  double x0 = 0.25;
  CHECK(std::abs(collapsed->eval(std::span<const double>(&x0, 1)) - Cplx(0, 3)) < 1e-12);

  auto conj = a.conjugate();
  CHECK(std::abs(ev(conj, 0.3, 1.5) - std::conj(ev(a, 0.3, 1.5))) < 1e-12);
}

TEST_CASE("amplitude atoms and the diagonal substitution") {
  auto amp = SymbolExpr::ypoly(TrigPolyD::wave(Frequency::rational_vec({Rational(1)}), Cplx(1, 0))) *
             SymbolExpr::xi_mono({1});
  CHECK(amp.nvars() == 3);
  auto diag = amp.subst_y_to_x();
  CHECK(diag.nvars() == 2);
  const double x = 0.3, xi = 1.2, y = 0.9;
  Cplx vy = amp.eval(std::span<const double>(&x, 1), std::span<const double>(&xi, 1),
                     std::span<const double>(&y, 1));
  Cplx expect = std::exp(Cplx(0, 2 * kPi * y)) * xi;
  CHECK(std::abs(vy - expect) < 1e-12);
  CHECK(std::abs(diag.eval(std::span<const double>(&x, 1), std::span<const double>(&xi, 1)) -
                 std::exp(Cplx(0, 2 * kPi * x)) * xi) < 1e-12);
}

TEST_CASE("modulated decomposition") {
  auto a = SymbolExpr::bracket(1, 2) + e2pix() * SymbolExpr::xi_mono({1}).scaled(Cplx(0.5, 0));
  auto dec = a.modulated_decomposition();
  REQUIRE(dec.size() == 2);
  // zero frequency part is <xi>^2, the e^{2 pi i x} part is xi/2
  bool saw_zero = false, saw_one = false;
  for (const auto& [mu, g] : dec) {
    double xi0 = 2.0;
    Cplx v = g.eval({}, std::span<const double>(&xi0, 1));
    if (mu.is_zero()) {
      saw_zero = true;
      CHECK(v.real() == doctest::Approx(5.0));
    } else {
      saw_one = true;
      CHECK(v.real() == doctest::Approx(1.0));
    }
  }
  CHECK(saw_zero);
  CHECK(saw_one);
}

TEST_CASE("json round trip") {
  auto a = (SymbolExpr::bracket(1, 2) + e2pix()) /
           (SymbolExpr::xi_mono({2}) + SymbolExpr::constant(1, Cplx(4, 0)));
  auto j = a.to_json();
  auto b = SymbolExpr::from_json(j);
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    double x = rng.uniform(-1, 1), xi = rng.uniform(-3, 3);
    CHECK(std::abs(ev(a, x, xi) - ev(b, x, xi)) < 1e-14);
  }
}

TEST_CASE("verify_class on bracket symbols") {
  auto rays = RaySampler::make(1, 1.0, 1000.0, 20, 9);
  const double m = 1.5;
  auto a = SymbolExpr::bracket(1, m);
  ClassParams p;
  p.m = m;
  p.rho = 1;
  p.delta = 0;
  p.s = 1;
  p.B = 1;
  p.M = 1;
  p.C = 1e6;  // generous first pass to read off the fitted constant
  auto rep0 = symb::verify_class(a, p, 4, rays);
  REQUIRE(rep0.fitted_C > 0);
  p.C = rep0.fitted_C * 1.05;
  auto rep = symb::verify_class(a, p, 4, rays);
  CHECK(rep.pass);
  // monotone in C
  p.C = rep0.fitted_C * 8;
  CHECK(symb::verify_class(a, p, 4, rays).pass);
  p.C = rep0.fitted_C / 4;
  CHECK_FALSE(symb::verify_class(a, p, 4, rays).pass);
}

TEST_CASE("verify_class on a pure oscillation") {
  auto rays = RaySampler::make(1, 1.0, 100.0, 10, 9);
  auto a = e2pix();
  ClassParams p;
  p.m = 0;
  p.rho = 1;
  p.delta = 0;
  p.s = 1;
  p.B = 1;
  p.M = 1;
  p.C = 2 * kPi;
  auto rep = symb::verify_class(a, p, 4, rays);
  CHECK(rep.pass);
  CHECK(rep.fitted_C <= 2 * kPi + 1e-9);
}

TEST_CASE("verify_class flags an order mismatch with a witness") {
  auto rays = RaySampler::make(1, 1.0, 1000.0, 20, 9);
  auto a = SymbolExpr::xi_mono({1});  // order 1 symbol declared as order 0
  ClassParams p;
  p.m = 0;
  p.rho = 1;
  p.delta = 0;
  p.s = 1;
  p.B = 1;
  p.M = 1;
  p.C = 10;
  auto rep = symb::verify_class(a, p, 2, rays);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.worst_xi.size() == 1);
  CHECK(std::abs(rep.worst_xi[0]) > 100.0);  // violation grows with |xi|
}

TEST_CASE("class params validation") {
  ClassParams p;
  p.rho = 0.5;
  p.s = 1;  // s(rho-delta) = 0.5 < 1
  CHECK_THROWS_AS(p.validate(1), InputError);
  p.s = 2;
  CHECK_NOTHROW(p.validate(1));
  p.delta = 0.7;
  CHECK_THROWS_AS(p.validate(1), InputError);
}
