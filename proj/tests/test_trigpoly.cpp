// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apcalc/rng.hpp"
#include "apcalc/serialize.hpp"
#include "apcalc/trigpoly.hpp"

using namespace apcalc;

namespace {

TrigPolyD random_poly(Rng& rng, int nterms, int denom_max = 4) {
  TrigPolyD f(1);
  for (int k = 0; k < nterms; ++k) {
    Rational q(rng.uniform_int(-8, 8), rng.uniform_int(1, denom_max));
    f.add_term(Frequency::rational_vec({q}), Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  }
  return f;
}

TrigPolyX random_exact_poly(Rng& rng, int nterms) {
  TrigPolyX f(1);
  for (int k = 0; k < nterms; ++k) {
    Rational q(rng.uniform_int(-8, 8), rng.uniform_int(1, 4));
    ExactComplex c(Rational(rng.uniform_int(-5, 5), rng.uniform_int(1, 3)),
                   ExactScalar(Rational(rng.uniform_int(-5, 5), rng.uniform_int(1, 3))));
    f.add_term(Frequency::rational_vec({q}), c);
  }
  return f;
}

}  // namespace

TEST_CASE("add and cancellation") {
  auto e1 = wave1d(Rational(1));
  auto two = e1 + e1;
  CHECK(two.bohr_coeff(Frequency::rational_vec({Rational(1)})) == Cplx(2, 0));
  auto zero = e1 + e1.scaled(Cplx(-1, 0));
  CHECK(zero.is_zero());

  auto f = wave1d(Rational(0), Cplx(2, 0)) + wave1d(Rational(1)) + wave1d(Rational(1, 2));
  CHECK(f.nterms() == 3);
}

TEST_CASE("mul is coefficient convolution") {
  auto e1 = wave1d(Rational(1)), e2 = wave1d(Rational(2));
  auto e3 = e1 * e2;
  CHECK(e3.nterms() == 1);
  CHECK(e3.bohr_coeff(Frequency::rational_vec({Rational(3)})) == Cplx(1, 0));

  auto g = wave1d(Rational(1)) + wave1d(Rational(-1));
  auto g2 = g * g;
  CHECK(g2.bohr_coeff(Frequency::rational_vec({Rational(0)})) == Cplx(2, 0));
  CHECK(g2.bohr_coeff(Frequency::rational_vec({Rational(2)})) == Cplx(1, 0));
  CHECK(g2.bohr_coeff(Frequency::rational_vec({Rational(-2)})) == Cplx(1, 0));
}

TEST_CASE("mul matches pointwise product at random points") {
  Rng rng(42);
  auto f = random_poly(rng, 8), g = random_poly(rng, 6);
  auto fg = f * g;
  for (int k = 0; k < 100; ++k) {
    double x = rng.uniform(-10, 10);
    Cplx lhs = fg.eval(std::span<const double>(&x, 1));
    Cplx rhs = f.eval(std::span<const double>(&x, 1)) * g.eval(std::span<const double>(&x, 1));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("parseval in exact mode") {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    auto f = random_exact_poly(rng, 20);
    ExactComplex lhs = (f * f.conj()).mean_value();
    ExactComplex rhs;
    for (const auto& [xi, c] : f.terms()) rhs += ExactComplex(c.abs2());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("derivative multiplies by 2 pi i xi") {
  auto e1 = wave1d(Rational(1));
  auto d = e1.derivative({1});
  Cplx c = d.bohr_coeff(Frequency::rational_vec({Rational(1)}));
  CHECK(c.real() == doctest::Approx(0.0));
  CHECK(c.imag() == doctest::Approx(2 * std::numbers::pi));

  auto e0 = wave1d(Rational(0), Cplx(5, 0));
  CHECK(e0.derivative({1}).is_zero());
  CHECK(e0.derivative({3}).is_zero());

  // second derivative of e_{1/2} is (2 pi i / 2)^2 = -pi^2 times it, exactly
  TrigPolyX h = TrigPolyX::wave(Frequency::rational_vec({Rational(1, 2)}),
                                ExactComplex(Rational(1)));
  auto d2 = h.derivative({2});
  ExactComplex expect = ExactComplex(ExactScalar::pi_pow(2, Rational(-1)));
  CHECK(d2.bohr_coeff(Frequency::rational_vec({Rational(1, 2)})) == expect);
}

TEST_CASE("derivative-fourier identity over the frequency set") {
  Rng rng(99);
  auto f = random_poly(rng, 10);
  MultiIndex alpha{2};
  auto df = f.derivative(alpha);
  for (const auto& [xi, c] : f.terms()) {
    const double v = xi.value(0, *f.basis());
    Cplx factor = std::pow(Cplx(0, 2 * std::numbers::pi * v), 2);
    CHECK(std::abs(df.bohr_coeff(xi) - factor * c) < 1e-12 * (1 + std::abs(factor * c)));
  }
}

TEST_CASE("mean value and bohr coefficients") {
  auto e1 = wave1d(Rational(1));
  CHECK(e1.mean_value() == Cplx(0, 0));
  auto f = wave1d(Rational(0), Cplx(2, 0)) + e1;
  CHECK(f.mean_value() == Cplx(2, 0));

  // cos^2(2 pi x) = 1/4 e_{-2} + 1/2 e_0 + 1/4 e_2
  auto cosx = wave1d(Rational(1), Cplx(0.5, 0)) + wave1d(Rational(-1), Cplx(0.5, 0));
  auto cos2 = cosx * cosx;
  CHECK(cos2.mean_value().real() == doctest::Approx(0.5));

  CHECK(e1.bohr_coeff(Frequency::rational_vec({Rational(2)})) == Cplx(0, 0));
  auto g = wave1d(Rational(1, 3), Cplx(3, 4));
  CHECK(g.bohr_coeff(Frequency::rational_vec({Rational(1, 3)})) == Cplx(3, 4));
}

TEST_CASE("besicovitch inner product") {
  auto e1 = wave1d(Rational(1)), e2 = wave1d(Rational(2));
  CHECK(e1.besicovitch_inner(e1) == Cplx(1, 0));
  CHECK(e1.besicovitch_inner(e2) == Cplx(0, 0));
  auto f = wave1d(Rational(0), Cplx(2, 0)) + e1;
  CHECK(f.besicovitch_inner(e1) == Cplx(1, 0));
}

TEST_CASE("mean value convolution") {
  auto f = wave1d(Rational(1)) + wave1d(Rational(2));
  auto g = wave1d(Rational(1), Cplx(2, 0));
  auto h = f.mv_convolution(g);
  CHECK(h.nterms() == 1);
  CHECK(h.bohr_coeff(Frequency::rational_vec({Rational(1)})) == Cplx(2, 0));

  auto disjoint = wave1d(Rational(3));
  CHECK(f.mv_convolution(disjoint).is_zero());

  // all-ones mask over the frequency set acts as the identity
  auto mask = wave1d(Rational(1)) + wave1d(Rational(2));
  auto same = f.mv_convolution(mask);
  CHECK(same.bohr_coeff(Frequency::rational_vec({Rational(1)})) == Cplx(1, 0));
  CHECK(same.bohr_coeff(Frequency::rational_vec({Rational(2)})) == Cplx(1, 0));
}

TEST_CASE("weighted norms") {
  auto f = wave1d(Rational(0), Cplx(2, 0)) + wave1d(Rational(1));
  const double eps = 0.7;
  double n1 = f.norm(NormParams::gevrey_weight(1, 1.5, eps));
  CHECK(n1 == doctest::Approx(2.0 + std::exp(-eps)));

  auto e1 = wave1d(Rational(1));
  CHECK(e1.norm(NormParams::sobolev(2, 2)) == doctest::Approx(2.0));

  double unweighted = f.norm(NormParams::gevrey_weight(1, 2, 0.0));
  CHECK(unweighted == doctest::Approx(3.0));

  double sup = f.norm(NormParams::sobolev(INFINITY, 0));
  CHECK(sup == doctest::Approx(2.0));
}

TEST_CASE("norm monotone in eps and translation invariant") {
  Rng rng(5);
  auto f = random_poly(rng, 12);
  auto n = [&](double eps) { return f.norm(NormParams::gevrey_weight(1, 2, eps)); };
  CHECK(n(1.0) <= n(0.5) + 1e-12);
  CHECK(n(0.5) <= n(0.0) + 1e-12);

  std::vector<Rational> tau{Rational(3, 7)};
  auto g = f.translate(tau);
  CHECK(g.norm(NormParams::gevrey_weight(1, 2, 0.5)) ==
        doctest::Approx(f.norm(NormParams::gevrey_weight(1, 2, 0.5))));
  CHECK(g.norm(NormParams::sobolev(2, 1)) == doctest::Approx(f.norm(NormParams::sobolev(2, 1))));
  CHECK(std::abs(g.mean_value() - f.mean_value()) < 1e-12);
}

TEST_CASE("translation in exact mode needs quarter-integral phases") {
  TrigPolyX f = TrigPolyX::wave(Frequency::rational_vec({Rational(1, 4)}),
                                ExactComplex(Rational(1)));
  auto g = f.translate({Rational(1)});  // phase e^{i pi/2} = i
  ExactComplex c = g.bohr_coeff(Frequency::rational_vec({Rational(1, 4)}));
  CHECK(c == ExactComplex(Rational(0), ExactScalar(Rational(1))));
  CHECK_THROWS_AS(f.translate({Rational(1, 3)}), ExactnessError);
}

TEST_CASE("irrational basis keeps frequencies exact") {
  auto basis = std::make_shared<const FreqBasis>(std::vector<std::string>{"1", "sqrt2"});
  Frequency f1(1, 2), fs2(1, 2);
  f1.coord(0, 0) = 1;
  fs2.coord(0, 1) = 1;
  auto e1 = TrigPolyD::wave(f1, Cplx(1, 0), basis);
  auto es2 = TrigPolyD::wave(fs2, Cplx(1, 0), basis);
  auto prod = e1 * es2;
  CHECK(prod.nterms() == 1);
  Frequency sum = f1 + fs2;
  CHECK(prod.bohr_coeff(sum) == Cplx(1, 0));
  CHECK(sum.value(0, *basis) == doctest::Approx(1 + std::sqrt(2.0)));
  // e_1 * e_{sqrt2} and e_{1+sqrt2} merge; e_{sqrt2} and e_{1.41...} would not
  auto sq = es2 * es2;
  CHECK(sq.nterms() == 1);
}

TEST_CASE("exact mode round trips with no floating error") {
  Rng rng(11);
  auto f = random_exact_poly(rng, 6);
  auto g = random_exact_poly(rng, 5);
  auto lhs = ((f + g) * g).derivative({1});
  auto rhs = (f * g).derivative({1}) + (g * g).derivative({1});
  auto diff = lhs - rhs;
  CHECK(diff.is_zero());
}

TEST_CASE("gevrey seminorm bounds") {
  auto one = wave1d(Rational(0));
  auto b = gevrey_seminorm_lb(one, 2.0, 1.0, 4);
  CHECK(b.lower == doctest::Approx(1.0));

  auto e1 = wave1d(Rational(1));
  auto b2 = gevrey_seminorm_lb(e1, 1.0, 2 * std::numbers::pi, 5);
  CHECK(b2.lower == doctest::Approx(1.0));

  // |e_xi| seminorm upper bound vs the exponential bound, several xi and C
  for (double xiv : {1.0, 3.0, 7.0}) {
    for (double C : {1.0, 4.0}) {
      for (double s : {1.0, 2.0}) {
        auto exi = wave1d(Rational(static_cast<long long>(xiv)));
        auto bb = gevrey_seminorm_lb(exi, s, C, 8);
        double paper_bound =
            std::exp(s * 1 * std::pow(2 * std::numbers::pi / C, 1.0 / s) * std::pow(xiv, 1.0 / s));
        CHECK(bb.upper <= paper_bound * (1 + 1e-9));
        CHECK(bb.lower <= bb.upper * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("json round trip") {
  Rng rng(3);
  auto f = random_poly(rng, 9);
  auto j = to_json(f);
  auto g = trigpoly_from_json(j);
  CHECK(g.nterms() == f.nterms());
  for (const auto& [xi, c] : f.terms()) CHECK(std::abs(g.bohr_coeff(xi) - c) == 0.0);

  auto fx = trigpolyx_from_json(j);
  CHECK(fx.nterms() == f.nterms());
}

TEST_CASE("dimension mismatch raises") {
  TrigPolyD a(1), b(2);
  CHECK_THROWS_AS(a + b, DimensionError);
  CHECK_THROWS_AS(a * b, DimensionError);
  CHECK_THROWS_AS(a.besicovitch_inner(b), DimensionError);
}

TEST_CASE("common period") {
  auto f = wave1d(Rational(1, 2)) + wave1d(Rational(3));
  CHECK(f.common_period().value() == doctest::Approx(2.0));
}
