// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apcalc/exact.hpp"

using namespace apcalc;

TEST_CASE("Q(pi) field arithmetic") {
  ExactScalar pi = ExactScalar::pi_pow(1);
  ExactScalar x = (pi * pi + ExactScalar(Rational(1, 2))) / (pi - ExactScalar(3));
  ExactScalar y = x * (pi - ExactScalar(3));
  CHECK(y == pi * pi + ExactScalar(Rational(1, 2)));
  CHECK((x - x).is_zero());

  // (pi^2 - 9)/(pi - 3) reduces to pi + 3
  ExactScalar z = (pi * pi - ExactScalar(9)) / (pi - ExactScalar(3));
  CHECK(z == pi + ExactScalar(3));

  CHECK(ExactScalar::pi_pow(-2).to_double() ==
        doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)));
}

TEST_CASE("exact complex and powers of 2 pi i") {
  ExactComplex i(ExactScalar(0), ExactScalar(1));
  CHECK((i * i) == ExactComplex(ExactScalar(-1)));
  CHECK(two_pi_i_pow(2) == ExactComplex(ExactScalar::pi_pow(2, Rational(-4))));
  CHECK((two_pi_i_pow(3) * two_pi_i_pow(-3)) == ExactComplex(ExactScalar(1)));

  ExactComplex a(ExactScalar(Rational(3)), ExactScalar(Rational(4)));
  ExactComplex inv = ExactComplex(ExactScalar(1)) / a;
  CHECK((a * inv) == ExactComplex(ExactScalar(1)));
  CHECK(a.times_i(4) == a);
  CHECK(a.times_i(1) == ExactComplex(ExactScalar(Rational(-4)), ExactScalar(Rational(3))));

  const Cplx z = two_pi_i_pow(-1).to_complex();
  CHECK(z.real() == doctest::Approx(0.0));
  CHECK(z.imag() == doctest::Approx(-1.0 / (2 * std::numbers::pi)));
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(ExactScalar(1) / ExactScalar(0), std::domain_error);
  CHECK_THROWS_AS(ExactComplex(ExactScalar(1)) / ExactComplex(), std::domain_error);
}
