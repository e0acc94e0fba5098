// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact coefficient arithmetic for the symbolic oracle paths: the field
// Q(pi) of rational functions in pi with rational coefficients, and complex
// numbers over it. This is the smallest field that is closed under all
// coefficient operations the library performs exactly (derivatives bring in
// powers of 2*pi*i, composition brings (2*pi*i)^{-j}, and inversion of
// constant-coefficient symbol values brings quotients).

#ifndef APCALC_EXACT_HPP
#define APCALC_EXACT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "apcalc/rational.hpp"

namespace apcalc {

using Cplx = std::complex<double>;

// Dense polynomial in one indeterminate over Q. coeffs[k] multiplies pi^k.
class PolyQ {
 public:
  PolyQ() = default;
  explicit PolyQ(Rational c) {
    if (c != 0) c_.push_back(std::move(c));
  }
  static PolyQ monomial(const Rational& c, int k) {
    PolyQ p;
    if (c != 0) {
      p.c_.assign(k + 1, Rational(0));
      p.c_[k] = c;
    }
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }

  friend PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    PolyQ r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
    r.trim();
    return r;
  }
  friend PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    PolyQ r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i] -= b.c_[i];
    r.trim();
    return r;
  }
  friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    PolyQ r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.trim();
    return r;
  }
  PolyQ operator-() const {
    PolyQ r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.c_ == b.c_; }

  void scale(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return;
    }
    for (auto& c : c_) c *= s;
  }

  // Remainder of *this modulo b (b nonzero).
  PolyQ rem(const PolyQ& b) const {
    PolyQ r = *this;
    const int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
      Rational q = r.c_.back() / b.c_.back();
      int shift = r.degree() - db;
      for (int i = 0; i <= db; ++i) r.c_[i + shift] -= q * b.c_[i];
      r.trim();
    }
    return r;
  }

  static PolyQ gcd(PolyQ a, PolyQ b) {
    while (!b.is_zero()) {
      PolyQ r = a.rem(b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) a.scale(Rational(1) / a.c_.back());  // monic
    return a;
  }

  // Exact division, valid when b divides *this.
  PolyQ div_exact(const PolyQ& b) const {
    PolyQ q, r = *this;
    const int db = b.degree();
    if (r.is_zero()) return q;
    q.c_.assign(r.degree() - db + 1, Rational(0));
    while (!r.is_zero() && r.degree() >= db) {
      Rational f = r.c_.back() / b.c_.back();
      int shift = r.degree() - db;
      q.c_[shift] = f;
      for (int i = 0; i <= db; ++i) r.c_[i + shift] -= f * b.c_[i];
      r.trim();
    }
    if (!r.is_zero()) throw std::logic_error("PolyQ::div_exact: not divisible");
    return q;
  }

  double eval(double x) const {
    double v = 0;
    for (size_t i = c_.size(); i-- > 0;) v = v * x + to_double(c_[i]);
    return v;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

// Element of Q(pi), kept reduced with a monic denominator.
class ExactScalar {
 public:
  ExactScalar() : num_(), den_(PolyQ(Rational(1))) {}
  ExactScalar(const Rational& r) : num_(PolyQ(r)), den_(PolyQ(Rational(1))) {}  // NOLINT
  ExactScalar(long long n) : ExactScalar(Rational(n)) {}                        // NOLINT

  static ExactScalar pi_pow(int k, const Rational& c = Rational(1)) {
    ExactScalar s;
    if (k >= 0) {
      s.num_ = PolyQ::monomial(c, k);
      s.den_ = PolyQ(Rational(1));
    } else {
      s.num_ = PolyQ(c);
      s.den_ = PolyQ::monomial(Rational(1), -k);
    }
    return s;
  }

  bool is_zero() const { return num_.is_zero(); }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
    return make(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    return make(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.is_zero()) throw std::domain_error("ExactScalar: division by zero");
    return make(a.num_ * b.den_, a.den_ * b.num_);
  }
  ExactScalar operator-() const {
    ExactScalar r = *this;
    r.num_ = -r.num_;
    return r;
  }
  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  double to_double() const { return num_.eval(std::numbers::pi) / den_.eval(std::numbers::pi); }

 private:
  static ExactScalar make(PolyQ num, PolyQ den) {
    ExactScalar s;
    if (num.is_zero()) {
      s.num_ = PolyQ();
      s.den_ = PolyQ(Rational(1));
      return s;
    }
    PolyQ g = PolyQ::gcd(num, den);
    if (g.degree() > 0) {
      num = num.div_exact(g);
      den = den.div_exact(g);
    }
    Rational lead = den.coeffs().back();
    if (lead != 1) {
      num.scale(Rational(1) / lead);
      den.scale(Rational(1) / lead);
    }
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    return s;
  }
  PolyQ num_, den_;
};

struct ExactComplex {
  ExactScalar re, im;

  ExactComplex() = default;
  ExactComplex(ExactScalar r, ExactScalar i = ExactScalar()) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(const Rational& r) : re(r) {}  // NOLINT
  ExactComplex(long long n) : re(Rational(n)) {}  // NOLINT

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Cplx to_complex() const { return {re.to_double(), im.to_double()}; }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    ExactScalar n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw std::domain_error("ExactComplex: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  ExactComplex operator-() const { return {-re, -im}; }
  ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
  ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
  ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  ExactComplex conj() const { return {re, -im}; }
  ExactComplex times_i(int k = 1) const {
    ExactComplex v = *this;
    for (int j = ((k % 4) + 4) % 4; j > 0; --j) v = ExactComplex(-v.im, v.re);
    return v;
  }
  ExactScalar abs2() const { return re * re + im * im; }
};

// (2*pi*i)^j as an exact complex, j may be negative.
inline ExactComplex two_pi_i_pow(int j) {
  Rational two_pow = 1;
  for (int k = 0; k < std::abs(j); ++k) two_pow *= 2;
  ExactScalar mag = ExactScalar::pi_pow(j, j >= 0 ? two_pow : Rational(1) / two_pow);
  return ExactComplex(mag).times_i(j);
}

}  // namespace apcalc

#endif
