// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/serialize.hpp"

namespace apcalc {

namespace {

Json rat_pair(const Rational& q) {
  return Json::array({numerator(q).str(), denominator(q).str()});
}

Rational rat_from(const Json& j) {
  if (j.is_array()) {
    BigInt num(j.at(0).get<std::string>());
    BigInt den(j.at(1).get<std::string>());
    if (den == 0) throw InputError("frequency: zero denominator");
    return Rational(num, den);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw InputError("frequency: expected rational as [\"num\",\"den\"] or string");
}

}  // namespace

ExactComplex exact_from_cplx(const Cplx& z) {
  return ExactComplex(ExactScalar(Rational(z.real())), ExactScalar(Rational(z.imag())));
}

Json freq_to_json(const Frequency& xi) {
  Json arr = Json::array();
  for (int a = 0; a < xi.dim(); ++a) {
    if (xi.basis_size() == 1) {
      arr.push_back(rat_pair(xi.coord(a, 0)));
    } else {
      Json comp = Json::array();
      for (int b = 0; b < xi.basis_size(); ++b) comp.push_back(rat_pair(xi.coord(a, b)));
      arr.push_back(comp);
    }
  }
  return arr;
}

Frequency freq_from_json(const Json& j, int dim, int bsize) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InputError("frequency: expected array of length dim");
  Frequency xi(dim, bsize);
  for (int a = 0; a < dim; ++a) {
    const Json& comp = j.at(a);
    const bool nested = comp.is_array() && !comp.empty() && comp.at(0).is_array();
    if (nested) {
      if (static_cast<int>(comp.size()) != bsize)
        throw InputError("frequency: coordinate count does not match basis size");
      for (int b = 0; b < bsize; ++b) xi.coord(a, b) = rat_from(comp.at(b));
    } else {
      xi.coord(a, 0) = rat_from(comp);
    }
  }
  return xi;
}

Json to_json(const TrigPolyD& f) {
  Json j;
  j["dim"] = f.dim();
  j["basis"] = f.basis()->names();
  Json terms = Json::array();
  for (const auto& [xi, c] : f.terms()) {
    Json t;
    t["freq"] = freq_to_json(xi);
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

namespace {

template <class TP>
TP poly_from_json_impl(const Json& j) {
  const int dim = j.at("dim").get<int>();
  std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial();
  if (j.contains("basis")) {
    auto names = j.at("basis").get<std::vector<std::string>>();
    if (!(names.size() == 1 && names[0] == "1"))
      basis = std::make_shared<const FreqBasis>(names);
  }
  TP f(dim, basis);
  for (const auto& t : j.at("terms")) {
    Frequency xi = freq_from_json(t.at("freq"), dim, static_cast<int>(basis->size()));
    Cplx c(t.at("re").get<double>(), t.value("im", 0.0));
    if constexpr (TP::exact_mode)
      f.add_term(std::move(xi), exact_from_cplx(c));
    else
      f.add_term(std::move(xi), c);
  }
  return f;
}

}  // namespace

TrigPolyD trigpoly_from_json(const Json& j) { return poly_from_json_impl<TrigPolyD>(j); }
TrigPolyX trigpolyx_from_json(const Json& j) { return poly_from_json_impl<TrigPolyX>(j); }

}  // namespace apcalc
