// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "apcalc/kernels.hpp"
#include "apcalc/rng.hpp"

using namespace apcalc;
using kern::Cplx;

namespace {

kern::TrigPlan random_plan(Rng& rng, int dim, size_t nterms) {
  kern::TrigPlan p;
  p.dim = dim;
  p.nterms = nterms;
  for (size_t k = 0; k < nterms; ++k) {
    for (int a = 0; a < dim; ++a) p.w.push_back(rng.uniform(-40.0, 40.0));
    p.cre.push_back(rng.uniform(-2.0, 2.0));
    p.cim.push_back(rng.uniform(-2.0, 2.0));
  }
  return p;
}

}  // namespace

TEST_CASE("scalar and simd trig evaluation agree") {
  Rng rng(12345);
  for (int dim = 1; dim <= 3; ++dim) {
    auto plan = random_plan(rng, dim, 7);
    const size_t npts = 1003;
    std::vector<double> pts(npts * dim);
    for (auto& x : pts) x = rng.uniform(-200.0, 200.0);

    std::vector<Cplx> ref(npts), got(npts);
    kern::force_isa(kern::Isa::scalar);
    kern::eval_trig_batch(plan, pts.data(), npts, ref.data());
    if (kern::avx2_available()) {
      kern::force_isa(kern::Isa::avx2);
      kern::eval_trig_batch(plan, pts.data(), npts, got.data());
      double amp = 0;
      for (size_t k = 0; k < plan.nterms; ++k) amp += std::hypot(plan.cre[k], plan.cim[k]);
      for (size_t p = 0; p < npts; ++p) CHECK(std::abs(ref[p] - got[p]) <= 1e-11 * amp);
    }
    kern::force_isa(std::nullopt);
  }
}

TEST_CASE("simd sincos handles large phases via fallback") {
  if (!kern::avx2_available()) return;
  kern::TrigPlan p;
  p.dim = 1;
  p.nterms = 1;
  p.w = {3.0e8};  // beyond the Cody-Waite comfort zone
  p.cre = {1.0};
  p.cim = {0.0};
  std::vector<double> pts = {1.0, 2.0, 3.0, 4.0};
  std::vector<Cplx> ref(4), got(4);
  kern::force_isa(kern::Isa::scalar);
  kern::eval_trig_batch(p, pts.data(), 4, ref.data());
  kern::force_isa(kern::Isa::avx2);
  kern::eval_trig_batch(p, pts.data(), 4, got.data());
  kern::force_isa(std::nullopt);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ref[i] - got[i]) < 1e-9);
}

TEST_CASE("reductions agree across implementations") {
  Rng rng(777);
  const size_t n = 1001;
  std::vector<Cplx> v(n);
  std::vector<double> w(n), r(n);
  for (size_t i = 0; i < n; ++i) {
    v[i] = Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    w[i] = rng.uniform(-1, 1);
    r[i] = rng.uniform(-5, 5);
  }
  kern::force_isa(kern::Isa::scalar);
  const Cplx ws = kern::weighted_sum(v.data(), w.data(), n);
  const double s2 = kern::sum_abs2(v.data(), n);
  const double ma = kern::max_abs(r.data(), n);
  if (kern::avx2_available()) {
    kern::force_isa(kern::Isa::avx2);
    CHECK(std::abs(kern::weighted_sum(v.data(), w.data(), n) - ws) < 1e-12 * n);
    CHECK(kern::sum_abs2(v.data(), n) == doctest::Approx(s2).epsilon(1e-13));
    CHECK(kern::max_abs(r.data(), n) == ma);
  }
  kern::force_isa(std::nullopt);
}
