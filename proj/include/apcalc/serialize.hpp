// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON file formats. Frequencies are exact rational strings; coefficients
// are doubles (exact-mode objects convert through the binary value of the
// double, which is itself a rational).

#ifndef APCALC_SERIALIZE_HPP
#define APCALC_SERIALIZE_HPP

#include <json.hpp>

#include "apcalc/trigpoly.hpp"

namespace apcalc {

using Json = nlohmann::json;

Json freq_to_json(const Frequency& xi);
Frequency freq_from_json(const Json& j, int dim, int bsize);

Json to_json(const TrigPolyD& f);
TrigPolyD trigpoly_from_json(const Json& j);
TrigPolyX trigpolyx_from_json(const Json& j);

// Exact conversion: every double is a rational.
ExactComplex exact_from_cplx(const Cplx& z);

}  // namespace apcalc

#endif
