// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#ifndef APCALC_MULTIINDEX_HPP
#define APCALC_MULTIINDEX_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace apcalc {

using MultiIndex = std::vector<int>;

inline int mi_order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

inline std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

inline std::uint64_t mi_factorial(const MultiIndex& a) {
  std::uint64_t f = 1;
  for (int ai : a) f *= factorial_u64(ai);
  return f;
}

inline std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * static_cast<std::uint64_t>(n - k + i) / i;
  return b;
}

inline bool mi_leq(const MultiIndex& a, const MultiIndex& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline MultiIndex mi_sub(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

// All multi-indices of dimension d with |alpha| == order, lexicographic.
inline std::vector<MultiIndex> multiindices_of_order(int d, int order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  std::function<void(int, int)> rec = [&](int axis, int rem) {
    if (axis == d - 1) {
      cur[axis] = rem;
      out.push_back(cur);
      return;
    }
    for (int k = rem; k >= 0; --k) {
      cur[axis] = k;
      rec(axis + 1, rem - k);
    }
  };
  if (d == 0) return out;
  rec(0, order);
  return out;
}

inline std::vector<MultiIndex> multiindices_up_to(int d, int max_order) {
  std::vector<MultiIndex> out;
  for (int j = 0; j <= max_order; ++j) {
    auto v = multiindices_of_order(d, j);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// Sub-multi-indices beta <= alpha.
inline std::vector<MultiIndex> multiindices_below(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  MultiIndex cur(alpha.size(), 0);
  std::function<void(size_t)> rec = [&](size_t axis) {
    if (axis == alpha.size()) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= alpha[axis]; ++k) {
      cur[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

inline std::uint64_t mi_binomial(const MultiIndex& a, const MultiIndex& b) {
  std::uint64_t r = 1;
  for (size_t i = 0; i < a.size(); ++i) r *= binomial_u64(a[i], b[i]);
  return r;
}

}  // namespace apcalc

#endif
