// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed expression algebra for symbols a(x,xi) and amplitudes a(x,y,xi):
// atoms are trig polynomials in x (and y for amplitudes), monomials xi^alpha,
// bracket powers <xi>^m and complex constants, combined by sums, products,
// quotients and integer powers. The algebra is closed under exact
// differentiation in x, y and xi. Simplification is conservative: flatten,
// fold constants, drop structural zeros.
//
// Pure-xi expressions (no x/y atoms) form the XiExpr sublanguage; the
// is_xi_only() predicate identifies them.

#ifndef APCALC_SYMEXPR_HPP
#define APCALC_SYMEXPR_HPP

#include <json.hpp>

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "apcalc/multiindex.hpp"
#include "apcalc/sampling.hpp"
#include "apcalc/trigpoly.hpp"

namespace apcalc::symb {

using apcalc::Cplx;

class SymbolExpr {
 public:
  enum class Kind { XPoly, YPoly, XiMono, Bracket, Const, Sum, Prod, Quot, IPow };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    int dim = 1;
    TrigPolyD poly{1};     // XPoly / YPoly
    MultiIndex alpha;      // XiMono
    double bracket_m = 0;  // Bracket
    Cplx cval{0, 0};       // Const
    std::vector<NodePtr> kids;  // Sum / Prod
    NodePtr num, den;           // Quot
    NodePtr base;               // IPow
    int expo = 1;               // IPow, >= 2
  };

  SymbolExpr() = default;

  // Atoms.
  static SymbolExpr xpoly(TrigPolyD p);
  static SymbolExpr ypoly(TrigPolyD p);
  static SymbolExpr xi_mono(MultiIndex alpha);
  static SymbolExpr bracket(int dim, double m);
  static SymbolExpr constant(int dim, Cplx c);
  static SymbolExpr zero(int dim) { return constant(dim, Cplx(0, 0)); }
  static SymbolExpr one(int dim) { return constant(dim, Cplx(1, 0)); }

  // Combinators (simplifying).
  friend SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b);
  friend SymbolExpr operator/(const SymbolExpr& a, const SymbolExpr& b);
  SymbolExpr scaled(Cplx c) const;
  SymbolExpr pow_int(int n) const;

  // Exact derivatives.
  SymbolExpr dx(int axis) const;
  SymbolExpr dy(int axis) const;
  SymbolExpr dxi(int axis) const;
  SymbolExpr dx_multi(const MultiIndex& beta) const;
  SymbolExpr dy_multi(const MultiIndex& gamma) const;
  SymbolExpr dxi_multi(const MultiIndex& alpha) const;

  // Structural maps.
  SymbolExpr subst_xi_neg() const;   // xi -> -xi
  SymbolExpr subst_y_to_x() const;   // y := x (amplitude diagonal)
  SymbolExpr swap_xy() const;        // x <-> y
  SymbolExpr conjugate() const;      // complex conjugate as a function on reals
  SymbolExpr subst_xi(std::span<const double> xi) const;  // freeze xi numerically

  Cplx eval(std::span<const double> x, std::span<const double> xi) const;
  Cplx eval(std::span<const double> x, std::span<const double> xi,
            std::span<const double> y) const;

  int dim() const { return node_ ? node_->dim : 1; }
  int nvars() const { return has_y() ? 3 : 2; }
  bool has_y() const;
  bool has_x() const;
  bool is_xi_only() const { return !has_x() && !has_y(); }
  std::optional<Cplx> as_const() const;
  bool is_zero() const;
  size_t node_count() const;

  // Collapse an x-only expression (xi already substituted, no y) to a trig
  // polynomial; empty when quotients or brackets survive.
  std::optional<TrigPolyD> to_trigpoly() const;

  // Decomposition a(x,xi) = sum_mu g_mu(xi) e^{2 pi i mu.x} for expressions
  // whose x dependence enters only through trig-poly factors in sums and
  // products. Throws InputError otherwise.
  std::vector<std::pair<Frequency, SymbolExpr>> modulated_decomposition() const;

  // Same over the y variable: a(x,y,xi) = sum_mu g_mu(x,xi) e^{2 pi i mu.y}.
  std::vector<std::pair<Frequency, SymbolExpr>> y_modulated_decomposition() const;

  // Common period of all x-atoms (quasi-period heuristic fallback 8).
  double x_period_hint() const;

  const NodePtr& node() const { return node_; }
  static SymbolExpr from_node(NodePtr n) { return SymbolExpr(std::move(n)); }

  nlohmann::json to_json() const;
  static SymbolExpr from_json(const nlohmann::json& j);

 private:
  explicit SymbolExpr(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
};

// Symbol class parameters (m, rho, delta, s, C, B, M).
struct ClassParams {
  double m = 0;
  double rho = 1;
  double delta = 0;
  double s = 1;
  double C = 1;
  double B = 1;
  int M = 1;

  void validate(int dim) const {
    if (!(rho > 0 && rho <= 1)) throw InputError("ClassParams: rho in (0,1]");
    if (!(delta >= 0 && rho > delta)) throw InputError("ClassParams: need 0 <= delta < rho");
    if (!(s >= 1)) throw InputError("ClassParams: s >= 1");
    if (!(s * (rho - delta) >= 1)) throw InputError("ClassParams: s(rho-delta) >= 1");
    if (!(C > 0 && B > 0)) throw InputError("ClassParams: C, B > 0");
    if (!(2 * M > dim)) throw InputError("ClassParams: M > d/2");
  }
};

struct ClassCheckReport {
  bool pass = false;
  double worst_ratio = 0;      // max |d^a d^b a| / bound over the sample
  double fitted_C = 0;         // smallest C passing on this sample
  MultiIndex worst_alpha, worst_beta;
  std::vector<double> worst_x, worst_xi;
  int pairs_checked = 0;
  size_t points_checked = 0;
};

// Checks the two-regime symbol class estimates for all xi-derivatives alpha
// and x-derivatives beta with |alpha|+|beta| <= max_order, on log-spaced
// xi rays and an x grid over one quasi-period.
ClassCheckReport verify_class(const SymbolExpr& a, const ClassParams& params, int max_order,
                              const RaySampler& rays, int x_points_per_axis = 9);

}  // namespace apcalc::symb

#endif
