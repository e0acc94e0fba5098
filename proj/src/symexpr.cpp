// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#include "apcalc/symexpr.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>

#include "apcalc/serialize.hpp"

namespace apcalc::symb {

using Kind = SymbolExpr::Kind;
using Node = SymbolExpr::Node;
using NodePtr = SymbolExpr::NodePtr;

namespace {

NodePtr make_const(int dim, Cplx c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->dim = dim;
  n->cval = c;
  return n;
}

std::optional<Cplx> const_of(const NodePtr& n) {
  if (n->kind == Kind::Const) return n->cval;
  return std::nullopt;
}

bool is_zero_node(const NodePtr& n) {
  auto c = const_of(n);
  return c && *c == Cplx(0, 0);
}

NodePtr make_sum(int dim, std::vector<NodePtr> kids) {
  std::vector<NodePtr> flat;
  Cplx cacc(0, 0);
  for (auto& k : kids) {
    if (k->kind == Kind::Sum) {
      for (const auto& kk : k->kids) {
        if (auto c = const_of(kk))
          cacc += *c;
        else
          flat.push_back(kk);
      }
    } else if (auto c = const_of(k)) {
      cacc += *c;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (cacc != Cplx(0, 0)) flat.push_back(make_const(dim, cacc));
  if (flat.empty()) return make_const(dim, Cplx(0, 0));
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->dim = dim;
  n->kids = std::move(flat);
  return n;
}

NodePtr make_prod(int dim, std::vector<NodePtr> kids) {
  std::vector<NodePtr> flat;
  Cplx cacc(1, 0);
  for (auto& k : kids) {
    if (k->kind == Kind::Prod) {
      for (const auto& kk : k->kids) {
        if (auto c = const_of(kk))
          cacc *= *c;
        else
          flat.push_back(kk);
      }
    } else if (auto c = const_of(k)) {
      cacc *= *c;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (cacc == Cplx(0, 0)) return make_const(dim, Cplx(0, 0));
  // Structural zero: a factor that is an empty trig polynomial.
  for (const auto& k : flat)
    if ((k->kind == Kind::XPoly || k->kind == Kind::YPoly) && k->poly.is_zero())
      return make_const(dim, Cplx(0, 0));
  if (flat.empty()) return make_const(dim, cacc);
  if (cacc != Cplx(1, 0)) flat.insert(flat.begin(), make_const(dim, cacc));
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->dim = dim;
  n->kids = std::move(flat);
  return n;
}

NodePtr make_quot(int dim, NodePtr num, NodePtr den) {
  if (is_zero_node(den)) throw InputError("SymbolExpr: division by structural zero");
  if (is_zero_node(num)) return make_const(dim, Cplx(0, 0));
  if (auto c = const_of(den)) return make_prod(dim, {make_const(dim, Cplx(1, 0) / *c), num});
  if (num.get() == den.get()) return make_const(dim, Cplx(1, 0));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quot;
  n->dim = dim;
  n->num = std::move(num);
  n->den = std::move(den);
  return n;
}

NodePtr make_ipow(int dim, NodePtr base, int expo) {
  if (expo == 0) return make_const(dim, Cplx(1, 0));
  if (expo == 1) return base;
  if (auto c = const_of(base)) {
    Cplx v(1, 0);
    for (int k = 0; k < std::abs(expo); ++k) v *= *c;
    if (expo < 0) v = Cplx(1, 0) / v;
    return make_const(dim, v);
  }
  if (expo < 0)
    return make_quot(dim, make_const(dim, Cplx(1, 0)), make_ipow(dim, std::move(base), -expo));
  auto n = std::make_shared<Node>();
  n->kind = Kind::IPow;
  n->dim = dim;
  n->base = std::move(base);
  n->expo = expo;
  return n;
}

void check_same_dim(const NodePtr& a, const NodePtr& b, const char* op) {
  if (a->dim != b->dim)
    throw DimensionError(std::string("SymbolExpr ") + op + ": dimension mismatch");
}

// ---- differentiation ------------------------------------------------------

enum class Var { x, y, xi };

NodePtr diff(const NodePtr& n, Var var, int axis);

NodePtr diff_kids_product(const NodePtr& n, Var var, int axis) {
  std::vector<NodePtr> terms;
  for (size_t i = 0; i < n->kids.size(); ++i) {
    NodePtr di = diff(n->kids[i], var, axis);
    if (is_zero_node(di)) continue;
    std::vector<NodePtr> factors;
    factors.reserve(n->kids.size());
    for (size_t j = 0; j < n->kids.size(); ++j) factors.push_back(j == i ? di : n->kids[j]);
    terms.push_back(make_prod(n->dim, std::move(factors)));
  }
  return make_sum(n->dim, std::move(terms));
}

NodePtr diff(const NodePtr& n, Var var, int axis) {
  const int d = n->dim;
  switch (n->kind) {
    case Kind::Const:
      return make_const(d, Cplx(0, 0));
    case Kind::XPoly: {
      if (var != Var::x) return make_const(d, Cplx(0, 0));
      MultiIndex e(d, 0);
      e[axis] = 1;
      auto m = std::make_shared<Node>();
      m->kind = Kind::XPoly;
      m->dim = d;
      m->poly = n->poly.derivative(e);
      if (m->poly.is_zero()) return make_const(d, Cplx(0, 0));
      return m;
    }
    case Kind::YPoly: {
      if (var != Var::y) return make_const(d, Cplx(0, 0));
      MultiIndex e(d, 0);
      e[axis] = 1;
      auto m = std::make_shared<Node>();
      m->kind = Kind::YPoly;
      m->dim = d;
      m->poly = n->poly.derivative(e);
      if (m->poly.is_zero()) return make_const(d, Cplx(0, 0));
      return m;
    }
    case Kind::XiMono: {
      if (var != Var::xi || n->alpha[axis] == 0) return make_const(d, Cplx(0, 0));
      auto m = std::make_shared<Node>();
      m->kind = Kind::XiMono;
      m->dim = d;
      m->alpha = n->alpha;
      m->alpha[axis] -= 1;
      return make_prod(d, {make_const(d, Cplx(n->alpha[axis], 0)), m});
    }
    case Kind::Bracket: {
      if (var != Var::xi || n->bracket_m == 0) return make_const(d, Cplx(0, 0));
      // d/dxi_i <xi>^m = m xi_i <xi>^{m-2}
      auto mono = std::make_shared<Node>();
      mono->kind = Kind::XiMono;
      mono->dim = d;
      mono->alpha.assign(d, 0);
      mono->alpha[axis] = 1;
      auto br = std::make_shared<Node>();
      br->kind = Kind::Bracket;
      br->dim = d;
      br->bracket_m = n->bracket_m - 2;
      return make_prod(d, {make_const(d, Cplx(n->bracket_m, 0)), mono, br});
    }
    case Kind::Sum: {
      std::vector<NodePtr> kids;
      kids.reserve(n->kids.size());
      for (const auto& k : n->kids) kids.push_back(diff(k, var, axis));
      return make_sum(d, std::move(kids));
    }
    case Kind::Prod:
      return diff_kids_product(n, var, axis);
    case Kind::Quot: {
      NodePtr dn = diff(n->num, var, axis);
      NodePtr dd = diff(n->den, var, axis);
      if (is_zero_node(dd)) return make_quot(d, dn, n->den);
      // (f/g)' = f'/g - f g'/g^2
      NodePtr t1 = make_quot(d, dn, n->den);
      NodePtr t2 = make_quot(d, make_prod(d, {make_const(d, Cplx(-1, 0)), n->num, dd}),
                             make_ipow(d, n->den, 2));
      return make_sum(d, {t1, t2});
    }
    case Kind::IPow: {
      NodePtr db = diff(n->base, var, axis);
      if (is_zero_node(db)) return make_const(d, Cplx(0, 0));
      return make_prod(d, {make_const(d, Cplx(n->expo, 0)),
                           make_ipow(d, n->base, n->expo - 1), db});
    }
  }
  throw std::logic_error("diff: unreachable");
}

// ---- recursive utilities ---------------------------------------------------

template <class F>
void visit(const NodePtr& n, F&& f) {
  f(n);
  switch (n->kind) {
    case Kind::Sum:
    case Kind::Prod:
      for (const auto& k : n->kids) visit(k, f);
      break;
    case Kind::Quot:
      visit(n->num, f);
      visit(n->den, f);
      break;
    case Kind::IPow:
      visit(n->base, f);
      break;
    default:
      break;
  }
}

// Rebuild with a node-level transform applied to atoms.
NodePtr map_atoms(const NodePtr& n, const std::function<NodePtr(const NodePtr&)>& f) {
  switch (n->kind) {
    case Kind::Sum: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(map_atoms(k, f));
      return make_sum(n->dim, std::move(kids));
    }
    case Kind::Prod: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(map_atoms(k, f));
      return make_prod(n->dim, std::move(kids));
    }
    case Kind::Quot:
      return make_quot(n->dim, map_atoms(n->num, f), map_atoms(n->den, f));
    case Kind::IPow:
      return make_ipow(n->dim, map_atoms(n->base, f), n->expo);
    default:
      return f(n);
  }
}

Cplx eval_node(const NodePtr& n, std::span<const double> x, std::span<const double> xi,
               std::span<const double> y) {
  switch (n->kind) {
    case Kind::Const:
      return n->cval;
    case Kind::XPoly:
      return n->poly.eval(x);
    case Kind::YPoly:
      if (y.empty()) throw InputError("SymbolExpr::eval: amplitude needs a y point");
      return n->poly.eval(y);
    case Kind::XiMono: {
      Cplx v(1, 0);
      for (int a = 0; a < n->dim; ++a)
        for (int k = 0; k < n->alpha[a]; ++k) v *= xi[a];
      return v;
    }
    case Kind::Bracket: {
      double s = 1;
      for (int a = 0; a < n->dim; ++a) s += xi[a] * xi[a];
      return std::pow(s, n->bracket_m / 2.0);
    }
    case Kind::Sum: {
      Cplx s(0, 0);
      for (const auto& k : n->kids) s += eval_node(k, x, xi, y);
      return s;
    }
    case Kind::Prod: {
      Cplx p(1, 0);
      for (const auto& k : n->kids) p *= eval_node(k, x, xi, y);
      return p;
    }
    case Kind::Quot: {
      Cplx den = eval_node(n->den, x, xi, y);
      if (den == Cplx(0, 0) || !std::isfinite(std::abs(den))) {
        std::vector<double> pt(x.begin(), x.end());
        pt.insert(pt.end(), xi.begin(), xi.end());
        throw EvalDomainError("SymbolExpr::eval: denominator vanishes", pt);
      }
      return eval_node(n->num, x, xi, y) / den;
    }
    case Kind::IPow: {
      Cplx b = eval_node(n->base, x, xi, y);
      Cplx v(1, 0);
      for (int k = 0; k < n->expo; ++k) v *= b;
      return v;
    }
  }
  throw std::logic_error("eval: unreachable");
}

}  // namespace

// ---- factories -------------------------------------------------------------

SymbolExpr SymbolExpr::xpoly(TrigPolyD p) {
  if (p.is_zero()) return zero(p.dim());
  if (p.nterms() == 1 && p.terms().begin()->first.is_zero())
    return constant(p.dim(), p.terms().begin()->second);
  auto n = std::make_shared<Node>();
  n->kind = Kind::XPoly;
  n->dim = p.dim();
  n->poly = std::move(p);
  return SymbolExpr(n);
}

SymbolExpr SymbolExpr::ypoly(TrigPolyD p) {
  if (p.is_zero()) return zero(p.dim());
  if (p.nterms() == 1 && p.terms().begin()->first.is_zero())
    return constant(p.dim(), p.terms().begin()->second);
  auto n = std::make_shared<Node>();
  n->kind = Kind::YPoly;
  n->dim = p.dim();
  n->poly = std::move(p);
  return SymbolExpr(n);
}

SymbolExpr SymbolExpr::xi_mono(MultiIndex alpha) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::XiMono;
  n->dim = static_cast<int>(alpha.size());
  if (mi_order(alpha) == 0) return one(n->dim);
  n->alpha = std::move(alpha);
  return SymbolExpr(n);
}

SymbolExpr SymbolExpr::bracket(int dim, double m) {
  if (m == 0) return one(dim);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bracket;
  n->dim = dim;
  n->bracket_m = m;
  return SymbolExpr(n);
}

SymbolExpr SymbolExpr::constant(int dim, Cplx c) { return SymbolExpr(make_const(dim, c)); }

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b) {
  check_same_dim(a.node(), b.node(), "+");
  return SymbolExpr::from_node(make_sum(a.dim(), {a.node(), b.node()}));
}

SymbolExpr operator-(const SymbolExpr& a, const SymbolExpr& b) {
  return a + b.scaled(Cplx(-1, 0));
}

SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) {
  check_same_dim(a.node(), b.node(), "*");
  return SymbolExpr::from_node(make_prod(a.dim(), {a.node(), b.node()}));
}

SymbolExpr operator/(const SymbolExpr& a, const SymbolExpr& b) {
  check_same_dim(a.node(), b.node(), "/");
  return SymbolExpr::from_node(make_quot(a.dim(), a.node(), b.node()));
}

SymbolExpr SymbolExpr::scaled(Cplx c) const {
  return from_node(make_prod(dim(), {make_const(dim(), c), node_}));
}

SymbolExpr SymbolExpr::pow_int(int n) const { return from_node(make_ipow(dim(), node_, n)); }

// ---- derivatives -----------------------------------------------------------

SymbolExpr SymbolExpr::dx(int axis) const { return from_node(diff(node_, Var::x, axis)); }
SymbolExpr SymbolExpr::dy(int axis) const { return from_node(diff(node_, Var::y, axis)); }
SymbolExpr SymbolExpr::dxi(int axis) const { return from_node(diff(node_, Var::xi, axis)); }

SymbolExpr SymbolExpr::dx_multi(const MultiIndex& beta) const {
  SymbolExpr r = *this;
  for (int a = 0; a < dim(); ++a)
    for (int k = 0; k < beta[a]; ++k) r = r.dx(a);
  return r;
}

SymbolExpr SymbolExpr::dy_multi(const MultiIndex& gamma) const {
  SymbolExpr r = *this;
  for (int a = 0; a < dim(); ++a)
    for (int k = 0; k < gamma[a]; ++k) r = r.dy(a);
  return r;
}

SymbolExpr SymbolExpr::dxi_multi(const MultiIndex& alpha) const {
  SymbolExpr r = *this;
  for (int a = 0; a < dim(); ++a)
    for (int k = 0; k < alpha[a]; ++k) r = r.dxi(a);
  return r;
}

// ---- structural maps -------------------------------------------------------

SymbolExpr SymbolExpr::subst_xi_neg() const {
  return from_node(map_atoms(node_, [](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::XiMono && mi_order(n->alpha) % 2 == 1) {
      auto m = std::make_shared<Node>(*n);
      return make_prod(n->dim, {make_const(n->dim, Cplx(-1, 0)), m});
    }
    return n;  // brackets and even monomials are even in xi
  }));
}

SymbolExpr SymbolExpr::subst_y_to_x() const {
  return from_node(map_atoms(node_, [](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::YPoly) {
      auto m = std::make_shared<Node>(*n);
      m->kind = Kind::XPoly;
      return m;
    }
    return n;
  }));
}

SymbolExpr SymbolExpr::swap_xy() const {
  return from_node(map_atoms(node_, [](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::XPoly || n->kind == Kind::YPoly) {
      auto m = std::make_shared<Node>(*n);
      m->kind = n->kind == Kind::XPoly ? Kind::YPoly : Kind::XPoly;
      return m;
    }
    return n;
  }));
}

SymbolExpr SymbolExpr::conjugate() const {
  return from_node(map_atoms(node_, [](const NodePtr& n) -> NodePtr {
    switch (n->kind) {
      case Kind::XPoly:
      case Kind::YPoly: {
        auto m = std::make_shared<Node>(*n);
        m->poly = n->poly.conj();
        return m;
      }
      case Kind::Const:
        return make_const(n->dim, std::conj(n->cval));
      default:
        return n;  // xi monomials and brackets are real on real arguments
    }
  }));
}

SymbolExpr SymbolExpr::subst_xi(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim())
    throw DimensionError("SymbolExpr::subst_xi: bad xi length");
  std::vector<double> v(xi.begin(), xi.end());
  return from_node(map_atoms(node_, [&v](const NodePtr& n) -> NodePtr {
    if (n->kind == Kind::XiMono || n->kind == Kind::Bracket) {
      Cplx val = eval_node(n, {}, std::span<const double>(v), {});
      return make_const(n->dim, val);
    }
    return n;
  }));
}

// ---- evaluation & queries --------------------------------------------------

Cplx SymbolExpr::eval(std::span<const double> x, std::span<const double> xi) const {
  return eval_node(node_, x, xi, {});
}

Cplx SymbolExpr::eval(std::span<const double> x, std::span<const double> xi,
                      std::span<const double> y) const {
  return eval_node(node_, x, xi, y);
}

bool SymbolExpr::has_y() const {
  bool found = false;
  visit(node_, [&](const NodePtr& n) { found |= n->kind == Kind::YPoly; });
  return found;
}

bool SymbolExpr::has_x() const {
  bool found = false;
  visit(node_, [&](const NodePtr& n) { found |= n->kind == Kind::XPoly; });
  return found;
}

std::optional<Cplx> SymbolExpr::as_const() const { return const_of(node_); }

bool SymbolExpr::is_zero() const { return is_zero_node(node_); }

size_t SymbolExpr::node_count() const {
  size_t c = 0;
  visit(node_, [&](const NodePtr&) { ++c; });
  return c;
}

std::optional<TrigPolyD> SymbolExpr::to_trigpoly() const {
  if (has_y()) return std::nullopt;
  std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial();
  visit(node_, [&](const NodePtr& n) {
    if (n->kind == Kind::XPoly) basis = n->poly.basis();
  });

  std::function<std::optional<TrigPolyD>(const NodePtr&)> rec =
      [&](const NodePtr& n) -> std::optional<TrigPolyD> {
    switch (n->kind) {
      case Kind::Const:
        return TrigPolyD::constant(n->dim, n->cval, basis);
      case Kind::XPoly:
        return n->poly;
      case Kind::Sum: {
        TrigPolyD acc(n->dim, basis);
        for (const auto& k : n->kids) {
          auto p = rec(k);
          if (!p) return std::nullopt;
          acc = acc + *p;
        }
        return acc;
      }
      case Kind::Prod: {
        TrigPolyD acc = TrigPolyD::constant(n->dim, Cplx(1, 0), basis);
        for (const auto& k : n->kids) {
          auto p = rec(k);
          if (!p) return std::nullopt;
          acc = acc * *p;
        }
        return acc;
      }
      case Kind::IPow: {
        auto b = rec(n->base);
        if (!b) return std::nullopt;
        TrigPolyD acc = TrigPolyD::constant(n->dim, Cplx(1, 0), basis);
        for (int k = 0; k < n->expo; ++k) acc = acc * *b;
        return acc;
      }
      case Kind::Quot: {
        auto nu = rec(n->num);
        auto de = rec(n->den);
        if (!nu || !de) return std::nullopt;
        if (de->nterms() == 1 && de->terms().begin()->first.is_zero())
          return nu->scaled(Cplx(1, 0) / de->terms().begin()->second);
        return std::nullopt;
      }
      default:
        return std::nullopt;  // xi-dependence not substituted
    }
  };
  return rec(node_);
}

namespace {

std::vector<std::pair<Frequency, SymbolExpr>> modulated_decomposition_impl(
    const SymbolExpr& expr, bool over_y) {
  const Kind atom_kind = over_y ? Kind::YPoly : Kind::XPoly;
  std::shared_ptr<const FreqBasis> basis = FreqBasis::trivial();
  int bsize = 1;
  visit(expr.node(), [&](const NodePtr& n) {
    if (n->kind == atom_kind) {
      basis = n->poly.basis();
      bsize = static_cast<int>(basis->size());
    }
  });
  const Frequency zero_mu(expr.dim(), bsize);
  auto is_plain = [&](const SymbolExpr& e) { return over_y ? !e.has_y() : !e.has_x(); };

  using Decomp = std::map<Frequency, SymbolExpr>;
  std::function<Decomp(const NodePtr&)> rec = [&](const NodePtr& n) -> Decomp {
    SymbolExpr self = SymbolExpr::from_node(n);
    if (is_plain(self)) return {{zero_mu, self}};
    if (n->kind == atom_kind) {
      Decomp d;
      for (const auto& [mu, c] : n->poly.terms())
        d.emplace(mu, SymbolExpr::constant(n->dim, c));
      return d;
    }
    switch (n->kind) {
      case Kind::Sum: {
        Decomp acc;
        for (const auto& k : n->kids)
          for (auto& [mu, g] : rec(k)) {
            auto it = acc.find(mu);
            if (it == acc.end())
              acc.emplace(mu, g);
            else
              it->second = it->second + g;
          }
        return acc;
      }
      case Kind::Prod: {
        Decomp acc{{zero_mu, SymbolExpr::one(n->dim)}};
        for (const auto& k : n->kids) {
          Decomp kd = rec(k);
          Decomp next;
          for (const auto& [mu1, g1] : acc)
            for (const auto& [mu2, g2] : kd) {
              Frequency mu = mu1 + mu2;
              SymbolExpr g = g1 * g2;
              auto it = next.find(mu);
              if (it == next.end())
                next.emplace(std::move(mu), std::move(g));
              else
                it->second = it->second + g;
            }
          acc = std::move(next);
        }
        return acc;
      }
      default:
        throw InputError(
            "modulated_decomposition: modulated dependence inside quotients/powers is not "
            "supported");
    }
  };
  auto d = rec(expr.node());
  std::vector<std::pair<Frequency, SymbolExpr>> out;
  out.reserve(d.size());
  for (auto& [mu, g] : d)
    if (!g.is_zero()) out.emplace_back(mu, std::move(g));
  return out;
}

}  // namespace

std::vector<std::pair<Frequency, SymbolExpr>> SymbolExpr::modulated_decomposition() const {
  if (has_y()) throw InputError("modulated_decomposition: amplitudes not supported");
  return modulated_decomposition_impl(*this, false);
}

std::vector<std::pair<Frequency, SymbolExpr>> SymbolExpr::y_modulated_decomposition() const {
  return modulated_decomposition_impl(*this, true);
}

double SymbolExpr::x_period_hint() const {
  BigInt den_lcm = 1, num_gcd = 0;
  bool rational = true;
  visit(node_, [&](const NodePtr& n) {
    if (n->kind != Kind::XPoly && n->kind != Kind::YPoly) return;
    if (!n->poly.basis()->is_trivial()) {
      rational = false;
      return;
    }
    for (const auto& [xi, c] : n->poly.terms())
      for (int a = 0; a < n->dim; ++a) {
        Rational q = xi.coord(a, 0);
        if (q == 0) continue;
        den_lcm = boost::multiprecision::lcm(den_lcm, denominator(q));
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numerator(q)));
      }
  });
  if (!rational || num_gcd == 0) return 8.0;
  double L = Rational(den_lcm, num_gcd).convert_to<double>();
  return std::min(L, 64.0);
}

// ---- json ------------------------------------------------------------------

nlohmann::json SymbolExpr::to_json() const {
  using nlohmann::json;
  std::function<json(const NodePtr&)> rec = [&](const NodePtr& n) -> json {
    switch (n->kind) {
      case Kind::XPoly:
        return json{{"trigpoly", apcalc::to_json(n->poly)}};
      case Kind::YPoly:
        return json{{"trigpoly_y", apcalc::to_json(n->poly)}};
      case Kind::XiMono:
        return json{{"xi_mono", {{"alpha", n->alpha}}}};
      case Kind::Bracket:
        return json{{"bracket", {{"m", n->bracket_m}, {"dim", n->dim}}}};
      case Kind::Const:
        return json{{"const", {{"re", n->cval.real()}, {"im", n->cval.imag()}, {"dim", n->dim}}}};
      case Kind::Sum: {
        json args = json::array();
        for (const auto& k : n->kids) args.push_back(rec(k));
        return json{{"op", "+"}, {"args", args}};
      }
      case Kind::Prod: {
        json args = json::array();
        for (const auto& k : n->kids) args.push_back(rec(k));
        return json{{"op", "*"}, {"args", args}};
      }
      case Kind::Quot:
        return json{{"op", "/"}, {"args", {rec(n->num), rec(n->den)}}};
      case Kind::IPow:
        return json{{"op", "pow"}, {"n", n->expo}, {"args", {rec(n->base)}}};
    }
    throw std::logic_error("to_json: unreachable");
  };
  return rec(node_);
}

SymbolExpr SymbolExpr::from_json(const nlohmann::json& j) {
  using nlohmann::json;
  if (j.contains("trigpoly")) return xpoly(trigpoly_from_json(j.at("trigpoly")));
  if (j.contains("trigpoly_y")) return ypoly(trigpoly_from_json(j.at("trigpoly_y")));
  if (j.contains("xi_mono"))
    return xi_mono(j.at("xi_mono").at("alpha").get<MultiIndex>());
  if (j.contains("bracket"))
    return bracket(j.at("bracket").value("dim", 1), j.at("bracket").at("m").get<double>());
  if (j.contains("const")) {
    const auto& c = j.at("const");
    return constant(c.value("dim", 1), Cplx(c.at("re").get<double>(), c.value("im", 0.0)));
  }
  if (!j.contains("op")) throw InputError("SymbolExpr::from_json: unknown node: " + j.dump());
  const std::string op = j.at("op").get<std::string>();
  std::vector<SymbolExpr> args;
  for (const auto& a : j.at("args")) args.push_back(from_json(a));
  if (args.empty()) throw InputError("SymbolExpr::from_json: empty args");
  if (op == "+") {
    SymbolExpr r = args[0];
    for (size_t i = 1; i < args.size(); ++i) r = r + args[i];
    return r;
  }
  if (op == "*") {
    SymbolExpr r = args[0];
    for (size_t i = 1; i < args.size(); ++i) r = r * args[i];
    return r;
  }
  if (op == "/") {
    if (args.size() != 2) throw InputError("SymbolExpr::from_json: / takes two args");
    return args[0] / args[1];
  }
  if (op == "pow") return args[0].pow_int(j.at("n").get<int>());
  throw InputError("SymbolExpr::from_json: unknown op " + op);
}

// ---- class verification ----------------------------------------------------

ClassCheckReport verify_class(const SymbolExpr& a, const ClassParams& params, int max_order,
                              const RaySampler& rays, int x_points_per_axis) {
  const int d = a.dim();
  params.validate(d);
  if (max_order > 6) throw InputError("verify_class: max_order <= 6");

  ClassCheckReport rep;
  const auto xs = x_grid(d, a.x_period_hint(), x_points_per_axis);

  // Derivatives are cached along the lexicographic chain.
  std::map<std::pair<MultiIndex, MultiIndex>, SymbolExpr> cache;
  cache.emplace(std::make_pair(MultiIndex(d, 0), MultiIndex(d, 0)), a);
  auto get_deriv = [&](const MultiIndex& alpha, const MultiIndex& beta) -> const SymbolExpr& {
    auto key = std::make_pair(alpha, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    for (int ax = 0; ax < d; ++ax) {
      if (alpha[ax] > 0) {
        MultiIndex am = alpha;
        am[ax] -= 1;
        auto pk = std::make_pair(am, beta);
        auto pit = cache.find(pk);
        if (pit != cache.end())
          return cache.emplace(key, pit->second.dxi(ax)).first->second;
      }
      if (beta[ax] > 0) {
        MultiIndex bm = beta;
        bm[ax] -= 1;
        auto pk = std::make_pair(alpha, bm);
        auto pit = cache.find(pk);
        if (pit != cache.end())
          return cache.emplace(key, pit->second.dx(ax)).first->second;
      }
    }
    throw std::logic_error("verify_class: derivative chain broken");
  };

  const double srd = params.s * (params.rho - params.delta);
  for (int total = 0; total <= max_order; ++total) {
    for (int na = 0; na <= total; ++na) {
      for (const auto& alpha : multiindices_of_order(d, na)) {        // xi-derivatives
        for (const auto& beta : multiindices_of_order(d, total - na)) {  // x-derivatives
          const SymbolExpr& g = get_deriv(alpha, beta);
          ++rep.pairs_checked;
          const double afact = static_cast<double>(mi_factorial(alpha));
          const double bfact = static_cast<double>(mi_factorial(beta));
          const double scale = std::pow(bfact, srd) * afact;
          const double cpow = 1.0 + na + (total - na);
          for (size_t di = 0; di < rays.directions.size(); ++di) {
            for (size_t ri = 0; ri < rays.radii.size(); ++ri) {
              const auto xi = rays.point(di, ri);
              double n2 = 1;
              for (double v : xi) n2 += v * v;
              const double bracket = std::sqrt(n2);
              const bool main_region = bracket >= params.B * std::pow(double(na), params.s);
              if (!main_region && na > 2 * params.M) continue;
              const double weight =
                  main_region
                      ? std::pow(bracket, params.m - params.rho * na + params.delta * (total - na))
                      : 1.0;
              for (const auto& x : xs) {
                const double val = std::abs(g.eval(x, xi));
                ++rep.points_checked;
                const double bound = std::pow(params.C, cpow) * scale * weight;
                const double ratio = val / bound;
                if (ratio > rep.worst_ratio) {
                  rep.worst_ratio = ratio;
                  rep.worst_alpha = alpha;
                  rep.worst_beta = beta;
                  rep.worst_x = x;
                  rep.worst_xi = xi;
                }
                if (val > 0) {
                  const double cfit = std::pow(val / (scale * weight), 1.0 / cpow);
                  rep.fitted_C = std::max(rep.fitted_C, cfit);
                }
              }
            }
          }
        }
      }
    }
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

}  // namespace apcalc::symb
