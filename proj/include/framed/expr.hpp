#pragma once

// Immutable meromorphic expression trees in one chart variable z.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "framed/errors.hpp"
#include "framed/point.hpp"

namespace framed {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, IntPow, RealPow, Log };

class Expr;

struct ExprNode {
  Op op = Op::Const;
  Complex value{};            // Const
  long int_exponent = 0;      // IntPow
  double real_exponent = 0;   // RealPow
  std::optional<int> branch;  // RealPow, Log
  std::vector<Expr> args;
};

inline bool is_integral(double x) { return std::isfinite(x) && std::nearbyint(x) == x; }

class Expr {
 public:
  Expr() : Expr(constant(Complex{})) {}

  static Expr constant(Complex c) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = c;
    return Expr(std::move(n));
  }
  static Expr var() {
    static const Expr z = [] {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Var;
      return Expr(std::move(n));
    }();
    return z;
  }

  Op op() const { return node_->op; }
  Complex value() const { return node_->value; }
  long int_exponent() const { return node_->int_exponent; }
  double real_exponent() const { return node_->real_exponent; }
  std::optional<int> branch() const { return node_->branch; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }
  const ExprNode* id() const { return node_.get(); }

  bool is_constant() const { return op() == Op::Const; }
  bool is_constant(Complex c) const { return is_constant() && value() == c; }

  /// Value at z. Throws SingularPoint at poles and branch points,
  /// BranchUnset if a multivalued node has no branch index.
  Complex eval(Complex z) const;

  static Expr make(Op op, std::vector<Expr> args, long k = 0, double mu = 0.0,
                   std::optional<int> branch = std::nullopt) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->int_exponent = k;
    n->real_exponent = mu;
    n->branch = branch;
    n->args = std::move(args);
    return Expr(std::move(n));
  }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

// ---- value helpers shared by every evaluator ------------------------------

/// Value of base^mu on the sheet `branch`; `mu` integral needs no branch.
inline Complex real_power_value(Complex base, double mu, std::optional<int> branch) {
  if (is_integral(mu)) {
    if (base == Complex{} && mu < 0) throw SingularPoint("pole of an integral power");
    return std::pow(base, static_cast<int>(mu));
  }
  if (!branch) throw BranchUnset("z^mu with non-integral mu needs a branch index");
  if (base == Complex{}) {
    if (mu > 0) return Complex{};
    throw SingularPoint("branch point of z^mu");
  }
  return std::exp(mu * (std::log(base) + 2.0 * kPi * kI * static_cast<double>(*branch)));
}

inline Complex log_value(Complex base, std::optional<int> branch) {
  if (!branch) throw BranchUnset("log needs a branch index");
  if (base == Complex{}) throw SingularPoint("logarithmic singularity");
  return std::log(base) + 2.0 * kPi * kI * static_cast<double>(*branch);
}

// ---- builders with light simplification ----------------------------------

inline Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return Expr::make(Op::Neg, {a});
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Op::Add, {a, b});
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::make(Op::Sub, {a, b});
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::make(Op::Mul, {a, b});
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != Complex{})
    return Expr::constant(a.value() / b.value());
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  return Expr::make(Op::Div, {a, b});
}

inline Expr operator+(const Expr& a, Complex b) { return a + Expr::constant(b); }
inline Expr operator+(Complex a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, Complex b) { return a - Expr::constant(b); }
inline Expr operator-(Complex a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, Complex b) { return a * Expr::constant(b); }
inline Expr operator*(Complex a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, Complex b) { return a / Expr::constant(b); }
inline Expr operator/(Complex a, const Expr& b) { return Expr::constant(a) / b; }

inline Expr pow(const Expr& a, long k) {
  if (k == 0) return Expr::constant(1.0);
  if (k == 1) return a;
  if (a.is_constant() && (a.value() != Complex{} || k > 0))
    return Expr::constant(std::pow(a.value(), static_cast<int>(k)));
  return Expr::make(Op::IntPow, {a}, k);
}

inline Expr rpow(const Expr& a, double mu, std::optional<int> branch = std::nullopt) {
  if (mu == 0.0) return Expr::constant(1.0);
  if (a.is_constant() && a.value() != Complex{})
    return Expr::constant(real_power_value(a.value(), mu, branch ? branch : std::optional<int>(0)));
  return Expr::make(Op::RealPow, {a}, 0, mu, branch);
}

inline Expr log(const Expr& a, std::optional<int> branch = std::nullopt) {
  if (a.is_constant() && a.value() != Complex{})
    return Expr::constant(log_value(a.value(), branch ? branch : std::optional<int>(0)));
  return Expr::make(Op::Log, {a}, 0, 0.0, branch);
}

// ---- generic memoized fold ------------------------------------------------

/// Bottom-up evaluation of an expression DAG; shared subtrees are visited once.
/// `Visitor` provides constant, var, neg, add, sub, mul, div, ipow, rpow, log.
template <class T, class Visitor>
T fold(const Expr& e, Visitor& v) {
  std::unordered_map<const ExprNode*, T> memo;
  std::function<T(const Expr&)> go = [&](const Expr& x) -> T {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    T r = [&]() -> T {
      switch (x.op()) {
        case Op::Const: return v.constant(x.value());
        case Op::Var: return v.var();
        case Op::Neg: return v.neg(go(x.arg(0)));
        case Op::Add: return v.add(go(x.arg(0)), go(x.arg(1)));
        case Op::Sub: return v.sub(go(x.arg(0)), go(x.arg(1)));
        case Op::Mul: return v.mul(go(x.arg(0)), go(x.arg(1)));
        case Op::Div: return v.div(go(x.arg(0)), go(x.arg(1)));
        case Op::IntPow: return v.ipow(go(x.arg(0)), x.int_exponent());
        case Op::RealPow: return v.rpow(go(x.arg(0)), x.real_exponent(), x.branch());
        case Op::Log: return v.log(go(x.arg(0)), x.branch());
      }
      throw Error("unknown expression node");
    }();
    memo.emplace(x.id(), r);
    return r;
  };
  return go(e);
}

namespace detail {
struct ValueVisitor {
  Complex z;
  Complex constant(Complex c) const { return c; }
  Complex var() const { return z; }
  Complex neg(Complex a) const { return -a; }
  Complex add(Complex a, Complex b) const { return a + b; }
  Complex sub(Complex a, Complex b) const { return a - b; }
  Complex mul(Complex a, Complex b) const { return a * b; }
  Complex div(Complex a, Complex b) const {
    if (b == Complex{}) throw SingularPoint("division by zero at " + format_complex(z));
    return a / b;
  }
  Complex ipow(Complex a, long k) const {
    if (a == Complex{} && k < 0) throw SingularPoint("pole at " + format_complex(z));
    return std::pow(a, static_cast<int>(k));
  }
  Complex rpow(Complex a, double mu, std::optional<int> br) const { return real_power_value(a, mu, br); }
  Complex log(Complex a, std::optional<int> br) const { return log_value(a, br); }
};
}  // namespace detail

inline Complex Expr::eval(Complex z) const {
  detail::ValueVisitor v{z};
  const Complex r = fold<Complex>(*this, v);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw SingularPoint("non-finite value at " + format_complex(z));
  return r;
}

// ---- structural operations -------------------------------------------------

/// Rebuild `e` bottom-up, replacing each node by `rebuild(node, new_args)`.
template <class F>
Expr transform(const Expr& e, F&& rebuild) {
  std::unordered_map<const ExprNode*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    std::vector<Expr> args;
    args.reserve(x.args().size());
    for (const auto& a : x.args()) args.push_back(go(a));
    Expr r = rebuild(x, args);
    memo.emplace(x.id(), r);
    return r;
  };
  return go(e);
}

inline Expr rebuild_node(const Expr& x, const std::vector<Expr>& a) {
  switch (x.op()) {
    case Op::Const:
    case Op::Var: return x;
    case Op::Neg: return -a[0];
    case Op::Add: return a[0] + a[1];
    case Op::Sub: return a[0] - a[1];
    case Op::Mul: return a[0] * a[1];
    case Op::Div: return a[0] / a[1];
    case Op::IntPow: return pow(a[0], x.int_exponent());
    case Op::RealPow: return rpow(a[0], x.real_exponent(), x.branch());
    case Op::Log: return log(a[0], x.branch());
  }
  throw Error("unknown expression node");
}

/// e(w): the variable is replaced by `w`.
inline Expr substitute(const Expr& e, const Expr& w) {
  return transform(e, [&](const Expr& x, const std::vector<Expr>& a) {
    return x.op() == Op::Var ? w : rebuild_node(x, a);
  });
}

/// Fix every unset branch index to `k`.
inline Expr with_branch(const Expr& e, int k) {
  return transform(e, [&](const Expr& x, const std::vector<Expr>& a) {
    if (x.op() == Op::RealPow) return rpow(a[0], x.real_exponent(), x.branch() ? x.branch() : k);
    if (x.op() == Op::Log) return log(a[0], x.branch() ? x.branch() : k);
    return rebuild_node(x, a);
  });
}

/// True when some node is multivalued (log, or z^mu with non-integral mu).
inline bool is_multivalued(const Expr& e) {
  struct V {
    bool constant(Complex) const { return false; }
    bool var() const { return false; }
    bool neg(bool a) const { return a; }
    bool add(bool a, bool b) const { return a || b; }
    bool sub(bool a, bool b) const { return a || b; }
    bool mul(bool a, bool b) const { return a || b; }
    bool div(bool a, bool b) const { return a || b; }
    bool ipow(bool a, long) const { return a; }
    bool rpow(bool a, double mu, std::optional<int>) const { return a || !is_integral(mu); }
    bool log(bool, std::optional<int>) const { return true; }
  } v;
  return fold<bool>(e, v);
}

inline bool same(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.op() != b.op() || a.args().size() != b.args().size()) return false;
  switch (a.op()) {
    case Op::Const:
      if (a.value() != b.value()) return false;
      break;
    case Op::IntPow:
      if (a.int_exponent() != b.int_exponent()) return false;
      break;
    case Op::RealPow:
      if (a.real_exponent() != b.real_exponent() || a.branch() != b.branch()) return false;
      break;
    case Op::Log:
      if (a.branch() != b.branch()) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!same(a.arg(i), b.arg(i))) return false;
  return true;
}

/// Symbolic d/dz. Shared subtrees are differentiated once.
inline Expr differentiate(const Expr& e) {
  std::unordered_map<const ExprNode*, Expr> memo;
  std::function<Expr(const Expr&)> d = [&](const Expr& x) -> Expr {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Expr r = [&]() -> Expr {
      switch (x.op()) {
        case Op::Const: return Expr::constant(0.0);
        case Op::Var: return Expr::constant(1.0);
        case Op::Neg: return -d(x.arg(0));
        case Op::Add: return d(x.arg(0)) + d(x.arg(1));
        case Op::Sub: return d(x.arg(0)) - d(x.arg(1));
        case Op::Mul: return d(x.arg(0)) * x.arg(1) + x.arg(0) * d(x.arg(1));
        case Op::Div: {
          const Expr& u = x.arg(0);
          const Expr& v = x.arg(1);
          return (d(u) * v - u * d(v)) / pow(v, 2);
        }
        case Op::IntPow: {
          const long k = x.int_exponent();
          return Expr::constant(static_cast<double>(k)) * pow(x.arg(0), k - 1) * d(x.arg(0));
        }
        case Op::RealPow: {
          const double mu = x.real_exponent();
          return Expr::constant(mu) * rpow(x.arg(0), mu - 1.0, x.branch()) * d(x.arg(0));
        }
        case Op::Log: return d(x.arg(0)) / x.arg(0);
      }
      throw Error("unknown expression node");
    }();
    memo.emplace(x.id(), r);
    return r;
  };
  return d(e);
}

// ---- printing ---------------------------------------------------------------

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::IntPow:
    case Op::RealPow: return 4;
    default: return 5;
  }
}

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string print(const Expr& e) {
  auto wrap = [](const Expr& x, bool paren) { return paren ? "(" + print(x) + ")" : print(x); };
  auto branch_suffix = [](const Expr& x) {
    return x.branch() ? "@" + std::to_string(*x.branch()) : std::string();
  };
  const int p = precedence(e);
  switch (e.op()) {
    case Op::Const: {
      const Complex c = e.value();
      if (c.imag() == 0.0)
        return std::signbit(c.real()) ? "(" + format_real(c.real()) + ")" : format_real(c.real());
      return "(" + format_complex(c) + ")";
    }
    case Op::Var: return "z";
    case Op::Neg: return "-" + wrap(e.arg(0), precedence(e.arg(0)) < p);
    case Op::Add: return wrap(e.arg(0), precedence(e.arg(0)) < p) + " + " + wrap(e.arg(1), precedence(e.arg(1)) <= p);
    case Op::Sub: return wrap(e.arg(0), precedence(e.arg(0)) < p) + " - " + wrap(e.arg(1), precedence(e.arg(1)) <= p);
    case Op::Mul: return wrap(e.arg(0), precedence(e.arg(0)) < p) + "*" + wrap(e.arg(1), precedence(e.arg(1)) <= p);
    case Op::Div: return wrap(e.arg(0), precedence(e.arg(0)) < p) + "/" + wrap(e.arg(1), precedence(e.arg(1)) <= p);
    case Op::IntPow: return wrap(e.arg(0), precedence(e.arg(0)) <= p) + "^" + std::to_string(e.int_exponent());
    case Op::RealPow:
      return wrap(e.arg(0), precedence(e.arg(0)) <= p) + "^{" + format_real(e.real_exponent()) + "}" + branch_suffix(e);
    case Op::Log: return "log(" + print(e.arg(0)) + ")" + branch_suffix(e);
  }
  throw Error("unknown expression node");
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e); }

}  // namespace framed
