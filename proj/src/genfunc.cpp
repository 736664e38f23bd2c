#include "colombeau/genfunc.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "colombeau/error.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {
namespace {

template <typename T>
GeneralizedFunction make_node(T n) {
  return GeneralizedFunction(std::make_shared<const GfNode>(GfNode{std::move(n)}));
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Printing. Parenthesization follows the parser's precedence so that the
// printed text parses back to the same tree.

std::string print_expr(const GeneralizedFunction& g);
std::string print_term(const GeneralizedFunction& g);
std::string print_factor(const GeneralizedFunction& g);

std::string print_expr(const GeneralizedFunction& g) {
  if (const auto* s = std::get_if<gf::Sum>(&g.node().v)) {
    const auto* neg = std::get_if<gf::Scalar>(&s->right.node().v);
    if (neg != nullptr && neg->c == -1.0) {
      return print_expr(s->left) + " - " + print_term(neg->child);
    }
    return print_expr(s->left) + " + " + print_term(s->right);
  }
  return print_term(g);
}

std::string print_term(const GeneralizedFunction& g) {
  if (const auto* p = std::get_if<gf::Product>(&g.node().v)) {
    return print_term(p->left) + "*" + print_factor(p->right);
  }
  return print_factor(g);
}

struct FactorPrinter {
  std::string operator()(const gf::DeltaBar&) const { return "delta"; }
  std::string operator()(const gf::HeavisideBar&) const { return "heaviside"; }
  std::string operator()(const gf::RegularBar& b) const { return "bar(" + b.name + ")"; }
  std::string operator()(const gf::Tilde& t) const { return "tilde(" + t.name + ")"; }
  std::string operator()(const gf::NullExample&) const { return "nullex"; }
  std::string operator()(const gf::Sum&) const { return {}; }
  std::string operator()(const gf::Product&) const { return {}; }
  std::string operator()(const gf::Scalar& s) const { return format_number(s.c) + "*" + print_factor(s.child); }
  std::string operator()(const gf::Derivative& d) const {
    const std::string head = d.n == 1 ? "D" : "D^" + std::to_string(d.n);
    return head + "(" + print_expr(d.child) + ")";
  }
  std::string operator()(const gf::Custom& c) const { return c.name; }
};

std::string print_factor(const GeneralizedFunction& g) {
  if (std::holds_alternative<gf::Sum>(g.node().v)) return "(" + print_expr(g) + ")";
  if (std::holds_alternative<gf::Product>(g.node().v)) return "(" + print_term(g) + ")";
  return std::visit(FactorPrinter{}, g.node().v);
}

// ---------------------------------------------------------------------------
// Evaluation.

struct JetEvaluator {
  const ScaledTestFunction& phi;
  double y;
  int n;
  const EvalOptions& opts;

  Jet operator()(const gf::DeltaBar&) const {
    Jet j = phi.jet(-y, n);
    for (int k = 1; k <= n; k += 2) j[k] = -j[k];
    return j;
  }

  Jet operator()(const gf::HeavisideBar&) const {
    // theta_bar[phi_eps](y) = integral of phi over [max(-y/eps, a), b] in the
    // unscaled variable; y-derivatives are (-1)^(k-1) phi_eps^(k-1)(-y).
    Jet out(n);
    const TestFunction& parent = phi.parent();
    const Interval s = parent.support();
    const double lo = std::max(-y / phi.epsilon(), s.lo);
    if (lo < s.hi) {
      Integrand f{[&parent](double z) { return parent(z); }, s};
      out[0] = integrate(f, {lo, s.hi}, opts.quad_tol).value;
    }
    if (n >= 1) {
      const Jet d = phi.jet(-y, n - 1);
      for (int k = 1; k <= n; ++k) out[k] = ((k - 1) % 2 == 0 ? 1.0 : -1.0) * d[k - 1];
    }
    return out;
  }

  Jet operator()(const gf::RegularBar& b) const {
    // f_bar[phi_eps](y) = integral of f(y + eps z) phi(z) dz over supp phi.
    // Each y-derivative lands on f.
    Jet out(n);
    const TestFunction& parent = phi.parent();
    const double eps = phi.epsilon();
    const Interval s = parent.support();
    for (int k = 0; k <= n; ++k) {
      Integrand f{[&, k](double z) { return b.f.jet(y + eps * z, k)[k] * parent(z); }, s};
      try {
        out[k] = integrate(f, s, opts.quad_tol).value;
      } catch (const EvaluationError& e) {
        std::ostringstream where;
        where.precision(17);
        where << "bar(" << b.name << ") at y = " << y << ", eps = " << eps;
        throw e.with_context(where.str());
      }
    }
    return out;
  }

  Jet operator()(const gf::Tilde& t) const { return t.f.jet(y, n); }

  Jet operator()(const gf::NullExample&) const {
    Jet out(n);
    out[0] = phi(1.0);
    return out;
  }

  Jet operator()(const gf::Sum& s) const { return child(s.left, "sum.left") + child(s.right, "sum.right"); }

  Jet operator()(const gf::Product& p) const {
    return child(p.left, "product.left") * child(p.right, "product.right");
  }

  Jet operator()(const gf::Scalar& s) const { return s.c * child(s.child, "scalar"); }

  Jet operator()(const gf::Derivative& d) const {
    if (d.n < 0) throw ContractViolation("derivative order must be >= 0");
    Jet inner;
    try {
      inner = evaluate_jet(d.child, phi, y, n + d.n, opts);
    } catch (const EvaluationError& e) {
      throw e.with_context("derivative");
    }
    return inner.drop_front(d.n);
  }

  Jet operator()(const gf::Custom& c) const {
    Jet out = c.eval(phi, y, n);
    if (out.order() != n) throw ContractViolation("custom leaf '" + c.name + "' returned wrong jet order");
    return out;
  }

  Jet child(const GeneralizedFunction& g, const char* where) const {
    try {
      return evaluate_jet(g, phi, y, n, opts);
    } catch (const EvaluationError& e) {
      throw e.with_context(where);
    }
  }
};

}  // namespace

std::string GeneralizedFunction::to_string() const { return print_expr(*this); }

std::string default_function_name(const SmoothPrimitive& f) {
  struct Namer {
    std::string operator()(const SmoothPrimitive::Polynomial& p) const {
      std::string out = "poly(";
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(p.coeffs[i]);
      }
      return out + ")";
    }
    std::string operator()(const SmoothPrimitive::TanhScaled& t) const {
      return t.k == 10.0 ? "tanh10" : "tanh(" + format_number(t.k) + ")";
    }
    std::string operator()(const SmoothPrimitive::Sine&) const { return "sin"; }
    std::string operator()(const SmoothPrimitive::Exponential&) const { return "exp"; }
    std::string operator()(const SmoothPrimitive::Gaussian&) const { return "gauss"; }
    std::string operator()(const SmoothPrimitive::Bump& b) const { return "bump(" + format_number(b.halfwidth) + ")"; }
    std::string operator()(const SmoothPrimitive::Combination&) const { return "combination"; }
  };
  return std::visit(Namer{}, f.kind());
}

GeneralizedFunction delta_bar() { return make_node(gf::DeltaBar{}); }
GeneralizedFunction heaviside_bar() { return make_node(gf::HeavisideBar{}); }
GeneralizedFunction regular_bar(SmoothPrimitive f, std::string name) {
  if (name.empty()) name = default_function_name(f);
  return make_node(gf::RegularBar{std::move(f), std::move(name)});
}
GeneralizedFunction tilde(SmoothPrimitive f, std::string name) {
  if (name.empty()) name = default_function_name(f);
  return make_node(gf::Tilde{std::move(f), std::move(name)});
}
GeneralizedFunction null_example() { return make_node(gf::NullExample{}); }
GeneralizedFunction sum(GeneralizedFunction a, GeneralizedFunction b) {
  return make_node(gf::Sum{std::move(a), std::move(b)});
}
GeneralizedFunction product(GeneralizedFunction a, GeneralizedFunction b) {
  return make_node(gf::Product{std::move(a), std::move(b)});
}
GeneralizedFunction scalar(double c, GeneralizedFunction a) { return make_node(gf::Scalar{c, std::move(a)}); }
GeneralizedFunction derivative(int n, GeneralizedFunction a) {
  if (n < 0) throw ContractViolation("derivative order must be >= 0");
  return make_node(gf::Derivative{n, std::move(a)});
}
GeneralizedFunction custom_leaf(std::string name, CustomLeafFn eval) {
  return make_node(gf::Custom{std::move(name), std::move(eval)});
}
GeneralizedFunction difference(GeneralizedFunction a, GeneralizedFunction b) {
  return sum(std::move(a), scalar(-1.0, std::move(b)));
}

Jet evaluate_jet(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y, int n,
                 const EvalOptions& opts) {
  if (n < 0) throw ContractViolation("derivative order must be >= 0");
  return std::visit(JetEvaluator{phi, y, n, opts}, a.node().v);
}

double evaluate(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y, const EvalOptions& opts) {
  return evaluate_jet(a, phi, y, 0, opts).value();
}

double evaluate_derivative(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y, int n,
                           const EvalOptions& opts) {
  return evaluate_jet(a, phi, y, n, opts)[n];
}

std::vector<double> evaluate_grid(const GeneralizedFunction& a, const ScaledTestFunction& phi,
                                  std::span<const double> ys, int n, const EvalOptions& opts) {
  std::vector<double> out;
  out.reserve(ys.size());
  for (const double y : ys) {
    if (!std::isfinite(y)) throw ContractViolation("evaluate_grid: grid point is not finite");
    out.push_back(evaluate_derivative(a, phi, y, n, opts));
  }
  return out;
}

}  // namespace colombeau
