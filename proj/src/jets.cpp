#include "colombeau/jets.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "colombeau/error.hpp"

namespace colombeau {
namespace {

void check_order(int n) {
  if (n < 0 || n > kMaxJetOrder) {
    throw ContractViolation("jet order " + std::to_string(n) + " outside [0, " +
                            std::to_string(kMaxJetOrder) + "]");
  }
}

void check_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) {
    throw ContractViolation("jet order mismatch: " + std::to_string(a.order()) + " vs " +
                            std::to_string(b.order()));
  }
}

// Taylor-mode helpers. Coefficient vectors hold f^(k)(x)/k!.

// exp(u) from the Taylor coefficients of u.
std::vector<double> taylor_exp(const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<double> w(n, 0.0);
  w[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * w[k - j];
    w[k] = acc / static_cast<double>(k);
  }
  return w;
}

// tanh(u), using tanh' = 1 - tanh^2.
std::vector<double> taylor_tanh(const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<double> w(n, 0.0);
  std::vector<double> s(n, 0.0);  // 1 - w^2
  w[0] = std::tanh(u[0]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * s[k - j];
      w[k] = acc / static_cast<double>(k);
    }
    double sq = 0.0;
    for (std::size_t i = 0; i <= k; ++i) sq += w[i] * w[k - i];
    s[k] = (k == 0 ? 1.0 : 0.0) - sq;
  }
  return w;
}

Jet from_taylor(const std::vector<double>& t) {
  std::vector<double> d(t.size());
  double factorial = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    d[k] = t[k] * factorial;
  }
  return Jet(std::move(d));
}

Jet polynomial_jet(const std::vector<double>& c, double x, int n) {
  Jet out(n);
  std::vector<double> coeffs = c;
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    out[k] = acc;
    if (coeffs.empty()) continue;
    // Differentiate in place.
    for (std::size_t i = 1; i < coeffs.size(); ++i) coeffs[i - 1] = coeffs[i] * static_cast<double>(i);
    coeffs.pop_back();
  }
  return out;
}

Jet bump_jet(double h, double x, int n) {
  const double t = x / h;
  if (!(std::abs(t) < 1.0)) return Jet(n);
  const std::size_t len = static_cast<std::size_t>(n) + 1;
  // v(x) = (x/h)^2 - 1 is quadratic; u = 1/v.
  const double v0 = t * t - 1.0;
  const double v1 = 2.0 * x / (h * h);
  const double v2 = 1.0 / (h * h);
  std::vector<double> u(len, 0.0);
  u[0] = 1.0 / v0;
  if (u[0] < std::log(DBL_MIN) + 50.0) return Jet(n);
  for (std::size_t k = 1; k < len; ++k) {
    double acc = v1 * u[k - 1];
    if (k >= 2) acc += v2 * u[k - 2];
    u[k] = -acc / v0;
  }
  return from_taylor(taylor_exp(u));
}

struct JetVisitor {
  double x;
  int n;

  Jet operator()(const SmoothPrimitive::Polynomial& p) const { return polynomial_jet(p.coeffs, x, n); }
  Jet operator()(const SmoothPrimitive::TanhScaled& p) const {
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    u[0] = p.k * x;
    if (n >= 1) u[1] = p.k;
    return from_taylor(taylor_tanh(u));
  }
  Jet operator()(const SmoothPrimitive::Sine&) const {
    Jet out(n);
    const double s = std::sin(x);
    const double c = std::cos(x);
    for (int k = 0; k <= n; ++k) {
      switch (k % 4) {
        case 0: out[k] = s; break;
        case 1: out[k] = c; break;
        case 2: out[k] = -s; break;
        default: out[k] = -c; break;
      }
    }
    return out;
  }
  Jet operator()(const SmoothPrimitive::Exponential&) const { return Jet::constant(std::exp(x), n); }
  Jet operator()(const SmoothPrimitive::Gaussian&) const {
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    u[0] = -x * x;
    if (n >= 1) u[1] = -2.0 * x;
    if (n >= 2) u[2] = -1.0;
    return from_taylor(taylor_exp(u));
  }
  Jet operator()(const SmoothPrimitive::Bump& b) const { return bump_jet(b.halfwidth, x, n); }
  Jet operator()(const SmoothPrimitive::Combination& c) const {
    Jet out(n);
    for (const auto& term : c.terms) {
      Jet part = term.function.jet(x, n);
      part *= term.weight;
      out += part;
    }
    return out;
  }
};

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct DescribeVisitor {
  std::string operator()(const SmoothPrimitive::Polynomial& p) const {
    if (p.coeffs.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
      if (i > 0) out += " + ";
      out += number(p.coeffs[i]);
      if (i == 1) out += "*x";
      if (i > 1) out += "*x^" + std::to_string(i);
    }
    return out;
  }
  std::string operator()(const SmoothPrimitive::TanhScaled& p) const { return "tanh(" + number(p.k) + "*x)"; }
  std::string operator()(const SmoothPrimitive::Sine&) const { return "sin(x)"; }
  std::string operator()(const SmoothPrimitive::Exponential&) const { return "exp(x)"; }
  std::string operator()(const SmoothPrimitive::Gaussian&) const { return "exp(-x^2)"; }
  std::string operator()(const SmoothPrimitive::Bump& b) const {
    return "bump(halfwidth=" + number(b.halfwidth) + ")";
  }
  std::string operator()(const SmoothPrimitive::Combination& c) const {
    std::string out;
    for (std::size_t i = 0; i < c.terms.size(); ++i) {
      if (i > 0) out += " + ";
      out += number(c.terms[i].weight) + "*(" + c.terms[i].function.describe() + ")";
    }
    return out.empty() ? "0" : out;
  }
};

}  // namespace

Jet::Jet(int order) {
  check_order(order);
  d_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

Jet::Jet(std::initializer_list<double> derivatives) : d_(derivatives) {
  if (d_.empty()) throw ContractViolation("jet needs at least one entry");
  check_order(order());
}

Jet::Jet(std::vector<double> derivatives) : d_(std::move(derivatives)) {
  if (d_.empty()) throw ContractViolation("jet needs at least one entry");
  check_order(order());
}

Jet Jet::constant(double value, int order) {
  Jet j(order);
  for (auto& v : j.d_) v = value;
  return j;
}

Jet Jet::drop_front(int m) const {
  if (m < 0 || m > order()) throw ContractViolation("drop_front: offset outside jet");
  return Jet(std::vector<double>(d_.begin() + m, d_.end()));
}

Jet& Jet::operator+=(const Jet& other) {
  check_same_order(*this, other);
  for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += other.d_[k];
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (auto& v : d_) v *= c;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet out = a;
  out += b;
  return out;
}

Jet operator*(double c, const Jet& a) {
  Jet out = a;
  out *= c;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_same_order(a, b);
  const int n = a.order();
  Jet out(n);
  for (int k = 0; k <= n; ++k) {
    double binom = 1.0;  // C(k, j)
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
      acc += binom * a[j] * b[k - j];
      binom = binom * (k - j) / (j + 1);
    }
    out[k] = acc;
  }
  return out;
}

Jet jet_arith(const Jet& a, const Jet& b, JetOp op, double c) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::mul: return a * b;
    case JetOp::scalar: return c * a;
  }
  throw ContractViolation("jet_arith: unknown operation");
}

SmoothPrimitive::SmoothPrimitive(Kind kind) : kind_(std::make_shared<const Kind>(std::move(kind))) {}

SmoothPrimitive SmoothPrimitive::polynomial(std::vector<double> coeffs) {
  return SmoothPrimitive(Polynomial{std::move(coeffs)});
}
SmoothPrimitive SmoothPrimitive::tanh_scaled(double k) { return SmoothPrimitive(TanhScaled{k}); }
SmoothPrimitive SmoothPrimitive::sine() { return SmoothPrimitive(Sine{}); }
SmoothPrimitive SmoothPrimitive::exponential() { return SmoothPrimitive(Exponential{}); }
SmoothPrimitive SmoothPrimitive::gaussian() { return SmoothPrimitive(Gaussian{}); }
SmoothPrimitive SmoothPrimitive::bump(double halfwidth) {
  if (!(halfwidth > 0.0)) throw ContractViolation("bump halfwidth must be positive");
  return SmoothPrimitive(Bump{halfwidth});
}
SmoothPrimitive SmoothPrimitive::combination(std::vector<Term> terms) {
  return SmoothPrimitive(Combination{std::move(terms)});
}

double SmoothPrimitive::operator()(double x) const { return jet(x, 0).value(); }

Jet SmoothPrimitive::jet(double x, int n) const {
  check_order(n);
  return std::visit(JetVisitor{x, n}, *kind_);
}

std::string SmoothPrimitive::describe() const { return std::visit(DescribeVisitor{}, *kind_); }

}  // namespace colombeau
