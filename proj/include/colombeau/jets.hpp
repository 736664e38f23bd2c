#pragma once

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace colombeau {

// Jets beyond this order are rejected. A_q mollifiers need derivatives of the
// base bump up to q, plus whatever y-derivative order the caller asks for.
inline constexpr int kMaxJetOrder = 16;

// Truncated derivative sequence (f(x), f'(x), ..., f^(n)(x)) at a point.
class Jet {
 public:
  Jet() : d_(1, 0.0) {}
  explicit Jet(int order);
  Jet(std::initializer_list<double> derivatives);
  explicit Jet(std::vector<double> derivatives);

  static Jet constant(double value, int order);

  [[nodiscard]] int order() const noexcept { return static_cast<int>(d_.size()) - 1; }
  [[nodiscard]] double operator[](int k) const { return d_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return d_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] std::span<const double> derivatives() const noexcept { return d_; }
  [[nodiscard]] double value() const noexcept { return d_.front(); }

  // (f^(m), ..., f^(n)) as a jet of order n - m.
  [[nodiscard]] Jet drop_front(int m) const;

  Jet& operator+=(const Jet& other);
  Jet& operator*=(double c);

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  std::vector<double> d_;
};

// Componentwise sum; orders must match.
[[nodiscard]] Jet operator+(const Jet& a, const Jet& b);
[[nodiscard]] Jet operator*(double c, const Jet& a);
// Leibniz rule: (ab)^(k) = sum_j C(k,j) a^(j) b^(k-j); orders must match.
[[nodiscard]] Jet operator*(const Jet& a, const Jet& b);

enum class JetOp { add, mul, scalar };

// Dispatches to the operators above. For JetOp::scalar `b` is ignored and
// `a` is multiplied by `c`.
[[nodiscard]] Jet jet_arith(const Jet& a, const Jet& b, JetOp op, double c = 0.0);

// Smooth real functions with derivative rules of every order.
class SmoothPrimitive {
 public:
  struct Polynomial {
    std::vector<double> coeffs;  // c0 + c1 x + c2 x^2 + ...
  };
  struct TanhScaled {
    double k;  // tanh(k x)
  };
  struct Sine {};
  struct Exponential {};
  struct Gaussian {};  // exp(-x^2)
  struct Bump {
    double halfwidth;  // exp(1/((x/h)^2 - 1)) on (-h, h), 0 elsewhere
  };
  struct Term;
  struct Combination {
    std::vector<Term> terms;
  };
  using Kind = std::variant<Polynomial, TanhScaled, Sine, Exponential, Gaussian, Bump, Combination>;

  static SmoothPrimitive polynomial(std::vector<double> coeffs);
  static SmoothPrimitive tanh_scaled(double k);
  static SmoothPrimitive sine();
  static SmoothPrimitive exponential();
  static SmoothPrimitive gaussian();
  static SmoothPrimitive bump(double halfwidth);
  static SmoothPrimitive combination(std::vector<Term> terms);

  [[nodiscard]] const Kind& kind() const noexcept { return *kind_; }

  [[nodiscard]] double operator()(double x) const;
  // Derivatives 0..n at x.
  [[nodiscard]] Jet jet(double x, int n) const;

  // Human-readable formula, e.g. "tanh(10*x)".
  [[nodiscard]] std::string describe() const;

 private:
  explicit SmoothPrimitive(Kind kind);
  std::shared_ptr<const Kind> kind_;
};

struct SmoothPrimitive::Term {
  double weight;
  SmoothPrimitive function;
};

// eval_jet(f, x, n): derivatives of f of orders 0..n at x.
[[nodiscard]] inline Jet eval_jet(const SmoothPrimitive& f, double x, int n) { return f.jet(x, n); }

}  // namespace colombeau
