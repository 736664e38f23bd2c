#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "colombeau/jets.hpp"
#include "colombeau/mollifier.hpp"

namespace colombeau {

struct GfNode;

// Function-valued functional A: test function -> smooth function of y,
// represented as an immutable expression DAG. Subtrees are shared, never
// copied.
class GeneralizedFunction {
 public:
  [[nodiscard]] const GfNode& node() const noexcept { return *node_; }

  // Rendered in the expression language, e.g. "bar(tanh10) - tilde(tanh10)".
  [[nodiscard]] std::string to_string() const;

  explicit GeneralizedFunction(std::shared_ptr<const GfNode> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const GfNode> node_;
};

// Signature of a caller-supplied leaf: derivatives 0..n in y of the leaf's
// value under test function `phi`.
using CustomLeafFn = std::function<Jet(const ScaledTestFunction& phi, double y, int n)>;

namespace gf {

// phi(-y): the embedded Dirac delta.
struct DeltaBar {};
// Integral of phi over [-y, inf): the embedded Heaviside step.
struct HeavisideBar {};
// Convolution of f against the translated test function.
struct RegularBar {
  SmoothPrimitive f;
  std::string name;
};
// f(y), ignoring the test function.
struct Tilde {
  SmoothPrimitive f;
  std::string name;
};
// phi(1), independent of y.
struct NullExample {};
struct Sum {
  GeneralizedFunction left;
  GeneralizedFunction right;
};
struct Product {
  GeneralizedFunction left;
  GeneralizedFunction right;
};
struct Scalar {
  double c;
  GeneralizedFunction child;
};
struct Derivative {
  int n;
  GeneralizedFunction child;
};
struct Custom {
  std::string name;
  CustomLeafFn eval;
};

}  // namespace gf

struct GfNode {
  std::variant<gf::DeltaBar, gf::HeavisideBar, gf::RegularBar, gf::Tilde, gf::NullExample, gf::Sum,
               gf::Product, gf::Scalar, gf::Derivative, gf::Custom>
      v;
};

// Expression-language name of a primitive: tanh10, sin, exp, gauss, poly(...).
[[nodiscard]] std::string default_function_name(const SmoothPrimitive& f);

[[nodiscard]] GeneralizedFunction delta_bar();
[[nodiscard]] GeneralizedFunction heaviside_bar();
[[nodiscard]] GeneralizedFunction regular_bar(SmoothPrimitive f, std::string name = {});
[[nodiscard]] GeneralizedFunction tilde(SmoothPrimitive f, std::string name = {});
[[nodiscard]] GeneralizedFunction null_example();
[[nodiscard]] GeneralizedFunction sum(GeneralizedFunction a, GeneralizedFunction b);
[[nodiscard]] GeneralizedFunction product(GeneralizedFunction a, GeneralizedFunction b);
[[nodiscard]] GeneralizedFunction scalar(double c, GeneralizedFunction a);
[[nodiscard]] GeneralizedFunction derivative(int n, GeneralizedFunction a);
[[nodiscard]] GeneralizedFunction custom_leaf(std::string name, CustomLeafFn eval);

// a - b, encoded as a + (-1)*b.
[[nodiscard]] GeneralizedFunction difference(GeneralizedFunction a, GeneralizedFunction b);

struct EvalOptions {
  // Absolute quadrature tolerance for the convolution and Heaviside leaves.
  double quad_tol = 1e-13;
};

// A[phi](y).
[[nodiscard]] double evaluate(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y,
                              const EvalOptions& opts = {});

// d^n/dy^n A[phi](y). Derivatives are pushed structurally to the leaves;
// no finite differences are taken.
[[nodiscard]] double evaluate_derivative(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y,
                                         int n, const EvalOptions& opts = {});

// All y-derivatives 0..n at once.
[[nodiscard]] Jet evaluate_jet(const GeneralizedFunction& a, const ScaledTestFunction& phi, double y, int n,
                               const EvalOptions& opts = {});

[[nodiscard]] std::vector<double> evaluate_grid(const GeneralizedFunction& a, const ScaledTestFunction& phi,
                                                std::span<const double> ys, int n, const EvalOptions& opts = {});

}  // namespace colombeau
