#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colombeau/jets.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

// Tolerance used for every moment integral.
inline constexpr double kMomentTol = 1e-12;
// Class-membership thresholds checked at construction.
inline constexpr double kMassTol = 1e-10;
inline constexpr double kMomentVanishTol = 1e-8;
// Largest q for which the moment system is solved. Beyond this the bump
// derivatives grow so fast that double-precision moments miss kMassTol.
inline constexpr int kMaxClassOrder = 7;

// A compactly supported smooth test function of the form
//
//   phi(x) = sum_k w_k * bump^(k)(x - shift),
//
// where bump is the unnormalized exp(1/((x/h)^2 - 1)) on (-h, h). Values are
// immutable; copies share storage.
class TestFunction {
 public:
  [[nodiscard]] double operator()(double x) const;
  // Derivatives 0..n at x.
  [[nodiscard]] Jet jet(double x, int n) const;

  [[nodiscard]] Interval support() const noexcept;
  [[nodiscard]] double halfwidth() const noexcept;
  [[nodiscard]] double shift() const noexcept;
  // Weights on bump, bump', bump'', ... (normalization folded in).
  [[nodiscard]] std::span<const double> bump_weights() const noexcept;
  // Combination weights on the base test function and its derivatives, as
  // solved by construct_Aq; {1} for a plain bump.
  [[nodiscard]] std::span<const double> lambda() const noexcept;
  // q such that the function was built to lie in A_q, if any.
  [[nodiscard]] std::optional<int> claimed_class() const noexcept;
  // m_0 .. m_r, filled at construction.
  [[nodiscard]] std::span<const double> moment_cache() const noexcept;
  [[nodiscard]] const std::string& label() const noexcept;
  // True when phi(-x) == phi(x) holds exactly by construction.
  [[nodiscard]] bool is_even() const noexcept;

  [[nodiscard]] TestFunction with_label(std::string label) const;

  // Lower-level constructor; fills the moment cache up to `cache_order` and
  // validates `claimed_class` against it. Throws ConstructionError if the
  // claimed class does not hold.
  static TestFunction from_bump_weights(double halfwidth, std::vector<double> weights, double shift,
                                        std::vector<double> lambda, std::optional<int> claimed_class,
                                        std::string label);

 private:
  struct Data;
  explicit TestFunction(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

// phi_eps(x) = (1/eps) * phi(x/eps).
class ScaledTestFunction {
 public:
  // Unscaled view (eps = 1).
  ScaledTestFunction(TestFunction parent);
  ScaledTestFunction(TestFunction parent, double epsilon);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Jet jet(double x, int n) const;
  [[nodiscard]] Interval support() const noexcept;
  [[nodiscard]] const TestFunction& parent() const noexcept { return parent_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }

 private:
  TestFunction parent_;
  double epsilon_;
};

// Even bump on (-h, h) normalized to unit mass. It lies in A_1.
[[nodiscard]] TestFunction make_bump(double halfwidth = 1.0);

// Moments m_0..m_{r_max}, m_r = integral of z^r phi(z) dz.
[[nodiscard]] std::vector<double> moments(const TestFunction& phi, int r_max);

// Builds phi = sum_{k=0}^{q} lambda_k base^(k) with m_0 = 1 and m_r = 0 for
// 1 <= r <= q. Throws ConstructionError if base has zero mass.
[[nodiscard]] TestFunction construct_Aq(int q, const TestFunction& base);
[[nodiscard]] inline TestFunction construct_Aq(int q) { return construct_Aq(q, make_bump(1.0)); }

// x -> phi(x - y). Mass is preserved; higher moments are not, so a nonzero
// shift only keeps the A_0 claim.
[[nodiscard]] TestFunction translate(const TestFunction& phi, double y);

// Throws ContractViolation unless eps > 0.
[[nodiscard]] ScaledTestFunction scale(const TestFunction& phi, double epsilon);

}  // namespace colombeau
