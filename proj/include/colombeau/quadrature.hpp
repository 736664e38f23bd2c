#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace colombeau {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// A real function that is exactly zero outside `support`.
struct Integrand {
  std::function<double(double)> eval;
  Interval support{-std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};

  // Value with the support clamp applied.
  [[nodiscard]] double operator()(double x) const {
    return support.contains(x) ? eval(x) : 0.0;
  }
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, >= 0
  std::size_t panels = 0;
};

namespace quadrature {

inline constexpr int kNodesPerPanel = 16;
inline constexpr std::size_t kMaxPanels = std::size_t{1} << 20;

// Gauss-Legendre rule with kNodesPerPanel nodes on a single panel [a, b].
// No support clamping and no finiteness checks.
[[nodiscard]] double gauss_legendre(const std::function<double(double)>& f, double a, double b);

}  // namespace quadrature

// Adaptive composite Gauss-Legendre integration of `f` over `interval`.
//
// Panels are halved until the one-panel and two-panel estimates agree to the
// panel's share of max(tol, tol*|value|). Integration is restricted to the
// intersection of `interval` with `f.support`, where the integrand is known to
// vanish.
//
// Throws EvaluationError if the integrand returns a non-finite value and
// ConvergenceError (carrying the best estimate) when the panel cap is hit.
[[nodiscard]] QuadResult integrate(const Integrand& f, Interval interval, double tol);

}  // namespace colombeau
