#include "colombeau/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "colombeau/error.hpp"

namespace colombeau {
namespace {

struct GaussRule {
  std::array<double, quadrature::kNodesPerPanel> nodes{};
  std::array<double, quadrature::kNodesPerPanel> weights{};
};

// Newton iteration on P_n from the Chebyshev initial guesses.
GaussRule make_rule() {
  constexpr int n = quadrature::kNodesPerPanel;
  GaussRule rule;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

struct PanelEstimate {
  double value = 0.0;
  double abs_value = 0.0;
};

PanelEstimate checked_panel(const Integrand& f, double a, double b) {
  const auto& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  PanelEstimate est;
  for (int i = 0; i < quadrature::kNodesPerPanel; ++i) {
    const double x = mid + half * r.nodes[i];
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at x = " << x << " (value " << fx << ")";
      throw EvaluationError(msg.str());
    }
    est.value += r.weights[i] * fx;
    est.abs_value += r.weights[i] * std::abs(fx);
  }
  est.value *= half;
  est.abs_value *= half;
  return est;
}

struct Panel {
  double a;
  double b;
  double estimate;  // one-panel estimate, already computed
};

}  // namespace

double quadrature::gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  const auto& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kNodesPerPanel; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

QuadResult integrate(const Integrand& f, Interval interval, double tol) {
  if (!(interval.lo <= interval.hi)) {
    throw ContractViolation("integrate: interval must satisfy a <= b");
  }
  if (!(tol > 0.0)) throw ContractViolation("integrate: tol must be positive");

  const double a = std::max(interval.lo, f.support.lo);
  const double b = std::min(interval.hi, f.support.hi);
  QuadResult result;
  if (!(a < b)) {
    result.panels = 1;
    return result;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ContractViolation("integrate: effective interval must be finite");
  }

  const double total_width = b - a;
  const double whole = checked_panel(f, a, b).value;
  const double budget = std::max(tol, tol * std::abs(whole));

  // Depth-first, left to right, so accumulation order is fixed.
  std::vector<Panel> stack;
  stack.push_back({a, b, whole});
  std::size_t panels_used = 1;
  double value = 0.0;
  double error = 0.0;

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const PanelEstimate left = checked_panel(f, p.a, mid);
    const PanelEstimate right = checked_panel(f, mid, p.b);
    const double fine = left.value + right.value;
    const double diff = std::abs(fine - p.estimate);
    const double local_tol = budget * (p.b - p.a) / total_width;
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            (left.abs_value + right.abs_value);
    const bool too_narrow = !(p.a < mid && mid < p.b);
    if (diff <= std::max(local_tol, roundoff) || too_narrow) {
      value += fine;
      error += diff;
      continue;
    }
    ++panels_used;
    if (panels_used > quadrature::kMaxPanels) {
      double best = value + fine;
      for (const auto& q : stack) best += q.estimate;
      std::ostringstream msg;
      msg << "integrate: panel limit " << quadrature::kMaxPanels << " exceeded on ["
          << a << ", " << b << "]";
      throw ConvergenceError(msg.str(), best, error + diff);
    }
    // Push right first so the left half is refined first.
    stack.push_back({mid, p.b, right.value});
    stack.push_back({p.a, mid, left.value});
  }

  result.value = value;
  result.error_estimate = error;
  result.panels = panels_used;
  return result;
}

}  // namespace colombeau
