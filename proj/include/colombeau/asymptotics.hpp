#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colombeau/genfunc.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

// Strictly decreasing positive epsilons, walked toward 0+.
class EpsSchedule {
 public:
  explicit EpsSchedule(std::vector<double> values);

  // eps_k = 0.2 * 2^-k, k = 0..8.
  static EpsSchedule make_default();
  static EpsSchedule geometric(double start, double ratio, int count);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

inline constexpr int kDefaultGridPoints = 401;
inline constexpr int kMinGridPoints = 51;
// Points at the small-epsilon end used for slope fits.
inline constexpr std::size_t kFitWindow = 5;
// Log-space residual above which a fit is flagged as pre-asymptotic.
inline constexpr double kAsymptoticResidual = 0.15;
// Slope of eps^-q M(eps) below which the sequence counts as growing.
inline constexpr double kBoundSlopeFloor = -0.1;
// Allowed shortfall of a fitted order below the integer order it must reach.
inline constexpr double kOrderSlack = 0.25;

struct OrderPoint {
  double epsilon;
  double sup_norm;
};

struct OrderEstimate {
  double slope = 0.0;  // d log M / d log eps
  double intercept = 0.0;
  double residual = 0.0;  // max |deviation| in log space over the fit window
  std::vector<OrderPoint> points;  // every scheduled point, schedule order
  std::size_t fit_count = 0;
  // M vanished exactly at the small-epsilon end; slope is meaningless.
  bool exact_zero = false;

  [[nodiscard]] bool asymptotic() const noexcept { return exact_zero || residual <= kAsymptoticResidual; }
  // True if the estimate shows decay at least like eps^q (up to kOrderSlack).
  [[nodiscard]] bool at_least(double q) const noexcept { return exact_zero || slope >= q - kOrderSlack; }
};

struct BoundWitness {
  int q = 0;
  double C = 0.0;
  double eta = 0.0;
  Interval interval;
  bool satisfied = false;
  double scaled_slope = 0.0;  // fitted slope of eps^-q M(eps)
};

struct SupNormOptions {
  int grid_points = kDefaultGridPoints;
  EvalOptions eval;
};

// max over y in `interval` of |d^n/dy^n A[phi_eps](y)|. The uniform grid is
// augmented with an equally fine grid over -eps * supp(phi) whenever A has a
// leaf concentrated there (delta, heaviside, null example), then refined by
// golden-section search around the grid argmax.
[[nodiscard]] double sup_norm(const GeneralizedFunction& a, const TestFunction& phi, double epsilon, Interval interval,
                              int n, const SupNormOptions& opts = {});

// M(eps) at every scheduled eps.
[[nodiscard]] std::vector<OrderPoint> sup_norm_series(const GeneralizedFunction& a, const TestFunction& phi,
                                                      Interval interval, const EpsSchedule& schedule, int n,
                                                      const SupNormOptions& opts = {});

// Least-squares log-log fit over the last kFitWindow points.
[[nodiscard]] OrderEstimate fit_order(std::span<const OrderPoint> points);

[[nodiscard]] OrderEstimate estimate_order(const GeneralizedFunction& a, const TestFunction& phi, Interval interval,
                                           const EpsSchedule& schedule, int n, const SupNormOptions& opts = {});

// Bound witness for eps^-q M(eps) from precomputed points.
[[nodiscard]] BoundWitness bound_from_points(std::span<const OrderPoint> points, int q, double c_margin,
                                             Interval interval);

[[nodiscard]] BoundWitness check_bound(const GeneralizedFunction& a, const TestFunction& phi, int q, Interval interval,
                                       const EpsSchedule& schedule, int n, double c_margin,
                                       const SupNormOptions& opts = {});

enum class Verdict { moderate, null, neither };

[[nodiscard]] const char* verdict_name(Verdict v);

struct ClassifyConfig {
  Interval interval{-1.0, 1.0};
  EpsSchedule schedule = EpsSchedule::make_default();
  int n_max = 2;
  int q_max = 3;
  int N_max = 4;
  double c_margin = 2.0;
  SupNormOptions sup;
};

struct ModerateEvidence {
  int n = 0;
  std::optional<int> N;  // smallest N that worked for every basis
  // Witness at that N (or at N_max if none worked), one per basis.
  std::vector<BoundWitness> witnesses;
};

struct NullEvidence {
  int n = 0;
  int q = 0;
  std::optional<int> p;  // smallest class p whose members all reached order q
};

struct BasisEstimate {
  std::string phi_id;
  int n = 0;
  OrderEstimate estimate;
};

struct ClassificationReport {
  std::string subject;
  Interval interval;
  std::vector<double> schedule;
  std::vector<std::string> basis_ids;
  std::vector<int> basis_classes;
  std::vector<BasisEstimate> estimates;  // every (basis, n) pair
  std::vector<ModerateEvidence> moderate;  // one per n
  std::optional<int> moderate_N;  // one N covering every tested n
  std::vector<NullEvidence> null_evidence;  // one per (n, q)
  Verdict verdict = Verdict::neither;
  std::vector<std::string> notes;
};

// Bases covering A_0 .. A_qmax: a shifted bump (A_0 only), the even bump
// (A_1) and construct_Aq(p) for 2 <= p <= q_max.
[[nodiscard]] std::vector<TestFunction> default_bases(int q_max);

// Evidence-based membership test for the moderate and null sets, with the
// derivative orders 0..n_max included. Throws ConfigurationError when the
// bases cannot support the requested q_max.
[[nodiscard]] ClassificationReport classify(const GeneralizedFunction& a, std::span<const TestFunction> bases,
                                            const ClassifyConfig& config = {});

// classify(a - b).
[[nodiscard]] ClassificationReport equivalent(const GeneralizedFunction& a, const GeneralizedFunction& b,
                                              std::span<const TestFunction> bases,
                                              const ClassifyConfig& config = {});

void write_report_text(std::ostream& os, const ClassificationReport& report);
// Rows epsilon,sup_norm,deriv_order,phi_id,subject_id.
void write_report_csv(std::ostream& os, const ClassificationReport& report, char delimiter = ',');

}  // namespace colombeau
