#include "colombeau/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "colombeau/error.hpp"

namespace colombeau {
namespace {

constexpr int kGoldenIterations = 80;

bool has_localized_leaf(const GeneralizedFunction& g) {
  struct Walker {
    bool operator()(const gf::DeltaBar&) const { return true; }
    bool operator()(const gf::HeavisideBar&) const { return true; }
    bool operator()(const gf::NullExample&) const { return true; }
    bool operator()(const gf::RegularBar&) const { return false; }
    bool operator()(const gf::Tilde&) const { return false; }
    bool operator()(const gf::Custom&) const { return false; }
    bool operator()(const gf::Sum& s) const { return has_localized_leaf(s.left) || has_localized_leaf(s.right); }
    bool operator()(const gf::Product& p) const { return has_localized_leaf(p.left) || has_localized_leaf(p.right); }
    bool operator()(const gf::Scalar& s) const { return has_localized_leaf(s.child); }
    bool operator()(const gf::Derivative& d) const { return has_localized_leaf(d.child); }
  };
  return std::visit(Walker{}, g.node().v);
}

void append_uniform(std::vector<double>& out, Interval iv, int points) {
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out.push_back(i == points - 1 ? iv.hi : iv.lo + t * iv.width());
  }
}

std::vector<double> sup_grid(const GeneralizedFunction& a, const TestFunction& phi, double epsilon, Interval interval,
                             int grid_points) {
  std::vector<double> ys;
  append_uniform(ys, interval, grid_points);
  if (has_localized_leaf(a)) {
    const Interval s = phi.support();
    const Interval layer{std::max(interval.lo, -epsilon * s.hi), std::min(interval.hi, -epsilon * s.lo)};
    if (layer.lo < layer.hi && layer.width() < interval.width()) append_uniform(ys, layer, grid_points);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

void validate_sup_inputs(double epsilon, Interval interval, int n, const SupNormOptions& opts) {
  if (opts.grid_points < kMinGridPoints) {
    throw ContractViolation("sup_norm: grid_points must be >= " + std::to_string(kMinGridPoints));
  }
  if (!(interval.lo < interval.hi)) throw ContractViolation("sup_norm: interval must have lo < hi");
  if (!(epsilon > 0.0)) throw ContractViolation("sup_norm: epsilon must be positive");
  if (n < 0) throw ContractViolation("sup_norm: derivative order must be >= 0");
}

// Maximizes |g| on [lo, hi] by golden-section search, returning the best
// value seen.
template <typename F>
double golden_max(F&& g, double lo, double hi, double best) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = std::abs(g(x1));
  double f2 = std::abs(g(x2));
  best = std::max({best, f1, f2});
  for (int it = 0; it < kGoldenIterations && x1 < x2; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = std::abs(g(x1));
      best = std::max(best, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = std::abs(g(x2));
      best = std::max(best, f2);
    }
  }
  return best;
}

// Sup norms for every derivative order 0..n_max, sharing the grid pass.
std::vector<double> sup_norms_to_order(const GeneralizedFunction& a, const TestFunction& phi, double epsilon,
                                       Interval interval, int n_max, const SupNormOptions& opts) {
  validate_sup_inputs(epsilon, interval, n_max, opts);
  const ScaledTestFunction phi_eps = scale(phi, epsilon);
  const std::vector<double> ys = sup_grid(a, phi, epsilon, interval, opts.grid_points);

  std::vector<Jet> values;
  values.reserve(ys.size());
  for (const double y : ys) values.push_back(evaluate_jet(a, phi_eps, y, n_max, opts.eval));

  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double v = std::abs(values[i][n]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (best > 0.0) {
      const double lo = ys[arg == 0 ? 0 : arg - 1];
      const double hi = ys[std::min(arg + 1, ys.size() - 1)];
      best = golden_max([&](double y) { return evaluate_derivative(a, phi_eps, y, n, opts.eval); }, lo, hi, best);
    }
    out[static_cast<std::size_t>(n)] = best;
  }
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s, char delimiter) {
  if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos &&
      s.find('\n') == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

EpsSchedule::EpsSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("eps schedule must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw ContractViolation("eps schedule values must be positive and finite");
    }
    if (i > 0 && !(values_[i] < values_[i - 1])) {
      throw ContractViolation("eps schedule must be strictly decreasing");
    }
  }
}

EpsSchedule EpsSchedule::make_default() { return geometric(0.2, 0.5, 9); }

EpsSchedule EpsSchedule::geometric(double start, double ratio, int count) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ContractViolation("eps ratio must lie in (0, 1)");
  if (count < 1) throw ContractViolation("eps count must be >= 1");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count));
  double eps = start;
  for (int k = 0; k < count; ++k) {
    v.push_back(eps);
    eps *= ratio;
  }
  return EpsSchedule(std::move(v));
}

double sup_norm(const GeneralizedFunction& a, const TestFunction& phi, double epsilon, Interval interval, int n,
                const SupNormOptions& opts) {
  validate_sup_inputs(epsilon, interval, n, opts);
  const ScaledTestFunction phi_eps = scale(phi, epsilon);
  const std::vector<double> ys = sup_grid(a, phi, epsilon, interval, opts.grid_points);
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double v = std::abs(evaluate_derivative(a, phi_eps, ys[i], n, opts.eval));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (best > 0.0) {
    const double lo = ys[arg == 0 ? 0 : arg - 1];
    const double hi = ys[std::min(arg + 1, ys.size() - 1)];
    best = golden_max([&](double y) { return evaluate_derivative(a, phi_eps, y, n, opts.eval); }, lo, hi, best);
  }
  return best;
}

std::vector<OrderPoint> sup_norm_series(const GeneralizedFunction& a, const TestFunction& phi, Interval interval,
                                        const EpsSchedule& schedule, int n, const SupNormOptions& opts) {
  std::vector<OrderPoint> out;
  out.reserve(schedule.size());
  for (const double eps : schedule.values()) out.push_back({eps, sup_norm(a, phi, eps, interval, n, opts)});
  return out;
}

OrderEstimate fit_order(std::span<const OrderPoint> points) {
  if (points.size() < 3) throw ContractViolation("fit_order: need at least 3 points");
  OrderEstimate est;
  est.points.assign(points.begin(), points.end());
  const std::size_t window = std::min(kFitWindow, points.size());
  const auto tail = points.subspan(points.size() - window);

  // Zeros running to the small-epsilon end mean the subject vanishes there.
  std::size_t first_zero = tail.size();
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (tail[i].sup_norm == 0.0) {
      first_zero = i;
      break;
    }
  }
  const bool zero_suffix =
      first_zero < tail.size() &&
      std::all_of(tail.begin() + static_cast<std::ptrdiff_t>(first_zero), tail.end(),
                  [](const OrderPoint& p) { return p.sup_norm == 0.0; });

  std::vector<OrderPoint> usable;
  for (const auto& p : tail) {
    if (p.sup_norm > 0.0) usable.push_back(p);
  }
  if (zero_suffix || usable.size() < 3) {
    est.exact_zero = true;
    est.slope = std::numeric_limits<double>::infinity();
    est.fit_count = 0;
    return est;
  }

  double sx = 0.0, sy = 0.0;
  for (const auto& p : usable) {
    sx += std::log(p.epsilon);
    sy += std::log(p.sup_norm);
  }
  const double count = static_cast<double>(usable.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : usable) {
    const double dx = std::log(p.epsilon) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.sup_norm) - my);
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  for (const auto& p : usable) {
    const double dev = std::log(p.sup_norm) - (est.intercept + est.slope * std::log(p.epsilon));
    est.residual = std::max(est.residual, std::abs(dev));
  }
  est.fit_count = usable.size();
  return est;
}

OrderEstimate estimate_order(const GeneralizedFunction& a, const TestFunction& phi, Interval interval,
                             const EpsSchedule& schedule, int n, const SupNormOptions& opts) {
  if (schedule.size() < 4) throw ContractViolation("estimate_order: schedule needs at least 4 points");
  const auto points = sup_norm_series(a, phi, interval, schedule, n, opts);
  return fit_order(points);
}

BoundWitness bound_from_points(std::span<const OrderPoint> points, int q, double c_margin, Interval interval) {
  if (!(c_margin >= 1.0)) throw ContractViolation("check_bound: C_margin must be >= 1");
  if (points.empty()) throw ContractViolation("check_bound: no points");
  std::vector<OrderPoint> scaled;
  scaled.reserve(points.size());
  double max_scaled = 0.0;
  for (const auto& p : points) {
    const double s = std::pow(p.epsilon, -q) * p.sup_norm;
    scaled.push_back({p.epsilon, s});
    max_scaled = std::max(max_scaled, s);
  }
  BoundWitness w;
  w.q = q;
  w.C = c_margin * std::max(max_scaled, std::numeric_limits<double>::min());
  w.eta = points.front().epsilon;
  w.interval = interval;
  if (scaled.size() < 3) {
    w.satisfied = scaled.back().sup_norm <= w.C;
    return w;
  }
  const OrderEstimate fit = fit_order(scaled);
  w.scaled_slope = fit.slope;
  w.satisfied = fit.exact_zero || (scaled.back().sup_norm <= w.C && fit.slope >= kBoundSlopeFloor);
  return w;
}

BoundWitness check_bound(const GeneralizedFunction& a, const TestFunction& phi, int q, Interval interval,
                         const EpsSchedule& schedule, int n, double c_margin, const SupNormOptions& opts) {
  if (!(c_margin >= 1.0)) throw ContractViolation("check_bound: C_margin must be >= 1");
  const auto points = sup_norm_series(a, phi, interval, schedule, n, opts);
  return bound_from_points(points, q, c_margin, interval);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::moderate: return "moderate";
    case Verdict::null: return "null";
    case Verdict::neither: return "neither-at-tested-resolution";
  }
  return "?";
}

std::vector<TestFunction> default_bases(int q_max) {
  std::vector<TestFunction> out;
  const TestFunction bump = make_bump(1.0);
  out.push_back(translate(bump, 0.25));
  out.push_back(bump);
  for (int p = 2; p <= q_max; ++p) out.push_back(construct_Aq(p, bump));
  return out;
}

ClassificationReport classify(const GeneralizedFunction& a, std::span<const TestFunction> bases,
                              const ClassifyConfig& config) {
  if (bases.empty()) throw ConfigurationError("classify: no test functions supplied");
  if (config.n_max < 0 || config.q_max < 1 || config.N_max < 0) {
    throw ConfigurationError("classify: need n_max >= 0, q_max >= 1, N_max >= 0");
  }
  if (config.schedule.size() < 4) throw ConfigurationError("classify: schedule needs at least 4 points");
  int top_class = -1;
  for (const auto& b : bases) {
    if (!b.claimed_class()) {
      throw ConfigurationError("classify: test function '" + b.label() + "' has no class claim (not in A_0)");
    }
    top_class = std::max(top_class, *b.claimed_class());
  }
  if (top_class < config.q_max) {
    throw ConfigurationError("classify: no test function of class A_" + std::to_string(config.q_max) +
                             " or higher among the bases");
  }

  ClassificationReport report;
  report.subject = a.to_string();
  report.interval = config.interval;
  report.schedule.assign(config.schedule.values().begin(), config.schedule.values().end());
  for (const auto& b : bases) {
    report.basis_ids.push_back(b.label());
    report.basis_classes.push_back(*b.claimed_class());
  }

  // series[b][n] = sup norms over the schedule.
  const std::size_t nb = bases.size();
  const auto n_count = static_cast<std::size_t>(config.n_max) + 1;
  std::vector<std::vector<std::vector<OrderPoint>>> series(nb, std::vector<std::vector<OrderPoint>>(n_count));
  for (std::size_t b = 0; b < nb; ++b) {
    for (const double eps : config.schedule.values()) {
      const auto norms = sup_norms_to_order(a, bases[b], eps, config.interval, config.n_max, config.sup);
      for (std::size_t n = 0; n < n_count; ++n) series[b][n].push_back({eps, norms[n]});
    }
  }
  std::vector<std::vector<OrderEstimate>> est(nb, std::vector<OrderEstimate>(n_count));
  for (std::size_t n = 0; n < n_count; ++n) {
    for (std::size_t b = 0; b < nb; ++b) {
      est[b][n] = fit_order(series[b][n]);
      report.estimates.push_back({report.basis_ids[b], static_cast<int>(n), est[b][n]});
      if (!est[b][n].asymptotic()) {
        std::ostringstream note;
        note << "phi=" << report.basis_ids[b] << " n=" << n << ": residual " << est[b][n].residual
             << " > " << kAsymptoticResidual << ", fit not in asymptotic regime";
        report.notes.push_back(note.str());
      }
    }
  }

  bool moderate_ok = true;
  int overall_N = 0;
  for (std::size_t n = 0; n < n_count; ++n) {
    ModerateEvidence ev;
    ev.n = static_cast<int>(n);
    for (int N = 0; N <= config.N_max; ++N) {
      std::vector<BoundWitness> ws;
      bool all = true;
      for (std::size_t b = 0; b < nb; ++b) {
        ws.push_back(bound_from_points(series[b][n], -N, config.c_margin, config.interval));
        all = all && ws.back().satisfied;
      }
      ev.witnesses = std::move(ws);
      if (all) {
        ev.N = N;
        break;
      }
    }
    if (ev.N) {
      overall_N = std::max(overall_N, *ev.N);
    } else {
      moderate_ok = false;
    }
    report.moderate.push_back(std::move(ev));
  }
  if (moderate_ok) report.moderate_N = overall_N;

  bool null_ok = true;
  for (std::size_t n = 0; n < n_count; ++n) {
    for (int q = 1; q <= config.q_max; ++q) {
      NullEvidence ev;
      ev.n = static_cast<int>(n);
      ev.q = q;
      for (int p = 0; p <= config.q_max && !ev.p; ++p) {
        bool any = false;
        bool all = true;
        for (std::size_t b = 0; b < nb; ++b) {
          if (*bases[b].claimed_class() < p) continue;
          any = true;
          all = all && est[b][n].at_least(q);
        }
        if (any && all) ev.p = p;
      }
      null_ok = null_ok && ev.p.has_value();
      report.null_evidence.push_back(ev);
    }
  }

  if (moderate_ok && null_ok) {
    report.verdict = Verdict::null;
  } else if (moderate_ok) {
    report.verdict = Verdict::moderate;
  } else {
    report.verdict = Verdict::neither;
  }
  return report;
}

ClassificationReport equivalent(const GeneralizedFunction& a, const GeneralizedFunction& b,
                                std::span<const TestFunction> bases, const ClassifyConfig& config) {
  ClassificationReport report = classify(difference(a, b), bases, config);
  if (report.verdict == Verdict::null) report.notes.push_back("equal in G(R) at tested resolution");
  return report;
}

void write_report_text(std::ostream& os, const ClassificationReport& r) {
  os << "subject: " << r.subject << "\n";
  os << "interval: [" << format_g17(r.interval.lo) << ", " << format_g17(r.interval.hi) << "]\n";
  os << "schedule:";
  for (const double e : r.schedule) os << " " << format_g17(e);
  os << "\n";
  os << "bases:";
  for (std::size_t i = 0; i < r.basis_ids.size(); ++i) os << " " << r.basis_ids[i] << "[A_" << r.basis_classes[i] << "]";
  os << "\n";
  os << "verdict: " << verdict_name(r.verdict) << " (at tested resolution)\n";
  os << "moderate_N: " << (r.moderate_N ? std::to_string(*r.moderate_N) : std::string("none")) << "\n";
  os << "moderate:\n";
  for (const auto& m : r.moderate) {
    os << "  n=" << m.n << " N=" << (m.N ? std::to_string(*m.N) : std::string("none")) << "\n";
    for (std::size_t b = 0; b < m.witnesses.size(); ++b) {
      const auto& w = m.witnesses[b];
      os << "    phi=" << r.basis_ids[b] << " q=" << w.q << " C=" << format_g17(w.C) << " eta=" << format_g17(w.eta)
         << " slope=" << format_g17(w.scaled_slope) << " satisfied=" << (w.satisfied ? "true" : "false") << "\n";
    }
  }
  os << "null:\n";
  for (const auto& ev : r.null_evidence) {
    os << "  n=" << ev.n << " q=" << ev.q << " p=" << (ev.p ? std::to_string(*ev.p) : std::string("none")) << "\n";
  }
  os << "orders:\n";
  for (const auto& e : r.estimates) {
    os << "  phi=" << e.phi_id << " n=" << e.n;
    if (e.estimate.exact_zero) {
      os << " exact-zero\n";
    } else {
      os << " slope=" << format_g17(e.estimate.slope) << " residual=" << format_g17(e.estimate.residual) << "\n";
    }
  }
  if (!r.notes.empty()) {
    os << "notes:\n";
    for (const auto& n : r.notes) os << "  " << n << "\n";
  }
}

void write_report_csv(std::ostream& os, const ClassificationReport& r, char d) {
  os << "epsilon" << d << "sup_norm" << d << "deriv_order" << d << "phi_id" << d << "subject_id\n";
  const std::string subject = csv_field(r.subject, d);
  for (const auto& e : r.estimates) {
    const std::string phi = csv_field(e.phi_id, d);
    for (const auto& p : e.estimate.points) {
      os << format_g17(p.epsilon) << d << format_g17(p.sup_norm) << d << e.n << d << phi << d << subject << "\n";
    }
  }
}

}  // namespace colombeau
