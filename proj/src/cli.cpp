#include "colombeau/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "colombeau/asymptotics.hpp"
#include "colombeau/error.hpp"
#include "colombeau/exprlang.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/mollifier.hpp"

namespace colombeau::cli {
namespace {

namespace fs = std::filesystem;

// Bad parameter values; maps to kUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

char delimiter_for(const std::string& format) {
  if (format == "csv") return ',';
  if (format == "tsv") return '\t';
  throw UsageError("--format must be csv or tsv, got '" + format + "'");
}

// Rows of numbers with a header, written to a temp file and renamed into
// place only after everything succeeded.
class Table {
 public:
  Table(std::vector<std::string> header, char delimiter) : header_(std::move(header)), delimiter_(delimiter) {}

  void add_row(const std::vector<double>& row) { rows_.push_back(row); }

  [[nodiscard]] const std::vector<std::vector<double>>& rows() const { return rows_; }

  void write(const fs::path& path) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? std::string(1, delimiter_) : "") << header_[i];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, delimiter_) : "") << g17(row[i]);
      os << '\n';
    }
    write_atomically(path, os.str());
  }

  static void write_atomically(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
      f << content;
      f.flush();
      if (!f) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw IoError("cannot move output into '" + path.string() + "'");
    }
  }

 private:
  std::vector<std::string> header_;
  char delimiter_;
  std::vector<std::vector<double>> rows_;
};

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(i == count - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  }
  return out;
}

TestFunction mollifier_for(int q, double halfwidth = 1.0) { return construct_Aq(q, make_bump(halfwidth)); }

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void validate_q(int q) {
  require(q >= 0 && q <= kMaxClassOrder, "--q must lie in [0, " + std::to_string(kMaxClassOrder) + "]");
}

void validate_interval(const std::vector<double>& iv) {
  require(iv.size() == 2 && std::isfinite(iv[0]) && std::isfinite(iv[1]) && iv[0] < iv[1],
          "--interval needs two finite numbers A < B");
}

struct ScheduleArgs {
  double start = 0.2;
  double ratio = 0.5;
  int count = 9;

  [[nodiscard]] EpsSchedule build() const {
    require(start > 0.0 && std::isfinite(start), "--eps-start must be positive");
    require(ratio > 0.0 && ratio < 1.0, "--eps-ratio must lie in (0, 1)");
    require(count >= 4 && count <= 60, "--eps-count must lie in [4, 60]");
    return EpsSchedule::geometric(start, ratio, count);
  }
};

void add_schedule_options(CLI::App* cmd, ScheduleArgs& s) {
  cmd->add_option("--eps-start", s.start, "Largest epsilon")->capture_default_str();
  cmd->add_option("--eps-ratio", s.ratio, "Ratio between successive epsilons")->capture_default_str();
  cmd->add_option("--eps-count", s.count, "Number of epsilons")->capture_default_str();
}

// ---------------------------------------------------------------------------

struct MollifierArgs {
  int q = 1;
  double halfwidth = 1.0;
  int samples = 401;
  std::string out;
  std::string format = "csv";
};

void cmd_mollifier(const MollifierArgs& a, std::ostream& out) {
  validate_q(a.q);
  require(a.halfwidth > 0.0 && std::isfinite(a.halfwidth), "--halfwidth must be positive");
  require(a.samples >= 2, "--samples must be >= 2");
  const char d = delimiter_for(a.format);

  const TestFunction phi = mollifier_for(a.q, a.halfwidth);
  Table t({"x", "phi", "deriv1"}, d);
  for (const double x : uniform_grid(-a.halfwidth, a.halfwidth, a.samples)) {
    const Jet j = phi.jet(x, 1);
    t.add_row({x, j[0], j[1]});
  }
  t.write(a.out);

  const auto lambda = phi.lambda();
  out << "lambda:";
  for (const double l : lambda) out << " " << g17(l);
  out << "\n";
  const auto m = moments(phi, a.q);
  out << "moments:\n";
  for (std::size_t r = 0; r < m.size(); ++r) out << "  m" << r << " = " << g17(m[r]) << "\n";
}

struct EvalArgs {
  std::string expr;
  int q = 1;
  double eps = 0.1;
  std::vector<double> interval{-1.0, 1.0};
  int grid = 401;
  std::string out;
  std::string format = "csv";
};

void cmd_eval(const EvalArgs& a) {
  validate_q(a.q);
  require(a.eps > 0.0 && std::isfinite(a.eps), "--eps must be positive");
  validate_interval(a.interval);
  require(a.grid >= 2, "--grid must be >= 2");
  const char d = delimiter_for(a.format);
  const GeneralizedFunction g = parse_gf(a.expr);

  const ScaledTestFunction phi = scale(mollifier_for(a.q), a.eps);
  const auto ys = uniform_grid(a.interval[0], a.interval[1], a.grid);
  const auto values = evaluate_grid(g, phi, ys, 0);
  Table t({"y", "value"}, d);
  for (std::size_t i = 0; i < ys.size(); ++i) t.add_row({ys[i], values[i]});
  t.write(a.out);
}

struct OrderArgs {
  std::string expr;
  int q = 1;
  ScheduleArgs schedule;
  int deriv = 0;
  std::vector<double> interval{-1.0, 1.0};
  int grid = kDefaultGridPoints;
  std::string out;
  std::string format = "csv";
};

void cmd_order(const OrderArgs& a, std::ostream& out) {
  validate_q(a.q);
  const EpsSchedule schedule = a.schedule.build();
  require(a.deriv >= 0 && a.deriv <= 8, "--deriv must lie in [0, 8]");
  validate_interval(a.interval);
  require(a.grid >= kMinGridPoints, "--grid must be >= " + std::to_string(kMinGridPoints));
  const char d = delimiter_for(a.format);
  const GeneralizedFunction g = parse_gf(a.expr);

  SupNormOptions opts;
  opts.grid_points = a.grid;
  const OrderEstimate est =
      estimate_order(g, mollifier_for(a.q), {a.interval[0], a.interval[1]}, schedule, a.deriv, opts);
  Table t({"epsilon", "sup_norm"}, d);
  for (const auto& p : est.points) t.add_row({p.epsilon, p.sup_norm});
  t.write(a.out);
  if (est.exact_zero) {
    out << "slope=exact-zero residual=0\n";
  } else {
    out << "slope=" << g17(est.slope) << " residual=" << g17(est.residual) << "\n";
  }
}

struct ClassifyArgs {
  std::string expr;
  int q_max = 3;
  int N_max = 4;
  int n_max = 2;
  ScheduleArgs schedule;
  std::vector<double> interval{-1.0, 1.0};
  int grid = kDefaultGridPoints;
  std::string out;
  std::string csv;
  std::string format = "csv";
};

void cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  require(a.q_max >= 1 && a.q_max <= kMaxClassOrder, "--q-max must lie in [1, " + std::to_string(kMaxClassOrder) + "]");
  require(a.N_max >= 0 && a.N_max <= 20, "--N-max must lie in [0, 20]");
  require(a.n_max >= 0 && a.n_max <= 4, "--n-max must lie in [0, 4]");
  validate_interval(a.interval);
  require(a.grid >= kMinGridPoints, "--grid must be >= " + std::to_string(kMinGridPoints));
  const char d = delimiter_for(a.format);
  ClassifyConfig config;
  config.schedule = a.schedule.build();
  config.q_max = a.q_max;
  config.N_max = a.N_max;
  config.n_max = a.n_max;
  config.interval = {a.interval[0], a.interval[1]};
  config.sup.grid_points = a.grid;
  const GeneralizedFunction g = parse_gf(a.expr);

  const auto bases = default_bases(a.q_max);
  const ClassificationReport report = classify(g, bases, config);
  std::ostringstream text;
  write_report_text(text, report);
  Table::write_atomically(a.out, text.str());
  if (!a.csv.empty()) {
    std::ostringstream rows;
    write_report_csv(rows, report, d);
    Table::write_atomically(a.csv, rows.str());
  }
  out << "verdict: " << verdict_name(report.verdict) << "\n";
  if (report.moderate_N) out << "moderate_N: " << *report.moderate_N << "\n";
}

}  // namespace

void write_figures(const fs::path& outdir, char d) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec || !fs::is_directory(outdir)) throw IoError("cannot create output directory '" + outdir.string() + "'");

  const TestFunction bump = make_bump(1.0);
  const TestFunction phi1 = construct_Aq(1, bump);
  const TestFunction phi3 = construct_Aq(3, bump);
  const auto xs = uniform_grid(-1.0, 1.0, 401);

  for (const auto& [phi, name] : {std::pair{phi1, "fig1_phi1.csv"}, std::pair{phi3, "fig1_phi3.csv"}}) {
    Table t({"x", "phi", "deriv1"}, d);
    for (const double x : xs) {
      const Jet j = phi.jet(x, 1);
      t.add_row({x, j[0], j[1]});
    }
    t.write(outdir / name);
  }

  {
    const ScaledTestFunction phi = scale(phi1, 0.1);
    const GeneralizedFunction theta = heaviside_bar();
    Table t({"y", "theta", "thetabar", "thetabar_sq"}, d);
    for (const double y : xs) {
      const double tb = evaluate(theta, phi, y);
      t.add_row({y, y >= 0.0 ? 1.0 : 0.0, tb, tb * tb});
    }
    t.write(outdir / "fig2_heaviside.csv");
  }

  const SmoothPrimitive f = SmoothPrimitive::tanh_scaled(10.0);
  const GeneralizedFunction fbar = regular_bar(f);
  const GeneralizedFunction diff = difference(fbar, tilde(f));
  {
    Table t({"y", "f", "phi1_eps0.2", "phi1_eps0.1", "phi3_eps0.2", "phi3_eps0.1"}, d);
    const ScaledTestFunction p1a = scale(phi1, 0.2), p1b = scale(phi1, 0.1);
    const ScaledTestFunction p3a = scale(phi3, 0.2), p3b = scale(phi3, 0.1);
    for (const double y : xs) {
      t.add_row({y, f(y), evaluate(fbar, p1a, y), evaluate(fbar, p1b, y), evaluate(fbar, p3a, y),
                 evaluate(fbar, p3b, y)});
    }
    t.write(outdir / "fig3_smoothed.csv");
  }
  {
    Table t({"y", "phi1_eps0.02", "phi1_eps0.01", "phi3_eps0.02", "phi3_eps0.01"}, d);
    const ScaledTestFunction p1a = scale(phi1, 0.02), p1b = scale(phi1, 0.01);
    const ScaledTestFunction p3a = scale(phi3, 0.02), p3b = scale(phi3, 0.01);
    for (const double y : xs) {
      t.add_row({y, evaluate(diff, p1a, y), evaluate(diff, p1b, y), evaluate(diff, p3a, y), evaluate(diff, p3b, y)});
    }
    t.write(outdir / "fig3_error.csv");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Colombeau generalized functions on the real line"};
  app.require_subcommand(1);

  MollifierArgs moll;
  auto* c_moll = app.add_subcommand("mollifier", "Construct a test function in A_q and sample it");
  c_moll->add_option("--q", moll.q, "Moment class q")->required();
  c_moll->add_option("--halfwidth", moll.halfwidth, "Half-width of the base bump")->capture_default_str();
  c_moll->add_option("--samples", moll.samples, "Number of sample points")->capture_default_str();
  c_moll->add_option("--out", moll.out, "Output CSV path")->required();
  c_moll->add_option("--format", moll.format, "csv or tsv")->capture_default_str();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Evaluate an expression on a y-grid");
  c_eval->add_option("--expr", ev.expr, "Expression")->required();
  c_eval->add_option("--q", ev.q, "Moment class of the test function")->required();
  c_eval->add_option("--eps", ev.eps, "Scaling epsilon")->required();
  c_eval->add_option("--interval", ev.interval, "y-interval A B")->expected(2);
  c_eval->add_option("--grid", ev.grid, "Number of grid points")->capture_default_str();
  c_eval->add_option("--out", ev.out, "Output CSV path")->required();
  c_eval->add_option("--format", ev.format, "csv or tsv")->capture_default_str();

  OrderArgs ord;
  auto* c_order = app.add_subcommand("order", "Estimate the epsilon-order of an expression");
  c_order->add_option("--expr", ord.expr, "Expression")->required();
  c_order->add_option("--q", ord.q, "Moment class of the test function")->required();
  add_schedule_options(c_order, ord.schedule);
  c_order->add_option("--deriv", ord.deriv, "y-derivative order")->capture_default_str();
  c_order->add_option("--interval", ord.interval, "y-interval A B")->expected(2);
  c_order->add_option("--grid", ord.grid, "Sup-norm grid points")->capture_default_str();
  c_order->add_option("--out", ord.out, "Output CSV path")->required();
  c_order->add_option("--format", ord.format, "csv or tsv")->capture_default_str();

  ClassifyArgs cls;
  auto* c_cls = app.add_subcommand("classify", "Classify an expression as moderate/null");
  c_cls->add_option("--expr", cls.expr, "Expression")->required();
  c_cls->add_option("--q-max", cls.q_max, "Largest null order tested")->capture_default_str();
  c_cls->add_option("--N-max", cls.N_max, "Largest growth exponent tested")->capture_default_str();
  c_cls->add_option("--n-max", cls.n_max, "Largest y-derivative order tested")->capture_default_str();
  add_schedule_options(c_cls, cls.schedule);
  c_cls->add_option("--interval", cls.interval, "y-interval A B")->expected(2);
  c_cls->add_option("--grid", cls.grid, "Sup-norm grid points")->capture_default_str();
  c_cls->add_option("--out", cls.out, "Report path")->required();
  c_cls->add_option("--csv", cls.csv, "Optional CSV of sup norms");
  c_cls->add_option("--format", cls.format, "csv or tsv (for --csv)")->capture_default_str();

  std::string outdir;
  std::string fig_format = "csv";
  auto* c_fig = app.add_subcommand("figures", "Write figure data CSVs");
  c_fig->add_option("--outdir", outdir, "Output directory")->required();
  c_fig->add_option("--format", fig_format, "csv or tsv")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_moll->parsed()) cmd_mollifier(moll, out);
    if (c_eval->parsed()) cmd_eval(ev);
    if (c_order->parsed()) cmd_order(ord, out);
    if (c_cls->parsed()) cmd_classify(cls, out);
    if (c_fig->parsed()) write_figures(outdir, delimiter_for(fig_format));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << "\n";
    return kConstruction;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const EvaluationError& e) {
    err << "evaluation failed: " << e.what() << "\n";
    return kEvaluation;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace colombeau::cli
