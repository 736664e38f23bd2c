// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance [output-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "colombeau/asymptotics.hpp"
#include "colombeau/cli.hpp"
#include "colombeau/exprlang.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/mollifier.hpp"
#include "expr_gen.hpp"
#include "oracles.hpp"

using namespace colombeau;
namespace fs = std::filesystem;

namespace {

const Interval kUnit{-1.0, 1.0};

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<double> grid401() {
  std::vector<double> ys;
  for (int i = 0; i < 401; ++i) ys.push_back(-1.0 + 2.0 * i / 400.0);
  return ys;
}

void mollifiers(Check& c) {
  double worst_mass = 0.0, worst_moment = 0.0;
  for (int q = 1; q <= 6; ++q) {
    const TestFunction phi = construct_Aq(q);
    const auto m = moments(phi, q);
    worst_mass = std::max(worst_mass, std::abs(m[0] - 1.0));
    for (int r = 1; r <= q; ++r) worst_moment = std::max(worst_moment, std::abs(m[r]));
    for (std::size_t k = 1; k < phi.lambda().size(); k += 2) {
      c.require(phi.lambda()[k] == 0.0, "odd lambda nonzero at q=" + std::to_string(q));
    }
  }
  c.require(worst_mass <= 1e-10, "mass");
  c.require(worst_moment <= 1e-8, "vanishing moments");
  c.detail << "max|m0-1|=" << worst_mass << " max|m_r|=" << worst_moment;
}

void reflection(Check& c) {
  const TestFunction b = make_bump();
  const EpsSchedule s = EpsSchedule::make_default();
  const double d = estimate_order(delta_bar(), b, kUnit, s, 0).slope;
  const double d2 = estimate_order(product(delta_bar(), delta_bar()), b, kUnit, s, 0).slope;
  c.require(std::abs(d + 1.0) <= 0.01, "delta order");
  c.require(std::abs(d2 + 2.0) <= 0.02, "delta^2 order");
  c.detail << "delta=" << d << " delta^2=" << d2;
  for (int n = 0; n <= 2; ++n) {
    const double dn = estimate_order(delta_bar(), b, kUnit, s, n).slope;
    c.require(std::abs(dn + (n + 1)) <= 0.05, "delta derivative n=" + std::to_string(n));
    c.detail << " D^" << n << "=" << dn;
  }
}

void embedding(Check& c) {
  const SmoothPrimitive f = SmoothPrimitive::tanh_scaled(10.0);
  const GeneralizedFunction err = difference(regular_bar(f), tilde(f));
  const EpsSchedule s = EpsSchedule::make_default();
  const double o1 = estimate_order(err, construct_Aq(1), kUnit, s, 0).slope;
  const double o3 = estimate_order(err, construct_Aq(3), kUnit, s, 0).slope;
  c.require(o1 >= 1.75, "A1 order");
  c.require(o3 >= 3.5, "A3 order");
  c.detail << "A1 order=" << o1 << " A3 order=" << o3;
}

void powers(Check& c) {
  const ScaledTestFunction phi = scale(make_bump(), 0.1);
  const GeneralizedFunction th = heaviside_bar();
  const double v1 = evaluate(th, phi, 0.0);
  const double v2 = evaluate(product(th, th), phi, 0.0);
  c.require(std::abs(v1 - 0.5) <= 1e-6, "theta(0)");
  c.require(std::abs(v2 - 0.25) <= 1e-6, "theta^2(0)");
  const ClassifyConfig cfg;
  const ClassificationReport r = classify(difference(product(th, th), th), default_bases(cfg.q_max), cfg);
  c.require(r.verdict != Verdict::null, "theta^2 - theta classified null");
  c.detail << "theta(0)=" << v1 << " theta^2(0)=" << v2 << " verdict=" << verdict_name(r.verdict);
}

void derivative_identity(Check& c) {
  const auto ys = grid401();
  const TestFunction b = make_bump();
  for (double eps : {0.2, 0.1, 0.01}) {
    const ScaledTestFunction phi = scale(b, eps);
    const auto dth = evaluate_grid(heaviside_bar(), phi, ys, 1);
    const auto del = evaluate_grid(delta_bar(), phi, ys, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) worst = std::max(worst, std::abs(dth[i] - del[i]));
    c.require(worst <= 1e-8, "eps=" + std::to_string(eps));
    c.detail << "eps=" << eps << ":" << worst << " ";
  }
}

void null_example_ideal(Check& c) {
  const GeneralizedFunction n = null_example();
  const TestFunction b = make_bump();
  const double right = b.support().hi;
  bool zero = true;
  for (double eps : {0.999 / right, 0.5, 0.1, 0.01, 1e-4}) {
    for (double y : grid401()) zero = zero && evaluate(n, scale(b, eps), y) == 0.0;
  }
  c.require(zero, "exact zero below 1/b");
  const ClassifyConfig cfg;
  const auto bases = default_bases(cfg.q_max);
  const Verdict v1 = classify(n, bases, cfg).verdict;
  const Verdict v2 = classify(product(n, delta_bar()), bases, cfg).verdict;
  c.require(v1 == Verdict::null, "N not null");
  c.require(v2 == Verdict::null, "N*delta not null");
  c.detail << "N: " << verdict_name(v1) << ", N*delta: " << verdict_name(v2);
}

GeneralizedFunction power_law(int k) {
  return custom_leaf("pow" + std::to_string(k), [k](const ScaledTestFunction& phi, double y, int n) {
    Jet out(n);
    const double c = std::pow(phi.epsilon(), k);
    const double d[] = {std::cos(y), -std::sin(y), -std::cos(y), std::sin(y)};
    for (int j = 0; j <= n; ++j) out[j] = c * d[j % 4];
    return out;
  });
}

void calibration(Check& c) {
  const TestFunction b = make_bump();
  const EpsSchedule s = EpsSchedule::make_default();
  double worst = 0.0;
  for (int k = -3; k <= 4; ++k) {
    const OrderEstimate e = estimate_order(power_law(k), b, kUnit, s, 0);
    worst = std::max(worst, std::abs(e.slope - k));
  }
  c.require(worst <= 1e-6, "power-law slope");
  const GeneralizedFunction n = null_example();
  const std::vector<GeneralizedFunction> family = {n, product(n, delta_bar()), product(heaviside_bar(), n),
                                                   sum(n, scalar(3.0, n)), derivative(1, n)};
  int zeros = 0;
  for (const auto& g : family) {
    for (int d = 0; d <= 2; ++d) zeros += estimate_order(g, b, kUnit, s, d).exact_zero ? 1 : 0;
  }
  c.require(zeros == static_cast<int>(family.size()) * 3, "exact-zero short-circuit");
  c.detail << "max slope error=" << worst << " exact zeros " << zeros << "/" << family.size() * 3;
}

void parser(Check& c) {
  using namespace exprgen;
  RandomExpr gen(20240601);
  int passed = 0;
  for (int i = 0; i < 1000; ++i) passed += round_trips(gen.make(1 + i % 6)) ? 1 : 0;
  c.require(passed == 1000, "round-trip");
  c.require(parse("delta*delta") == *prod(delta(), delta()), "delta*delta");
  c.require(parse("bar(tanh10) - tilde(tanh10)") ==
                *sum(node(ast::Bar{fn("tanh10")}), scal(-1.0, node(ast::Tilde{fn("tanh10")}))),
            "bar - tilde");
  c.require(parse("D(heaviside)") == *deriv(1, heaviside()), "D(heaviside)");
  bool diag = false;
  try {
    (void)parse("delta + heavyside");
  } catch (const ParseError& e) {
    diag = e.offset() == 8 && std::string(e.what()).find("heavyside") != std::string::npos &&
           !e.suggestions().empty();
  }
  c.require(diag, "unknown identifier diagnostic");
  c.detail << "round-trip " << passed << "/1000";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    std::vector<double> out;
    if (it == header.end()) return out;
    const auto idx = static_cast<std::size_t>(it - header.begin());
    for (const auto& r : rows) out.push_back(r.at(idx));
    return out;
  }
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) return t;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    t.rows.push_back(row);
  }
  return t;
}

double peak(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void figures(Check& c, const fs::path& outdir) {
  fs::create_directories(outdir);
  std::ostringstream out, err;
  const int code = cli::run({"colombeau", "figures", "--outdir", outdir.string()}, out, err);
  c.require(code == 0, "figures exit code " + std::to_string(code) + " " + err.str());
  for (const char* f : {"fig1_phi1.csv", "fig1_phi3.csv", "fig2_heaviside.csv", "fig3_smoothed.csv", "fig3_error.csv"}) {
    c.require(fs::exists(outdir / f), std::string("missing ") + f);
  }
  if (!c.ok) return;
  const Table phi3 = read_table(outdir / "fig1_phi3.csv");
  const auto ys = phi3.column("phi");
  const double mass = oracle::trapezoid_samples(phi3.column("x"), ys);
  c.require(!ys.empty() && *std::min_element(ys.begin(), ys.end()) < 0.0, "phi3 negative lobe");
  c.require(std::abs(mass - 1.0) <= 1e-3, "phi3 mass");
  const auto tb = read_table(outdir / "fig2_heaviside.csv").column("thetabar");
  c.require(!tb.empty() && std::is_sorted(tb.begin(), tb.end()), "thetabar nondecreasing");
  const Table e = read_table(outdir / "fig3_error.csv");
  const double ratio = peak(e.column("phi3_eps0.02")) / peak(e.column("phi3_eps0.01"));
  c.require(ratio >= 16.0 * 0.7, "error contraction");
  c.detail << "phi3 mass=" << mass << " contraction=" << ratio;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path outdir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "colombeau_acceptance";

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"mollifier construction", mollifiers},
      {"reflection and moderation", reflection},
      {"embedding equivalence", embedding},
      {"non-equivalence of powers", powers},
      {"derivative identity", derivative_identity},
      {"null example and ideal", null_example_ideal},
      {"estimator calibration", calibration},
      {"parser", parser},
      {"figure reproduction", [&](Check& c) { figures(c, outdir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    c.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok) ++failures;
    std::printf("%s %zu %s (%.1fs): %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                c.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
