#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "colombeau/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using colombeau::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "colombeau");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("colombeau_cli_" + tag);
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::vector<double> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    REQUIRE(it != header.end());
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
  }
};

Csv read_csv(const std::string& path, char delim = ',') {
  std::ifstream in(path);
  REQUIRE(in.good());
  Csv csv;
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, delim);) csv.header.push_back(cell);
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, delim);) row.push_back(std::stod(cell));
    REQUIRE(row.size() == csv.header.size());
    csv.rows.push_back(row);
  }
  return csv;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double max_abs_moment(const std::string& stdout_text, int r_lo, int r_hi) {
  double worst = 0.0;
  for (int r = r_lo; r <= r_hi; ++r) {
    const std::string key = "m" + std::to_string(r) + " = ";
    const auto pos = stdout_text.find(key);
    REQUIRE(pos != std::string::npos);
    worst = std::max(worst, std::abs(std::stod(stdout_text.substr(pos + key.size()))));
  }
  return worst;
}

}  // namespace

TEST_CASE("mollifier: A3 has a negative lobe, A1 is nonnegative") {
  TempDir dir("mollifier");
  const Outcome r3 = invoke({"mollifier", "--q", "3", "--out", dir.file("phi3.csv")});
  REQUIRE(r3.code == 0);
  const Csv c3 = read_csv(dir.file("phi3.csv"));
  CHECK(c3.header == std::vector<std::string>{"x", "phi", "deriv1"});
  const auto phi3 = c3.column("phi");
  CHECK(*std::min_element(phi3.begin(), phi3.end()) < 0.0);
  CHECK(max_abs_moment(r3.out, 1, 3) <= 1e-8);
  CHECK(std::abs(max_abs_moment(r3.out, 0, 0) - 1.0) <= 1e-10);
  CHECK(r3.out.find("lambda:") != std::string::npos);

  const Outcome r1 = invoke({"mollifier", "--q", "1", "--samples", "101", "--out", dir.file("phi1.csv")});
  REQUIRE(r1.code == 0);
  const auto phi1 = read_csv(dir.file("phi1.csv")).column("phi");
  CHECK(phi1.size() == 101);
  CHECK(*std::min_element(phi1.begin(), phi1.end()) >= 0.0);
}

TEST_CASE("eval: heaviside and its square at the origin") {
  TempDir dir("eval");
  REQUIRE(invoke({"eval", "--expr", "heaviside", "--q", "1", "--eps", "0.1", "--out", dir.file("h.csv")}).code == 0);
  REQUIRE(invoke({"eval", "--expr", "heaviside*heaviside", "--q", "1", "--eps", "0.1", "--out", dir.file("h2.csv")})
              .code == 0);
  const Csv h = read_csv(dir.file("h.csv"));
  const Csv h2 = read_csv(dir.file("h2.csv"));
  CHECK(h.header == std::vector<std::string>{"y", "value"});
  REQUIRE(h.rows.size() == 401);
  CHECK(h.rows[200][0] == 0.0);
  CHECK(std::abs(h.rows[200][1] - 0.5) <= 1e-6);
  CHECK(std::abs(h2.rows[200][1] - 0.25) <= 1e-6);
}

TEST_CASE("eval: smoothed tanh is monotone and bounded") {
  TempDir dir("evaltanh");
  REQUIRE(invoke({"eval", "--expr", "bar(tanh10)", "--q", "1", "--eps", "0.1", "--out", dir.file("t.csv")}).code == 0);
  const auto v = read_csv(dir.file("t.csv")).column("value");
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
  for (double x : v) CHECK(std::abs(x) <= 1.0);
}

TEST_CASE("eval: tsv output and custom interval") {
  TempDir dir("evaltsv");
  REQUIRE(invoke({"eval", "--expr", "delta", "--q", "2", "--eps", "0.5", "--interval", "-0.5", "0.5", "--grid", "11",
                  "--format", "tsv", "--out", dir.file("d.tsv")})
              .code == 0);
  const Csv d = read_csv(dir.file("d.tsv"), '\t');
  REQUIRE(d.rows.size() == 11);
  CHECK(d.rows.front()[0] == -0.5);
  CHECK(d.rows.back()[0] == 0.5);
}

TEST_CASE("order: delta slope, smoothing error, and exact zero") {
  TempDir dir("order");
  const Outcome d = invoke({"order", "--expr", "delta", "--q", "1", "--out", dir.file("d.csv")});
  REQUIRE(d.code == 0);
  const auto pos = d.out.find("slope=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(d.out.substr(pos + 6)) + 1.0) <= 0.01);
  const Csv dc = read_csv(dir.file("d.csv"));
  CHECK(dc.header == std::vector<std::string>{"epsilon", "sup_norm"});
  CHECK(dc.rows.size() == 9);

  const Outcome f = invoke({"order", "--expr", "bar(tanh10) - tilde(tanh10)", "--q", "3", "--out", dir.file("f.csv")});
  REQUIRE(f.code == 0);
  CHECK(std::stod(f.out.substr(f.out.find("slope=") + 6)) >= 3.5);

  const Outcome n = invoke({"order", "--expr", "nullex", "--q", "1", "--out", dir.file("n.csv")});
  REQUIRE(n.code == 0);
  CHECK(n.out.find("slope=exact-zero") != std::string::npos);
}

TEST_CASE("classify: delta is moderate with N = 1") {
  TempDir dir("classify");
  const Outcome r = invoke({"classify", "--expr", "delta", "--n-max", "0", "--out", dir.file("r.txt"), "--csv",
                            dir.file("r.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("verdict: moderate") != std::string::npos);
  CHECK(r.out.find("moderate_N: 1") != std::string::npos);
  CHECK(slurp(dir.file("r.txt")).find("n=0 N=1") != std::string::npos);
  const std::string csv = slurp(dir.file("r.csv"));
  CHECK(csv.rfind("epsilon,sup_norm,deriv_order,phi_id,subject_id\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 9);
}

TEST_CASE("classify: heaviside squared minus heaviside is not null") {
  TempDir dir("classify2");
  const Outcome r = invoke({"classify", "--expr", "heaviside*heaviside - heaviside", "--n-max", "0", "--out",
                            dir.file("r.txt")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("verdict: null") == std::string::npos);
  CHECK(r.out.find("verdict: moderate") != std::string::npos);
}

TEST_CASE("exit codes and validation before output") {
  TempDir dir("codes");
  const std::string out = dir.file("never.csv");
  const Outcome bad_expr = invoke({"eval", "--expr", "delta +", "--q", "1", "--eps", "0.1", "--out", out});
  CHECK(bad_expr.code == 2);
  CHECK(bad_expr.err.find("offset 7") != std::string::npos);
  CHECK(invoke({"eval", "--expr", "delta", "--q", "1", "--eps", "-0.1", "--out", out}).code == 2);
  CHECK(invoke({"eval", "--expr", "delta", "--q", "1", "--eps", "0.1", "--grid", "1", "--out", out}).code == 2);
  CHECK(invoke({"eval", "--expr", "delta", "--q", "1", "--eps", "0.1", "--interval", "1", "-1", "--out", out}).code ==
        2);
  CHECK(invoke({"mollifier", "--q", "-1", "--out", out}).code == 2);
  CHECK(invoke({"mollifier", "--q", "99", "--out", out}).code == 2);
  CHECK(invoke({"mollifier", "--q", "2", "--halfwidth", "0", "--out", out}).code == 2);
  CHECK(invoke({"order", "--expr", "delta", "--q", "1", "--eps-ratio", "1.5", "--out", out}).code == 2);
  CHECK(invoke({"order", "--expr", "delta", "--q", "1", "--eps-count", "2", "--out", out}).code == 2);
  CHECK(invoke({"classify", "--expr", "delta", "--q-max", "0", "--out", out}).code == 2);
  CHECK(invoke({"eval", "--expr", "delta", "--q", "1", "--eps", "0.1", "--format", "xml", "--out", out}).code == 2);
  CHECK(invoke({"nosuch"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK_FALSE(fs::exists(out));
  std::size_t leftovers = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++leftovers;
  CHECK(leftovers == 0);
  CHECK(invoke({"mollifier", "--q", "1", "--out", dir.file("missing/dir/x.csv")}).code == 5);
}

TEST_CASE("identical runs produce byte-identical files") {
  TempDir dir("determinism");
  for (const char* name : {"a.csv", "b.csv"}) {
    REQUIRE(invoke({"eval", "--expr", "D(bar(tanh10))*heaviside + 2*delta", "--q", "3", "--eps", "0.05", "--out",
                    dir.file(name)})
                .code == 0);
  }
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(slurp(dir.file("a.csv")).find('\r') == std::string::npos);
}

TEST_CASE("figures: all files with the expected shape") {
  TempDir dir("figures");
  const Outcome r = invoke({"figures", "--outdir", dir.path().string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"fig1_phi1.csv", "fig1_phi3.csv", "fig2_heaviside.csv", "fig3_smoothed.csv", "fig3_error.csv"}) {
    CHECK(fs::exists(dir.path() / f));
  }
  const Csv phi3 = read_csv(dir.file("fig1_phi3.csv"));
  CHECK(std::abs(oracle::trapezoid_samples(phi3.column("x"), phi3.column("phi")) - 1.0) <= 1e-3);
  const Csv fig2 = read_csv(dir.file("fig2_heaviside.csv"));
  CHECK(fig2.header == std::vector<std::string>{"y", "theta", "thetabar", "thetabar_sq"});
  const auto tb = fig2.column("thetabar");
  for (std::size_t i = 1; i < tb.size(); ++i) CHECK(tb[i] >= tb[i - 1]);
  const Csv err = read_csv(dir.file("fig3_error.csv"));
  auto peak = [&](const std::string& col) {
    double m = 0.0;
    for (double v : err.column(col)) m = std::max(m, std::abs(v));
    return m;
  };
  CHECK(peak("phi3_eps0.02") / peak("phi3_eps0.01") >= 16.0 * 0.7);
  CHECK(peak("phi1_eps0.02") / peak("phi1_eps0.01") >= 4.0 * 0.7);
}
