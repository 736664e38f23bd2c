#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "colombeau/error.hpp"
#include "colombeau/jets.hpp"
#include "oracles.hpp"

using namespace colombeau;

namespace {

struct Case {
  std::string name;
  SmoothPrimitive f;
  oracle::LongFn reference;  // independent long-double implementation
  double lo;
  double hi;
};

std::vector<Case> cases() {
  return {
      {"poly", SmoothPrimitive::polynomial({1.0, -2.0, 0.5, 3.0, -1.0, 0.25}),
       [](long double x) { return 1.0L + x * (-2.0L + x * (0.5L + x * (3.0L + x * (-1.0L + x * 0.25L)))); }, -2.0,
       2.0},
      {"tanh1", SmoothPrimitive::tanh_scaled(1.0), [](long double x) { return std::tanh(x); }, -2.0, 2.0},
      {"tanh10", SmoothPrimitive::tanh_scaled(10.0), [](long double x) { return std::tanh(10.0L * x); }, -1.0, 1.0},
      {"sin", SmoothPrimitive::sine(), [](long double x) { return std::sin(x); }, -4.0, 4.0},
      {"exp", SmoothPrimitive::exponential(), [](long double x) { return std::exp(x); }, -2.0, 2.0},
      {"gauss", SmoothPrimitive::gaussian(), [](long double x) { return std::exp(-x * x); }, -2.0, 2.0},
      {"bump", SmoothPrimitive::bump(1.0),
       [](long double x) { return std::abs(x) < 1.0L ? std::exp(1.0L / (x * x - 1.0L)) : 0.0L; }, -0.9, 0.9},
      {"bump2", SmoothPrimitive::bump(2.0),
       [](long double x) { return std::abs(x) < 2.0L ? std::exp(1.0L / (x * x / 4.0L - 1.0L)) : 0.0L; }, -1.8, 1.8},
  };
}

// Length over which the function varies appreciably near x.
double length_scale(const std::string& name, double x) {
  if (name == "tanh10") return 0.1;
  if (name == "bump") return std::min(0.1, (1.0 - std::abs(x)) * (1.0 - std::abs(x)));
  if (name == "bump2") return std::min(0.2, 2.0 * (1.0 - std::abs(x) / 2.0) * (1.0 - std::abs(x) / 2.0));
  return 0.5;
}

double fd_step(int k, double length) {
  static const double base[] = {0.0, 1e-4, 1e-3, 1e-2, 2e-2};
  return base[k] * length;
}

}  // namespace

TEST_CASE("eval_jet: exponential at 0") {
  const Jet j = eval_jet(SmoothPrimitive::exponential(), 0.0, 3);
  CHECK(j == Jet{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("eval_jet: tanh at 0 matches closed form and finite differences") {
  const Jet j = eval_jet(SmoothPrimitive::tanh_scaled(1.0), 0.0, 3);
  const double expected[] = {0.0, 1.0, 0.0, -2.0};
  const oracle::LongFn ref = [](long double x) { return std::tanh(x); };
  for (int k = 0; k <= 3; ++k) {
    CHECK(j[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    CHECK(std::abs(j[k] - oracle::derivative(ref, 0.0, k, 1e-4, 1)) <= 1e-6);
  }
}

TEST_CASE("eval_jet: bump jets vanish at and beyond the support edge") {
  CHECK(eval_jet(SmoothPrimitive::bump(1.0), 1.0, 5) == Jet(5));
  for (const double x : {-3.0, -1.0, 1.0, 1.0000001, 7.5}) {
    const Jet j = eval_jet(SmoothPrimitive::bump(1.0), x, 8);
    for (const double v : j.derivatives()) CHECK(v == 0.0);
  }
  const Jet j = eval_jet(SmoothPrimitive::bump(0.5), 0.5, 6);
  for (const double v : j.derivatives()) CHECK(v == 0.0);
}

TEST_CASE("eval_jet: underflow guard returns exact zeros, not noise") {
  // u = 1/((x/h)^2 - 1) < log(DBL_MIN) + 50 very close to the edge.
  const double x = 1.0 - 1e-4;
  const Jet j = eval_jet(SmoothPrimitive::bump(1.0), x, 8);
  for (const double v : j.derivatives()) CHECK(v == 0.0);
  const Jet inside = eval_jet(SmoothPrimitive::bump(1.0), 1.0 - 1e-3, 8);
  for (const double v : inside.derivatives()) CHECK(std::isfinite(v));
}

TEST_CASE("eval_jet: every primitive agrees with Richardson finite differences") {
  std::mt19937_64 rng(0);
  for (const auto& c : cases()) {
    std::uniform_real_distribution<double> dist(c.lo, c.hi);
    for (int trial = 0; trial < 25; ++trial) {
      const double x = dist(rng);
      const Jet j = c.f.jet(x, 4);
      const double len = length_scale(c.name, x);
      for (int k = 0; k <= 4; ++k) {
        const double fd = oracle::derivative(c.reference, x, k, fd_step(k, len), 2);
        const double tol = 1e-5 * std::abs(fd) + 1e-7 * std::pow(len, -k);
        INFO(c.name << " x=" << x << " k=" << k << " jet=" << j[k] << " fd=" << fd);
        CHECK(std::abs(j[k] - fd) <= tol);
      }
    }
  }
}

TEST_CASE("jet_arith: multiplication examples") {
  CHECK(jet_arith(Jet{1.0, 0.0}, Jet{0.0, 1.0}, JetOp::mul) == Jet{0.0, 1.0});
  CHECK(jet_arith(Jet{2.0, 3.0, 4.0}, Jet{1.0, 0.0, 0.0}, JetOp::mul) == Jet{2.0, 3.0, 4.0});
  CHECK(jet_arith(Jet{2.0, 3.0}, Jet{1.0, 1.0}, JetOp::add) == Jet{3.0, 4.0});
  CHECK(jet_arith(Jet{2.0, 3.0}, Jet{}, JetOp::scalar, -2.0) == Jet{-4.0, -6.0});
}

TEST_CASE("jet_arith: tanh squared matches finite differences") {
  const Jet t = eval_jet(SmoothPrimitive::tanh_scaled(1.0), 0.3, 4);
  const Jet sq = jet_arith(t, t, JetOp::mul);
  const oracle::LongFn ref = [](long double x) { return std::tanh(x) * std::tanh(x); };
  for (int k = 0; k <= 4; ++k) {
    const double fd = oracle::derivative(ref, 0.3, k, fd_step(k, 0.5), 2);
    INFO("k=" << k);
    CHECK(std::abs(sq[k] - fd) <= 1e-5);
  }
}

TEST_CASE("jet_arith: multiplication is commutative and associative") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  auto random_jet = [&](int n) {
    std::vector<double> d(static_cast<std::size_t>(n) + 1);
    for (auto& v : d) v = dist(rng);
    return Jet(d);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 9;
    const Jet a = random_jet(n), b = random_jet(n), c = random_jet(n);
    const Jet ab = a * b, ba = b * a;
    const Jet left = (a * b) * c, right = a * (b * c);
    for (int k = 0; k <= n; ++k) {
      const double scale = 1.0 + std::abs(left[k]);
      CHECK(std::abs(ab[k] - ba[k]) <= 1e-14 * (1.0 + std::abs(ab[k])) * std::pow(2.0, k));
      CHECK(std::abs(left[k] - right[k]) <= 1e-13 * scale * std::pow(2.0, k));
    }
  }
}

TEST_CASE("jet_arith: order mismatch is a contract violation") {
  CHECK_THROWS_AS((void)(Jet{1.0, 2.0} * Jet{1.0}), ContractViolation);
  CHECK_THROWS_AS((void)(Jet{1.0, 2.0} + Jet{1.0, 2.0, 3.0}), ContractViolation);
  CHECK_THROWS_AS((void)SmoothPrimitive::sine().jet(0.0, kMaxJetOrder + 1), ContractViolation);
  CHECK_THROWS_AS((void)SmoothPrimitive::sine().jet(0.0, -1), ContractViolation);
}

TEST_CASE("combination primitive is linear in its terms") {
  const SmoothPrimitive f = SmoothPrimitive::tanh_scaled(10.0);
  const SmoothPrimitive g = SmoothPrimitive::sine();
  const SmoothPrimitive h = SmoothPrimitive::combination({{2.0, f}, {-0.5, g}});
  const Jet jf = f.jet(0.17, 4), jg = g.jet(0.17, 4), jh = h.jet(0.17, 4);
  for (int k = 0; k <= 4; ++k) CHECK(jh[k] == doctest::Approx(2.0 * jf[k] - 0.5 * jg[k]).epsilon(1e-14));
}
