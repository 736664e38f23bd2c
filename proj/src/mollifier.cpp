#include "colombeau/mollifier.hpp"

#include <cmath>
#include <sstream>

#include "colombeau/error.hpp"

namespace colombeau {

struct TestFunction::Data {
  double halfwidth = 1.0;
  double shift = 0.0;
  std::vector<double> weights;
  std::vector<double> lambda;
  std::optional<int> claimed_class;
  std::vector<double> moments;
  std::string label;
  SmoothPrimitive bump = SmoothPrimitive::bump(1.0);
};

namespace {

int highest_weight(const std::vector<double>& w) { return static_cast<int>(w.size()) - 1; }

std::vector<double> quadrature_moments(const TestFunction& phi, int r_max) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r_max) + 1);
  for (int r = 0; r <= r_max; ++r) {
    Integrand f{[&phi, r](double z) { return std::pow(z, r) * phi(z); }, phi.support()};
    out.push_back(integrate(f, phi.support(), kMomentTol).value);
  }
  return out;
}

double factorial_ratio(int r, int k) {  // r! / (r - k)!
  double out = 1.0;
  for (int i = r - k + 1; i <= r; ++i) out *= i;
  return out;
}

}  // namespace

TestFunction::TestFunction(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

TestFunction TestFunction::from_bump_weights(double halfwidth, std::vector<double> weights, double shift,
                                             std::vector<double> lambda, std::optional<int> claimed_class,
                                             std::string label) {
  if (weights.empty()) throw ContractViolation("test function needs at least one weight");
  if (highest_weight(weights) > kMaxJetOrder) {
    throw ContractViolation("test function uses derivatives beyond the jet order cap");
  }
  auto data = std::make_shared<Data>();
  data->halfwidth = halfwidth;
  data->shift = shift;
  data->weights = std::move(weights);
  data->lambda = std::move(lambda);
  data->claimed_class = claimed_class;
  data->label = std::move(label);
  data->bump = SmoothPrimitive::bump(halfwidth);

  const int cache_order = std::max(1, claimed_class.value_or(0));
  TestFunction phi(data);
  data->moments = quadrature_moments(phi, cache_order);

  if (claimed_class) {
    const auto& m = data->moments;
    if (std::abs(m[0] - 1.0) > kMassTol) {
      std::ostringstream msg;
      msg << "claimed class A_" << *claimed_class << " but m_0 = " << m[0];
      throw ConstructionError(msg.str());
    }
    for (int r = 1; r <= *claimed_class; ++r) {
      if (std::abs(m[static_cast<std::size_t>(r)]) > kMomentVanishTol) {
        std::ostringstream msg;
        msg << "claimed class A_" << *claimed_class << " but m_" << r << " = " << m[static_cast<std::size_t>(r)];
        throw ConstructionError(msg.str());
      }
    }
  }
  return phi;
}

double TestFunction::operator()(double x) const { return jet(x, 0).value(); }

Jet TestFunction::jet(double x, int n) const {
  const auto& w = data_->weights;
  const int top = highest_weight(w);
  if (n < 0 || n + top > kMaxJetOrder) {
    throw ContractViolation("test function derivative order " + std::to_string(n) + " exceeds jet cap");
  }
  const Jet raw = data_->bump.jet(x - data_->shift, n + top);
  Jet out(n);
  for (int j = 0; j <= n; ++j) {
    double acc = 0.0;
    for (int k = 0; k <= top; ++k) acc += w[static_cast<std::size_t>(k)] * raw[j + k];
    out[j] = acc;
  }
  return out;
}

Interval TestFunction::support() const noexcept {
  return {data_->shift - data_->halfwidth, data_->shift + data_->halfwidth};
}
double TestFunction::halfwidth() const noexcept { return data_->halfwidth; }
double TestFunction::shift() const noexcept { return data_->shift; }
std::span<const double> TestFunction::bump_weights() const noexcept { return data_->weights; }
std::span<const double> TestFunction::lambda() const noexcept { return data_->lambda; }
std::optional<int> TestFunction::claimed_class() const noexcept { return data_->claimed_class; }
std::span<const double> TestFunction::moment_cache() const noexcept { return data_->moments; }
const std::string& TestFunction::label() const noexcept { return data_->label; }

bool TestFunction::is_even() const noexcept {
  if (data_->shift != 0.0) return false;
  for (std::size_t k = 1; k < data_->weights.size(); k += 2) {
    if (data_->weights[k] != 0.0) return false;
  }
  return true;
}

TestFunction TestFunction::with_label(std::string label) const {
  auto copy = std::make_shared<Data>(*data_);
  copy->label = std::move(label);
  return TestFunction(std::move(copy));
}

ScaledTestFunction::ScaledTestFunction(TestFunction parent) : parent_(std::move(parent)), epsilon_(1.0) {}

ScaledTestFunction::ScaledTestFunction(TestFunction parent, double epsilon)
    : parent_(std::move(parent)), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("scale: epsilon must be positive and finite");
  }
}

double ScaledTestFunction::operator()(double x) const { return parent_(x / epsilon_) / epsilon_; }

Jet ScaledTestFunction::jet(double x, int n) const {
  Jet out = parent_.jet(x / epsilon_, n);
  double factor = 1.0 / epsilon_;
  for (int k = 0; k <= n; ++k) {
    out[k] *= factor;
    factor /= epsilon_;
  }
  return out;
}

Interval ScaledTestFunction::support() const noexcept {
  const Interval s = parent_.support();
  return {epsilon_ * s.lo, epsilon_ * s.hi};
}

TestFunction make_bump(double halfwidth) {
  if (!(halfwidth > 0.0)) throw ContractViolation("make_bump: halfwidth must be positive");
  const SmoothPrimitive raw = SmoothPrimitive::bump(halfwidth);
  const Interval support{-halfwidth, halfwidth};
  const double mass = integrate(Integrand{[&raw](double x) { return raw(x); }, support}, support, 1e-14).value;
  return TestFunction::from_bump_weights(halfwidth, {1.0 / mass}, 0.0, {1.0}, 1, "bump");
}

std::vector<double> moments(const TestFunction& phi, int r_max) {
  if (r_max < 0) throw ContractViolation("moments: r_max must be >= 0");
  const auto cache = phi.moment_cache();
  if (static_cast<std::size_t>(r_max) < cache.size()) {
    return {cache.begin(), cache.begin() + r_max + 1};
  }
  return quadrature_moments(phi, r_max);
}

TestFunction construct_Aq(int q, const TestFunction& base) {
  if (q < 0 || q > kMaxClassOrder) {
    throw ContractViolation("construct_Aq: q must lie in [0, " + std::to_string(kMaxClassOrder) + "]");
  }
  std::vector<double> m = moments(base, q);
  if (base.is_even()) {
    for (std::size_t r = 1; r < m.size(); r += 2) m[r] = 0.0;
  }
  if (m[0] == 0.0 || !std::isfinite(m[0])) {
    throw ConstructionError("construct_Aq: base has zero mass, moment system is singular");
  }

  // Row r: sum_{k<=r} lambda_k (-1)^k r!/(r-k)! M_{r-k} = [r == 0].
  std::vector<double> lambda(static_cast<std::size_t>(q) + 1, 0.0);
  for (int r = 0; r <= q; ++r) {
    double rhs = (r == 0) ? 1.0 : 0.0;
    for (int k = 0; k < r; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      rhs -= lambda[static_cast<std::size_t>(k)] * sign * factorial_ratio(r, k) *
             m[static_cast<std::size_t>(r - k)];
    }
    const double diag = ((r % 2 == 0) ? 1.0 : -1.0) * factorial_ratio(r, r) * m[0];
    lambda[static_cast<std::size_t>(r)] = rhs / diag;
  }

  // Compose with the base's own bump-derivative weights.
  const auto bw = base.bump_weights();
  std::vector<double> weights(bw.size() + static_cast<std::size_t>(q), 0.0);
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    for (std::size_t j = 0; j < bw.size(); ++j) weights[k + j] += lambda[k] * bw[j];
  }
  while (weights.size() > 1 && weights.back() == 0.0) weights.pop_back();

  return TestFunction::from_bump_weights(base.halfwidth(), std::move(weights), base.shift(), std::move(lambda),
                                         q, "A" + std::to_string(q));
}

TestFunction translate(const TestFunction& phi, double y) {
  const auto w = phi.bump_weights();
  const auto l = phi.lambda();
  std::optional<int> cls = phi.claimed_class();
  std::string label = phi.label();
  if (y != 0.0) {
    if (cls) cls = 0;
    std::ostringstream os;
    os << label << "@" << y;
    label = os.str();
  }
  return TestFunction::from_bump_weights(phi.halfwidth(), {w.begin(), w.end()}, phi.shift() + y,
                                         {l.begin(), l.end()}, cls, std::move(label));
}

ScaledTestFunction scale(const TestFunction& phi, double epsilon) { return {phi, epsilon}; }

}  // namespace colombeau
