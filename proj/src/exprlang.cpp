#include "colombeau/exprlang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace colombeau {
namespace {

constexpr int kMaxNesting = 200;

const std::vector<std::string>& keywords() {
  static const std::vector<std::string> k{"delta", "heaviside", "nullex", "bar", "tilde", "D"};
  return k;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename T>
ExprPtr make(T node, std::size_t offset) {
  return std::make_shared<const Expr>(Expr{std::move(node), offset});
}

class Parser {
 public:
  Parser(std::string_view text, const FunctionRegistry& registry) : text_(text), registry_(registry) {}

  Expr parse_all() {
    skip_ws();
    if (at_end()) throw ParseError("expected an expression", pos_);
    ExprPtr e = parse_expr();
    skip_ws();
    if (!at_end()) {
      if (peek() == ')') throw ParseError("unbalanced ')' with no matching '('", pos_);
      throw ParseError(std::string("unexpected '") + peek() + "' after expression", pos_);
    }
    return *e;
  }

 private:
  std::string_view text_;
  const FunctionRegistry& registry_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_close(std::size_t open_offset) {
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return;
    }
    std::ostringstream msg;
    msg << "expected ')' to close '(' at offset " << open_offset;
    if (at_end()) {
      msg << ", reached end of input";
    } else {
      msg << ", found '" << peek() << "'";
    }
    throw ParseError(msg.str(), pos_);
  }

  [[nodiscard]] bool number_ahead() const {
    std::size_t i = pos_;
    if (i < text_.size() && text_[i] == '-') ++i;
    if (i >= text_.size()) return false;
    if (std::isdigit(static_cast<unsigned char>(text_[i]))) return true;
    return text_[i] == '.' && i + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i + 1]));
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    if (!number_ahead()) throw ParseError("expected a number", pos_);
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) throw ParseError("malformed or out-of-range number", start);
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return v;
  }

  std::string parse_ident() {
    skip_ws();
    const std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      throw ParseError("expected an identifier", pos_);
    }
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxNesting) throw ParseError("expression nested too deeply", p.pos_);
    }
    ~DepthGuard() { --p.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;
  };

  ExprPtr parse_expr() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t start = pos_;
    ExprPtr left = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        ExprPtr right = parse_term();
        left = make(ast::Sum{left, right}, start);
      } else if (peek() == '-') {
        const std::size_t minus = pos_;
        ++pos_;
        ExprPtr right = parse_term();
        left = make(ast::Sum{left, make(ast::Scalar{-1.0, right}, minus)}, start);
      } else {
        return left;
      }
    }
  }

  ExprPtr parse_term() {
    skip_ws();
    const std::size_t start = pos_;
    ExprPtr left = parse_factor();
    while (accept('*')) {
      ExprPtr right = parse_factor();
      left = make(ast::Product{left, right}, start);
    }
    return left;
  }

  ExprPtr parse_factor() {
    DepthGuard guard(*this);
    skip_ws();
    const std::size_t start = pos_;
    if (at_end()) throw ParseError("expected a term, reached end of input", pos_);
    if (number_ahead()) {
      const double v = parse_number();
      if (accept('*')) return make(ast::Scalar{v, parse_factor()}, start);
      return make(ast::Number{v}, start);
    }
    if (peek() == '(') {
      ++pos_;
      ExprPtr inner = parse_expr();
      expect_close(start);
      return inner;
    }
    if (peek() == ')') throw ParseError("unbalanced ')': expected a term", pos_);
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      throw ParseError(std::string("unexpected '") + peek() + "', expected a term", pos_);
    }

    const std::string id = parse_ident();
    if (id == "delta") return make(ast::Delta{}, start);
    if (id == "heaviside") return make(ast::Heaviside{}, start);
    if (id == "nullex") return make(ast::NullEx{}, start);
    if (id == "bar" || id == "tilde") {
      skip_ws();
      const std::size_t open = pos_;
      if (!accept('(')) throw ParseError("expected '(' after '" + id + "'", pos_);
      FunctionRef f = parse_function_ref();
      expect_close(open);
      if (id == "bar") return make(ast::Bar{std::move(f)}, start);
      return make(ast::Tilde{std::move(f)}, start);
    }
    if (id == "D") {
      int order = 1;
      if (accept('^')) {
        skip_ws();
        const std::size_t at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected derivative order after '^'", at);
        std::size_t digits = 0;
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          v = v * 10 + (peek() - '0');
          ++pos_;
          if (++digits > 3) break;
        }
        if (v > kMaxJetOrder) {
          throw ParseError("derivative order exceeds " + std::to_string(kMaxJetOrder), at);
        }
        order = static_cast<int>(v);
      }
      skip_ws();
      const std::size_t open = pos_;
      if (!accept('(')) throw ParseError("expected '(' after 'D'", pos_);
      ExprPtr inner = parse_expr();
      expect_close(open);
      return make(ast::Derivative{order, inner}, start);
    }
    throw ParseError("unknown identifier '" + id + "'", start, close_matches(id, keywords()));
  }

  FunctionRef parse_function_ref() {
    skip_ws();
    const std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      throw ParseError("expected a function name", pos_);
    }
    const std::string name = parse_ident();
    if (!registry_.contains(name)) {
      throw ParseError("unknown identifier '" + name + "'", start, close_matches(name, registry_.names()));
    }
    std::vector<double> args;
    skip_ws();
    const std::size_t open = pos_;
    if (accept('(')) {
      do {
        args.push_back(parse_number());
      } while (accept(','));
      expect_close(open);
    }
    try {
      SmoothPrimitive f = registry_.resolve(name, args);
      return FunctionRef{name, std::move(args), std::move(f)};
    } catch (const ContractViolation& e) {
      throw ParseError(e.what(), start);
    }
  }
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

struct Lowering {
  GeneralizedFunction operator()(const ast::Delta&) const { return delta_bar(); }
  GeneralizedFunction operator()(const ast::Heaviside&) const { return heaviside_bar(); }
  GeneralizedFunction operator()(const ast::NullEx&) const { return null_example(); }
  GeneralizedFunction operator()(const ast::Bar& b) const { return regular_bar(b.f.function, b.f.text()); }
  GeneralizedFunction operator()(const ast::Tilde& t) const { return tilde(t.f.function, t.f.text()); }
  GeneralizedFunction operator()(const ast::Number& n) const {
    const SmoothPrimitive c = SmoothPrimitive::polynomial({n.value});
    return tilde(c, default_function_name(c));
  }
  GeneralizedFunction operator()(const ast::Sum& s) const { return sum(to_dag(*s.left), to_dag(*s.right)); }
  GeneralizedFunction operator()(const ast::Product& p) const {
    return product(to_dag(*p.left), to_dag(*p.right));
  }
  GeneralizedFunction operator()(const ast::Scalar& s) const { return scalar(s.c, to_dag(*s.child)); }
  GeneralizedFunction operator()(const ast::Derivative& d) const { return derivative(d.n, to_dag(*d.child)); }
};

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> suggestions)
    : Error([&] {
        std::ostringstream os;
        os << "at offset " << offset << ": " << message;
        if (!suggestions.empty()) {
          os << " (did you mean";
          for (std::size_t i = 0; i < suggestions.size(); ++i) os << (i ? ", " : " ") << "'" << suggestions[i] << "'";
          os << "?)";
        }
        return os.str();
      }()),
      message_(std::move(message)),
      offset_(offset),
      suggestions_(std::move(suggestions)) {}

FunctionRegistry FunctionRegistry::builtins() {
  FunctionRegistry r;
  r.add("tanh10", SmoothPrimitive::tanh_scaled(10.0));
  r.add("sin", SmoothPrimitive::sine());
  r.add("exp", SmoothPrimitive::exponential());
  r.add("gauss", SmoothPrimitive::gaussian());
  r.add_parametric("poly", 1, 64, [](std::span<const double> a) {
    return SmoothPrimitive::polynomial({a.begin(), a.end()});
  });
  r.add_parametric("tanh", 1, 1, [](std::span<const double> a) { return SmoothPrimitive::tanh_scaled(a[0]); });
  return r;
}

void FunctionRegistry::add(std::string name, SmoothPrimitive f) {
  entries_[std::move(name)] = Entry{0, 0, [f](std::span<const double>) { return f; }};
}

void FunctionRegistry::add_parametric(std::string name, std::size_t min_args, std::size_t max_args, Factory factory) {
  entries_[std::move(name)] = Entry{min_args, max_args, std::move(factory)};
}

bool FunctionRegistry::contains(const std::string& name) const { return entries_.count(name) != 0; }

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

SmoothPrimitive FunctionRegistry::resolve(const std::string& name, std::span<const double> args) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw ContractViolation("unknown function '" + name + "'");
  const Entry& e = it->second;
  if (args.size() < e.min_args || args.size() > e.max_args) {
    std::ostringstream msg;
    msg << "function '" << name << "' takes ";
    if (e.min_args == e.max_args) {
      msg << e.min_args;
    } else {
      msg << e.min_args << " to " << e.max_args;
    }
    msg << " argument(s), got " << args.size();
    throw ContractViolation(msg.str());
  }
  return e.factory(args);
}

std::vector<std::string> close_matches(std::string_view name, const std::vector<std::string>& candidates) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(name, c);
    const bool prefix = !name.empty() && (c.rfind(name, 0) == 0 || name.rfind(c, 0) == 0);
    if (d <= 2 || prefix) scored.emplace_back(d, c);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (auto& [d, c] : scored) out.push_back(std::move(c));
  return out;
}

std::string FunctionRef::text() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(args[i]);
  }
  return out + ")";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ast::Bar> || std::is_same_v<T, ast::Tilde>) {
          return x.f == y.f;
        } else if constexpr (std::is_same_v<T, ast::Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Sum> || std::is_same_v<T, ast::Product>) {
          return expr_equal(x.left, y.left) && expr_equal(x.right, y.right);
        } else if constexpr (std::is_same_v<T, ast::Scalar>) {
          return x.c == y.c && expr_equal(x.child, y.child);
        } else if constexpr (std::is_same_v<T, ast::Derivative>) {
          return x.n == y.n && expr_equal(x.child, y.child);
        } else {
          return true;
        }
      },
      a.node);
}

Expr parse(std::string_view text, const FunctionRegistry& registry) { return Parser(text, registry).parse_all(); }

Expr parse(std::string_view text) {
  static const FunctionRegistry registry = FunctionRegistry::builtins();
  return parse(text, registry);
}

GeneralizedFunction to_dag(const Expr& e) { return std::visit(Lowering{}, e.node); }

GeneralizedFunction parse_gf(std::string_view text) { return to_dag(parse(text)); }

}  // namespace colombeau
