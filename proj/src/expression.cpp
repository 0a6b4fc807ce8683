#include "kobalab/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "kobalab/error.hpp"

namespace kobalab {

namespace {

using Node = std::function<cplx(const ComplexPoint&)>;

class Parser {
 public:
  Parser(const std::string& text, std::size_t dim) : s_(text), dim_(dim) {}

  Node parse() {
    Node n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("expression: " + msg + " at column " + std::to_string(pos_ + 1) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = [a = lhs, b = term()](const ComplexPoint& z) { return a(z) + b(z); };
      } else if (eat('-')) {
        lhs = [a = lhs, b = term()](const ComplexPoint& z) { return a(z) - b(z); };
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = [a = lhs, b = unary()](const ComplexPoint& z) { return a(z) * b(z); };
      } else if (eat('/')) {
        lhs = [a = lhs, b = unary()](const ComplexPoint& z) { return a(z) / b(z); };
      } else {
        return lhs;
      }
    }
  }

  Node unary() {
    if (eat('-')) return [a = unary()](const ComplexPoint& z) { return -a(z); };
    if (eat('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    if (!eat('^')) return base;
    Node ex = unary();
    return [base, ex](const ComplexPoint& z) {
      const cplx e = ex(z);
      const cplx b = base(z);
      // Integer powers stay exact and defined at 0.
      if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64.0) {
        const int k = static_cast<int>(e.real());
        cplx r = 1.0;
        for (int j = 0; j < std::abs(k); ++j) r *= b;
        return k < 0 ? 1.0 / r : r;
      }
      return std::pow(b, e);
    };
  }

  Node primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Node n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return [v](const ComplexPoint&) { return cplx(v); };
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name.size() > 1 && name[0] == 'z' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      const std::size_t j = std::stoul(name.substr(1));
      if (j < 1 || j > dim_) {
        pos_ = start;
        fail("variable " + name + " outside z1..z" + std::to_string(dim_));
      }
      return [j](const ComplexPoint& z) { return z[j - 1]; };
    }
    if (name == "i") return [](const ComplexPoint&) { return cplx(0.0, 1.0); };
    if (name == "pi") return [](const ComplexPoint&) { return cplx(std::numbers::pi); };
    if (name == "e") return [](const ComplexPoint&) { return cplx(std::numbers::e); };
    if (!eat('(')) fail("unknown name '" + name + "'");
    std::vector<Node> args{expr()};
    while (eat(',')) args.push_back(expr());
    if (!eat(')')) fail("expected ')'");
    return call(name, std::move(args), start);
  }

  Node call(const std::string& name, std::vector<Node> args, std::size_t at) {
    using F1 = cplx (*)(cplx);
    static const std::pair<const char*, F1> unary_table[] = {
        {"conj", [](cplx x) { return std::conj(x); }},
        {"re", [](cplx x) { return cplx(x.real()); }},
        {"im", [](cplx x) { return cplx(x.imag()); }},
        {"abs", [](cplx x) { return cplx(std::abs(x)); }},
        {"abs2", [](cplx x) { return cplx(std::norm(x)); }},
        {"arg", [](cplx x) { return cplx(std::arg(x)); }},
        {"sqrt", [](cplx x) { return std::sqrt(x); }},
        {"exp", [](cplx x) { return std::exp(x); }},
        {"log", [](cplx x) { return std::log(x); }},
        {"sin", [](cplx x) { return std::sin(x); }},
        {"cos", [](cplx x) { return std::cos(x); }},
        {"tanh", [](cplx x) { return std::tanh(x); }},
        {"atanh", [](cplx x) { return std::atanh(x); }},
    };
    for (const auto& [n, f] : unary_table) {
      if (name != n) continue;
      if (args.size() != 1) {
        pos_ = at;
        fail(name + " takes one argument");
      }
      return [f = f, a = std::move(args[0])](const ComplexPoint& z) { return f(a(z)); };
    }
    if (name == "max" || name == "min") {
      if (args.size() != 2) {
        pos_ = at;
        fail(name + " takes two arguments");
      }
      const bool is_max = name == "max";
      return [is_max, a = std::move(args[0]), b = std::move(args[1])](const ComplexPoint& z) {
        const double x = a(z).real();
        const double y = b(z).real();
        return cplx(is_max ? std::max(x, y) : std::min(x, y));
      };
    }
    pos_ = at;
    fail("unknown function '" + name + "'");
  }

  const std::string& s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField expression_field(const std::string& text, std::size_t dim) {
  if (dim == 0) throw Error("expression: dimension must be positive");
  auto node = std::make_shared<Node>(Parser(text, dim).parse());
  return ScalarField(
      dim,
      [node, text](const ComplexPoint& z) {
        const cplx v = (*node)(z);
        if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
          throw Error("expression: \"" + text + "\" is not real at " + to_string(z));
        }
        return v.real();
      },
      {}, {}, "expression");
}

}  // namespace kobalab
