#ifndef BEZPROJ_EXPR_HPP
#define BEZPROJ_EXPR_HPP

#include <cctype>
#include <cmath>
#include <functional>
#include <algorithm>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "bezproj/errors.hpp"

namespace bezproj {

/// Arithmetic expression in x, y, z with + - * / ^, parentheses, pi, e and
/// sin cos tan exp log sqrt abs.
class Expression {
 public:
  using Fn = std::function<double(const std::vector<double>&)>;

  explicit Expression(std::string text) : text_(std::move(text)) {
    pos_ = 0;
    fn_ = parse_sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  double operator()(const std::vector<double>& v) const { return fn_(v); }
  const std::string& text() const { return text_; }
  /// Number of coordinates referenced: 1 for x only, 2 with y, 3 with z.
  std::size_t arity() const { return arity_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + text_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn parse_sum() {
    Fn lhs = parse_product();
    for (;;) {
      if (eat('+')) {
        lhs = [a = lhs, b = parse_product()](const auto& v) { return a(v) + b(v); };
      } else if (eat('-')) {
        lhs = [a = lhs, b = parse_product()](const auto& v) { return a(v) - b(v); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_product() {
    Fn lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = [a = lhs, b = parse_unary()](const auto& v) { return a(v) * b(v); };
      } else if (eat('/')) {
        lhs = [a = lhs, b = parse_unary()](const auto& v) { return a(v) / b(v); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_unary() {
    if (eat('-')) return [a = parse_unary()](const auto& v) { return -a(v); };
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Fn parse_power() {
    Fn base = parse_atom();
    if (eat('^')) return [a = base, b = parse_unary()](const auto& v) { return std::pow(a(v), b(v)); };
    return base;
  }

  Fn parse_atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (eat('(')) {
      Fn inner = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double value = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return [value](const auto&) { return value; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x" || name == "y" || name == "z") {
        const std::size_t k = static_cast<std::size_t>(name[0] - 'x');
        arity_ = std::max(arity_, k + 1);
        return [k](const std::vector<double>& v) { return k < v.size() ? v[k] : 0.0; };
      }
      if (name == "pi") return [](const auto&) { return std::numbers::pi; };
      if (name == "e") return [](const auto&) { return std::numbers::e; };
      double (*f)(double) = nullptr;
      if (name == "sin") f = [](double t) { return std::sin(t); };
      if (name == "cos") f = [](double t) { return std::cos(t); };
      if (name == "tan") f = [](double t) { return std::tan(t); };
      if (name == "exp") f = [](double t) { return std::exp(t); };
      if (name == "log") f = [](double t) { return std::log(t); };
      if (name == "sqrt") f = [](double t) { return std::sqrt(t); };
      if (name == "abs") f = [](double t) { return std::fabs(t); };
      if (!f) fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      Fn arg = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return [f, a = std::move(arg)](const auto& v) { return f(a(v)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t arity_ = 1;
  std::size_t pos_ = 0;
  Fn fn_;
};

}  // namespace bezproj

#endif  // BEZPROJ_EXPR_HPP
