#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "tilemeasure/io.hpp"

namespace tilemeasure {

ExprError::ExprError(Kind kind, std::size_t position, const std::string& what)
    : std::invalid_argument(what + " at offset " + std::to_string(position)), kind_(kind), position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  double run() {
    const double v = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExprError(ExprError::Kind::syntax, pos_, what); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  double expr() {
    double v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        const double d = factor();
        if (d == 0.0) throw ExprError(ExprError::Kind::domain, at, "division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      const double v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return named();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    double v = 0.0;
    const char* first = src_.data() + pos_;
    const auto [end, ec] = std::from_chars(first, src_.data() + src_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - first);
    return v;
  }

  double named() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "phi") return std::numbers::phi;
    if (name == "pi") return std::numbers::pi;
    if (name == "sqrt") {
      expect('(');
      skip_space();
      const std::size_t at = pos_;
      const double v = expr();
      expect(')');
      if (v < 0.0) throw ExprError(ExprError::Kind::domain, at, "sqrt of a negative number");
      return std::sqrt(v);
    }
    pos_ = start;
    fail("unknown name '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

double eval_expr(std::string_view src) {
  const double v = Parser(src).run();
  if (!std::isfinite(v)) throw ExprError(ExprError::Kind::domain, 0, "expression is not finite");
  return v;
}

}  // namespace tilemeasure
