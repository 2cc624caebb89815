#include "sepeq/parser.hpp"

#include <cctype>
#include <stdexcept>

namespace sepeq {

namespace {

class Parser {
 public:
  Parser(const std::string& src, const std::set<std::string>& vars) : s_(src), vars_(vars) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  const std::string& s_;
  const std::set<std::string>& vars_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("parse error at offset " + std::to_string(pos_) + ": " + msg +
                             " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expr() {
    Expr acc = eat('-') ? -term() : (eat('+'), term());
    for (;;) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (eat('*'))
        acc = acc * factor();
      else if (eat('/'))
        acc = acc / factor();
      else
        return acc;
    }
  }

  Expr factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    Expr base = atom();
    if (eat('^')) {
      long k = integer_exponent();
      return pow_int(base, k);
    }
    return base;
  }

  long integer_exponent() {
    skip_ws();
    bool paren = eat('(');
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("integer exponent expected");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    if (paren && !eat(')')) fail("')' expected after exponent");
    return neg ? -v : v;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("')' expected");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character");
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    return constant(gq_from_decimal(s_.substr(start, pos_ - start)));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "i") return imag_unit();
    if (name == "sqrt" || name == "exp") {
      if (!eat('(')) fail("'(' expected after " + name);
      Expr arg = expr();
      if (!eat(')')) fail("')' expected");
      return name == "sqrt" ? sqrt_of(arg) : exp_of(arg);
    }
    if (vars_.count(name)) return variable(name);
    return parameter(name);
  }
};

}  // namespace

Expr parse_expr(const std::string& src, const std::set<std::string>& variables) {
  Parser p(src, variables);
  return p.parse();
}

}  // namespace sepeq
