#pragma once

// Text syntax for expressions, e.g. "(1 - z^4)^-1", "z^{mu}@0", "log(z)@1".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ['^' exponent] ['@' int]
//   exponent:= ['-'] integer            integer power
//            | ['-'] decimal | ident    real power
//            | '{' expr '}' | '(' expr ')'   real power, expr must be a real constant
//   primary := number | 'z' | 'i' | 'pi' | ident | '(' expr ')'
//            | 'log' '(' expr ')' | 'sqrt' '(' expr ')'

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>

#include "framed/expr.hpp"

namespace framed {

using Parameters = std::map<std::string, double>;

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const Parameters& params) : s_(text), params_(params) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  std::optional<int> branch_suffix() {
    if (!accept('@')) return std::nullopt;
    skip();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty() || tok == "-" || tok == "+") fail("expected branch index after '@'");
    return std::stoi(tok);
  }

  double real_constant(const Expr& e) {
    Complex c;
    try {
      c = e.eval(0.0);
    } catch (const Error&) {
      fail("exponent must be a constant");
    }
    if (!e.is_constant() || c.imag() != 0.0) fail("exponent must be a real constant");
    return c.real();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip();
      Expr r;
      if (accept('{')) {
        const double mu = real_constant(expr());
        expect('}');
        r = Expr::make(Op::RealPow, {base}, 0, mu);
      } else if (accept('(')) {
        const double mu = real_constant(expr());
        expect(')');
        r = Expr::make(Op::RealPow, {base}, 0, mu);
      } else {
        bool negative = accept('-');
        skip();
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])))) {
          const double mu = lookup(identifier());
          r = Expr::make(Op::RealPow, {base}, 0, negative ? -mu : mu);
        } else {
          auto [text, integral] = number_token();
          if (integral) {
            const long k = std::stol(text);
            r = Expr::make(Op::IntPow, {base}, negative ? -k : k);
          } else {
            const double mu = std::strtod(text.c_str(), nullptr);
            r = Expr::make(Op::RealPow, {base}, 0, negative ? -mu : mu);
          }
        }
      }
      if (r.op() == Op::RealPow) {
        if (auto b = branch_suffix()) r = Expr::make(Op::RealPow, {base}, 0, r.real_exponent(), b);
      }
      return simplify_power(r);
    }
    return base;
  }

  // Constant bases fold as the builders would; other nodes stay literal.
  static Expr simplify_power(const Expr& r) {
    if (!r.arg(0).is_constant()) return r;
    return rebuild_node(r, {r.arg(0)});
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  double lookup(const std::string& name) {
    if (name == "pi") return kPi;
    auto it = params_.find(name);
    if (it == params_.end()) fail("unbound parameter '" + name + "'");
    return it->second;
  }

  std::pair<std::string, bool> number_token() {
    skip();
    const std::size_t start = pos_;
    bool integral = true;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      integral = false;
      n += digits();
    }
    if (n == 0) fail("expected a number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
      else integral = false;
    }
    return {std::string(s_.substr(start, pos_ - start)), integral};
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto [text, integral] = number_token();
      return Expr::constant(std::strtod(text.c_str(), nullptr));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::string name = identifier();
      if (name == "z") return Expr::var();
      if (name == "i") return Expr::constant(kI);
      if (name == "log" || name == "sqrt") {
        expect('(');
        Expr a = expr();
        expect(')');
        const auto b = branch_suffix();
        return name == "log" ? log(a, b) : rpow(a, 0.5, b);
      }
      return Expr::constant(lookup(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  const Parameters& params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse `text`; identifiers other than z, i, pi, log, sqrt are looked up in `params`.
inline Expr parse_expr(std::string_view text, const Parameters& params = {}) {
  return detail::ExprParser(text, params).parse();
}

}  // namespace framed
