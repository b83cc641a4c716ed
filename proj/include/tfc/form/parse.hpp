#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/form/expr.hpp"
#include "tfc/form/lower.hpp"

namespace tfc::form {

/// Result of parsing a .form file: named integrated forms (usually `a` and
/// optionally `L`) plus the declared coefficient elements in slot order.
struct ParsedForms {
  std::map<std::string, FormExpr> forms;
  std::vector<ElementSpec> coefficients;
  int arity = 0;

  const FormExpr& bilinear() const { return named("a"); }
  bool has(const std::string& name) const { return forms.count(name) > 0; }
  const FormExpr& named(const std::string& name) const {
    auto it = forms.find(name);
    if (it == forms.end()) throw user_error("no form named '" + name + "' defined");
    return it->second;
  }
};

namespace parser_detail {

enum class Tok { ident, number, string, symbol, newline, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  int line = 0, column = 0;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, double num = 0.0) {
    out.push_back({k, std::move(text), num, line, col});
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      if (depth == 0 && !out.empty() && out.back().kind != Tok::newline)
        push(Tok::newline, "\\n");
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      push(Tok::ident, src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.' ||
                                src[j] == 'e' || src[j] == 'E' ||
                                ((src[j] == '+' || src[j] == '-') && j > i &&
                                 (src[j - 1] == 'e' || src[j - 1] == 'E'))))
        ++j;
      push(Tok::number, src.substr(i, j - i), std::stod(src.substr(i, j - i)));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') ++j;
      if (j == src.size()) throw user_error("syntax error at line " + std::to_string(line) +
                                            ": unterminated string");
      push(Tok::string, src.substr(i + 1, j - i - 1));
      col += static_cast<int>(j - i + 1);
      i = j + 1;
      continue;
    }
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    push(Tok::symbol, std::string(1, c));
    ++i;
    ++col;
  }
  push(Tok::newline, "\\n");
  push(Tok::end, "");
  return out;
}

struct Macro {
  std::vector<std::string> params;
  std::size_t body_begin = 0; // token index of the body expression
};

struct Binding;
using Env = std::map<std::string, Binding>;

struct Binding {
  std::variant<ElementSpec, Value, FormExpr, Index, Macro> data;
};

class Parser {
public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {
    // Predeclared Einstein indices, as in the paper's form files.
    for (const char* n : {"i", "j", "k", "l"}) env_[n] = Binding{Index()};
  }

  ParsedForms run() {
    while (!at(Tok::end)) {
      if (at(Tok::newline)) {
        advance();
        continue;
      }
      statement();
    }
    ParsedForms out;
    for (const auto& [name, b] : env_)
      if (std::holds_alternative<FormExpr>(b.data))
        out.forms.emplace(name, std::get<FormExpr>(b.data));
    if (out.forms.empty()) throw user_error("no form defined");
    out.coefficients = coefficient_elements_;
    out.arity = next_argument_;
    return out;
  }

private:
  using PV = std::variant<ElementSpec, Value, FormExpr, Index, Dx>;

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = toks_[pos_];
    throw user_error("syntax error at line " + std::to_string(t.line) + ", column " +
                     std::to_string(t.column) + ": " + msg);
  }

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_symbol(const std::string& s) const { return at(Tok::symbol) && cur().text == s; }
  bool at_ident(const std::string& s) const { return at(Tok::ident) && cur().text == s; }
  void advance() { ++pos_; }
  void expect_symbol(const std::string& s) {
    if (!at_symbol(s)) fail("expected '" + s + "'");
    advance();
  }

  void statement() {
    if (at_ident("def")) {
      parse_def();
      return;
    }
    if (!at(Tok::ident)) fail("expected assignment");
    const std::string name = cur().text;
    advance();
    expect_symbol("=");
    PV value = expression();
    if (std::holds_alternative<ElementSpec>(value))
      env_[name] = Binding{std::get<ElementSpec>(value)};
    else if (std::holds_alternative<Value>(value))
      env_[name] = Binding{std::get<Value>(value)};
    else if (std::holds_alternative<FormExpr>(value))
      env_[name] = Binding{std::get<FormExpr>(value)};
    else if (std::holds_alternative<Index>(value))
      env_[name] = Binding{std::get<Index>(value)};
    else
      fail("cannot assign a measure");
    if (!at(Tok::newline) && !at(Tok::end)) fail("unexpected trailing tokens");
  }

  void parse_def() {
    advance(); // def
    if (!at(Tok::ident)) fail("expected operator name after def");
    Macro macro;
    const std::string name = cur().text;
    advance();
    expect_symbol("(");
    while (!at_symbol(")")) {
      if (!at(Tok::ident)) fail("expected parameter name");
      macro.params.push_back(cur().text);
      advance();
      if (at_symbol(",")) advance();
    }
    advance(); // )
    expect_symbol(":");
    while (at(Tok::newline)) advance();
    if (!at_ident("return")) fail("expected return in operator definition");
    advance();
    macro.body_begin = pos_;
    skip_expression();
    env_[name] = Binding{macro};
  }

  // Advance past one expression without evaluating (records macro bodies).
  void skip_expression() {
    int depth = 0;
    while (!at(Tok::end)) {
      if (at(Tok::newline) && depth == 0) break;
      if (at(Tok::symbol)) {
        const std::string& s = cur().text;
        if (s == "(" || s == "[") ++depth;
        if (s == ")" || s == "]") --depth;
      }
      advance();
    }
  }

  PV expression() {
    PV lhs = term();
    while (at_symbol("+") || at_symbol("-")) {
      const bool plus = cur().text == "+";
      advance();
      PV rhs = term();
      if (std::holds_alternative<FormExpr>(lhs) && std::holds_alternative<FormExpr>(rhs)) {
        lhs = plus ? std::get<FormExpr>(lhs) + std::get<FormExpr>(rhs)
                   : std::get<FormExpr>(lhs) - std::get<FormExpr>(rhs);
      } else {
        lhs = plus ? as_value(lhs) + as_value(rhs) : as_value(lhs) - as_value(rhs);
      }
    }
    return lhs;
  }

  PV term() {
    PV lhs = unary();
    while (at_symbol("*") || at_symbol("/")) {
      const bool mul = cur().text == "*";
      advance();
      PV rhs = unary();
      if (mul && std::holds_alternative<Dx>(rhs)) {
        lhs = as_value(lhs) * dx;
        continue;
      }
      if (!mul) {
        const Value denom = as_value(rhs);
        const ExprPtr e = denom.is_scalar() ? denom.scalar_expr() : nullptr;
        if (!e || e->kind != ExprKind::constant)
          fail("not lowerable: division by a function");
        lhs = as_value(lhs) / e->constant;
        continue;
      }
      lhs = as_value(lhs) * as_value(rhs);
    }
    return lhs;
  }

  PV unary() {
    if (at_symbol("-")) {
      advance();
      return -as_value(unary());
    }
    if (at_symbol("+")) advance();
    return postfix();
  }

  PV postfix() {
    PV base = primary();
    while (at_symbol("[")) {
      advance();
      PV idx = expression();
      expect_symbol("]");
      base = as_value(base)[index_of(idx)];
    }
    return base;
  }

  IndexExpr index_of(const PV& v) {
    if (std::holds_alternative<Index>(v)) return std::get<Index>(v).ref();
    if (std::holds_alternative<Value>(v)) {
      const Value& val = std::get<Value>(v);
      if (val.is_scalar()) {
        const ExprPtr e = val.scalar_expr();
        if (e->kind == ExprKind::constant) return IndexExpr{static_cast<int>(e->constant), -1};
      }
    }
    fail("expected an index or integer");
  }

  Value as_value(const PV& v) {
    if (std::holds_alternative<Value>(v)) return std::get<Value>(v);
    fail("expected an expression");
  }

  PV primary() {
    if (at(Tok::number)) {
      const double v = cur().number;
      advance();
      return constant(v);
    }
    if (at_symbol("(")) {
      advance();
      PV inner = expression();
      expect_symbol(")");
      return inner;
    }
    if (!at(Tok::ident)) fail("expected expression");
    const std::string name = cur().text;
    advance();
    if (at_symbol("(")) return call(name);
    if (name == "dx") return Dx{};
    auto it = env_.find(name);
    if (it == env_.end()) fail("undeclared identifier '" + name + "'");
    const Binding& b = it->second;
    if (std::holds_alternative<ElementSpec>(b.data)) return std::get<ElementSpec>(b.data);
    if (std::holds_alternative<Value>(b.data)) return std::get<Value>(b.data);
    if (std::holds_alternative<FormExpr>(b.data)) return std::get<FormExpr>(b.data);
    if (std::holds_alternative<Index>(b.data)) return std::get<Index>(b.data);
    fail("operator '" + name + "' must be called");
  }

  PV call(const std::string& name) {
    expect_symbol("(");
    std::vector<PV> args;
    std::vector<std::string> strings;
    while (!at_symbol(")")) {
      if (at(Tok::string)) {
        strings.push_back(cur().text);
        args.emplace_back(Dx{}); // placeholder, strings tracked separately
        advance();
      } else {
        args.push_back(expression());
      }
      if (at_symbol(",")) advance();
    }
    advance(); // )

    auto argc = [&](std::size_t n, const char* what) {
      if (args.size() != n) fail(std::string(what) + ": wrong number of arguments");
    };
    if (name == "FiniteElement" || name == "VectorElement") {
      if (strings.size() != 2 || args.size() != 3) fail("element declaration takes (family, cell, degree)");
      ElementSpec spec;
      std::string fam = strings[0];
      if (name == "VectorElement" || fam == "Vector Lagrange")
        spec.family = fiat::Family::VectorLagrange;
      else if (fam == "Discontinuous Lagrange" || fam == "DG")
        spec.family = fiat::Family::DiscontinuousLagrange;
      else if (fam == "Lagrange" || fam == "CG")
        spec.family = fiat::Family::Lagrange;
      else
        fail("unknown element family '" + fam + "'");
      spec.shape = fiat::shape_from_name(strings[1]);
      const Value deg = as_value(args[2]);
      spec.degree = static_cast<int>(deg.scalar_expr()->constant);
      ambient_dim_ = spec.dim();
      return spec;
    }
    if (name == "BasisFunction") {
      argc(1, "BasisFunction");
      if (!std::holds_alternative<ElementSpec>(args[0])) fail("BasisFunction takes an element");
      return basis_function(next_argument_++, std::get<ElementSpec>(args[0]));
    }
    if (name == "Function") {
      argc(1, "Function");
      if (!std::holds_alternative<ElementSpec>(args[0])) fail("Function takes an element");
      const auto& spec = std::get<ElementSpec>(args[0]);
      coefficient_elements_.push_back(spec);
      return coefficient(static_cast<int>(coefficient_elements_.size()) - 1, spec);
    }
    if (name == "Index") {
      argc(0, "Index");
      return Index();
    }
    if (name == "dot" || name == "inner") {
      argc(2, "dot");
      return dot(as_value(args[0]), as_value(args[1]));
    }
    if (name == "mult") {
      argc(2, "mult");
      return mult(as_value(args[0]), as_value(args[1]));
    }
    if (name == "grad") {
      argc(1, "grad");
      if (ambient_dim_ == 0) fail("grad before any element declaration");
      return grad(as_value(args[0]), ambient_dim_);
    }
    if (name == "div") {
      argc(1, "div");
      return div(as_value(args[0]));
    }
    if (name == "transp") {
      argc(1, "transp");
      return transp(as_value(args[0]));
    }
    if (name == "D") {
      argc(2, "D");
      return D(as_value(args[0]), index_of(args[1]));
    }
    auto it = env_.find(name);
    if (it != env_.end() && std::holds_alternative<Macro>(it->second.data)) {
      const Macro& macro = std::get<Macro>(it->second.data);
      if (macro.params.size() != args.size()) fail("operator '" + name + "': wrong number of arguments");
      // Evaluate the macro body with parameters bound to the call arguments.
      Env saved = env_;
      for (std::size_t k = 0; k < macro.params.size(); ++k)
        env_[macro.params[k]] = Binding{as_value(args[k])};
      const std::size_t saved_pos = pos_;
      pos_ = macro.body_begin;
      PV result = expression();
      pos_ = saved_pos;
      env_ = std::move(saved);
      return result;
    }
    fail("undeclared identifier '" + name + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Env env_;
  int next_argument_ = 0;
  int ambient_dim_ = 0;
  std::vector<ElementSpec> coefficient_elements_;
};

} // namespace parser_detail

/// Parse form-language source (see docs/form-language.md) into integrated
/// form expressions.
inline ParsedForms parse_form_source(const std::string& source) {
  parser_detail::Parser p(source);
  return p.run();
}

} // namespace tfc::form
