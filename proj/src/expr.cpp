#include "uio/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

#include "uio/errors.hpp"

namespace uio {

struct ScalarExpr::Node {
  // op: 'n' literal, 'z' variable, binary + - * / ^, 'f' function call
  char op = 'n';
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double z) const {
    switch (op) {
      case 'n': return value;
      case 'z': return z;
      case '+': return lhs->eval(z) + rhs->eval(z);
      case '-': return lhs->eval(z) - rhs->eval(z);
      case '*': return lhs->eval(z) * rhs->eval(z);
      case '/': return lhs->eval(z) / rhs->eval(z);
      case '^': return std::pow(lhs->eval(z), rhs->eval(z));
      case 'f': return fn(lhs->eval(z));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

NodePtr make_literal(double v) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = 'n';
  n->value = v;
  return n;
}

NodePtr make_binary(char op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

struct Parser {
  const std::string& s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("expression parse error at position " +
                          std::to_string(pos) + " in \"" + s + "\": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (consume('+')) lhs = make_binary('+', lhs, parse_term());
      else if (consume('-')) lhs = make_binary('-', lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (consume('*')) lhs = make_binary('*', lhs, parse_factor());
      else if (consume('/')) lhs = make_binary('/', lhs, parse_factor());
      else return lhs;
    }
  }

  // unary minus binds looser than '^', so -z^2 reads as -(z^2)
  NodePtr parse_factor() {
    skip_ws();
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
      char sign = s[pos];
      ++pos;
      NodePtr p = parse_factor();
      return sign == '-' ? make_binary('-', make_literal(0.0), p) : p;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (consume('^')) return make_binary('^', base, parse_factor());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(s.c_str() + pos, &end);
      if (end == s.c_str() + pos) fail("malformed number");
      pos = end - s.c_str();
      return make_literal(v);
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!consume(')')) fail("missing ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string word = s.substr(start, pos - start);
      if (word == "z") {
        auto n = std::make_shared<ScalarExpr::Node>();
        n->op = 'z';
        return n;
      }
      if (word == "pi") return make_literal(M_PI);
      if (word == "e") return make_literal(M_E);
      static const std::vector<std::pair<std::string, double (*)(double)>> fns = {
          {"exp", std::exp}, {"sin", std::sin},   {"cos", std::cos},
          {"tan", std::tan}, {"tanh", std::tanh}, {"sinh", std::sinh},
          {"cosh", std::cosh}, {"sqrt", std::sqrt}, {"log", std::log},
          {"abs", std::fabs}};
      for (const auto& [name, fn] : fns) {
        if (word == name) {
          if (!consume('(')) fail("expected '(' after " + name);
          NodePtr arg = parse_expr();
          if (!consume(')')) fail("missing ')' after argument of " + name);
          auto n = std::make_shared<ScalarExpr::Node>();
          n->op = 'f';
          n->fn = fn;
          n->lhs = arg;
          return n;
        }
      }
      fail("unknown identifier \"" + word + "\"");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

ScalarExpr ScalarExpr::parse(const std::string& text) {
  Parser p{text};
  ScalarExpr e;
  e.root_ = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  e.text_ = text;
  return e;
}

double ScalarExpr::operator()(double z) const {
  if (!root_) throw ValidationError("evaluating an empty expression");
  return root_->eval(z);
}

}  // namespace uio
