#pragma once

#include <memory>
#include <string>

namespace uio {

/// Compiled closed-form expression in one variable z.
///
/// Grammar: numbers, z, pi, e, + - * / ^ (right assoc), unary minus, parens,
/// and the functions exp, sin, cos, tan, tanh, sinh, cosh, sqrt, log, abs.
/// Parse failures throw ValidationError with the offending position.
class ScalarExpr {
 public:
  ScalarExpr() = default;
  static ScalarExpr parse(const std::string& text);

  double operator()(double z) const;
  const std::string& text() const { return text_; }
  bool valid() const { return static_cast<bool>(root_); }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace uio
