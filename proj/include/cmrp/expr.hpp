#ifndef CMRP_EXPR_HPP
#define CMRP_EXPR_HPP

#include <memory>
#include <string>

namespace cmrp {

/// Parsed arithmetic expression over the variables x, theta1, theta2.
/// Grammar: + - * /, unary minus, parentheses, ln(e), exp(e), pow(a,b),
/// numeric literals. Used for user-defined tilt functions in scenario
/// files.
class Expr {
 public:
  static Expr parse(const std::string& text);

  double eval(double x, double theta1 = 0.0, double theta2 = 0.0) const;

  bool uses_x() const;
  bool uses_theta2() const;
  const std::string& text() const { return text_; }

 private:
  struct Node;
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace cmrp

#endif  // CMRP_EXPR_HPP
