#include "cmrp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "cmrp/errors.hpp"

namespace cmrp {

struct Expr::Node {
  enum class Op { Num, X, Theta1, Theta2, Add, Sub, Mul, Div, Neg, Ln, Exp, Pow };
  Op op;
  double num = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Num;
  n->num = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw ConfigError("expression: trailing characters at '" +
                        s_.substr(pos_) + "'");
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (consume('+'))
        lhs = make(Node::Op::Add, lhs, term());
      else if (consume('-'))
        lhs = make(Node::Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (consume('*'))
        lhs = make(Node::Op::Mul, lhs, factor());
      else if (consume('/'))
        lhs = make(Node::Op::Div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    if (consume('-')) return make(Node::Op::Neg, factor());
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ConfigError("expression: unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(s_.c_str() + pos_, &end);
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      return make_num(v);
    }
    if (consume('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    std::string id = identifier();
    if (id == "x") return make(Node::Op::X);
    if (id == "theta1") return make(Node::Op::Theta1);
    if (id == "theta2") return make(Node::Op::Theta2);
    if (id == "ln" || id == "exp") {
      expect('(');
      NodePtr a = expr();
      expect(')');
      return make(id == "ln" ? Node::Op::Ln : Node::Op::Exp, a);
    }
    if (id == "pow") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make(Node::Op::Pow, a, b);
    }
    throw ConfigError("expression: unknown identifier '" + id + "'");
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      throw ConfigError(std::string("expression: unexpected character '") +
                        s_[pos_] + "'");
    return s_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw ConfigError(std::string("expression: expected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double x, double t1, double t2) {
  switch (n.op) {
    case Node::Op::Num:
      return n.num;
    case Node::Op::X:
      return x;
    case Node::Op::Theta1:
      return t1;
    case Node::Op::Theta2:
      return t2;
    case Node::Op::Add:
      return eval_node(*n.a, x, t1, t2) + eval_node(*n.b, x, t1, t2);
    case Node::Op::Sub:
      return eval_node(*n.a, x, t1, t2) - eval_node(*n.b, x, t1, t2);
    case Node::Op::Mul:
      return eval_node(*n.a, x, t1, t2) * eval_node(*n.b, x, t1, t2);
    case Node::Op::Div:
      return eval_node(*n.a, x, t1, t2) / eval_node(*n.b, x, t1, t2);
    case Node::Op::Neg:
      return -eval_node(*n.a, x, t1, t2);
    case Node::Op::Ln:
      return std::log(eval_node(*n.a, x, t1, t2));
    case Node::Op::Exp:
      return std::exp(eval_node(*n.a, x, t1, t2));
    case Node::Op::Pow:
      return std::pow(eval_node(*n.a, x, t1, t2),
                      eval_node(*n.b, x, t1, t2));
  }
  throw ConfigError("expression: bad node");
}

bool uses(const Node& n, Node::Op what) {
  if (n.op == what) return true;
  if (n.a && uses(*n.a, what)) return true;
  if (n.b && uses(*n.b, what)) return true;
  return false;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expr::eval(double x, double theta1, double theta2) const {
  return eval_node(*root_, x, theta1, theta2);
}

bool Expr::uses_x() const { return uses(*root_, Node::Op::X); }
bool Expr::uses_theta2() const { return uses(*root_, Node::Op::Theta2); }

}  // namespace cmrp
