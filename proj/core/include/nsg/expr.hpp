#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nsg {

// Coordinates in the fixed order (u, v, x, y).
using Point = std::array<double, 4>;

enum class Op { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Ln, Sin, Cos };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Num;
  double value = 0.0;  // Num
  int index = 0;       // Var: coordinate slot; Pow: integer exponent
  Expr lhs;            // operand of unary nodes, left operand of binary nodes
  Expr rhs;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Raised for ln of a non-positive value and for division by zero.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Expr parse(std::string_view text);
std::string print(const Expr& e);
double eval_scalar(const Expr& e, const Point& p);

Expr make_num(double v);
Expr make_var(int slot);
Expr make_unary(Op op, Expr a);
Expr make_binary(Op op, Expr a, Expr b);
Expr make_pow(Expr base, int n);

bool depends_on(const Expr& e, int slot);

// Replaces every variable node by repl[slot].
Expr substitute(const Expr& e, const std::array<Expr, 4>& repl);

}  // namespace nsg
