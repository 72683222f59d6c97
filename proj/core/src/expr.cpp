#include "nsg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace nsg {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

Expr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

Expr make_var(int slot) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = slot;
  return n;
}

Expr make_unary(Op op, Expr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

Expr make_binary(Op op, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

Expr make_pow(Expr base, int k) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->index = k;
  n->lhs = std::move(base);
  return n;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = make_binary(Op::Add, e, term());
      else if (accept('-'))
        e = make_binary(Op::Sub, e, term());
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*'))
        e = make_binary(Op::Mul, e, unary());
      else if (accept('/'))
        e = make_binary(Op::Div, e, unary());
      else
        return e;
    }
  }

  Expr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    bool fractional = pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E');
    if (start == pos_ || fractional) throw ParseError("non-integer exponent", start);
    int k = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc()) throw ParseError("exponent out of range", start);
    (void)ptr;
    return make_pow(base, k);
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (digits == pos_) throw ParseError("malformed number exponent", mark);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    return make_num(v);
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      Op fn = Op::Num;
      if (name == "exp") fn = Op::Exp;
      else if (name == "ln") fn = Op::Ln;
      else if (name == "sin") fn = Op::Sin;
      else if (name == "cos") fn = Op::Cos;
      if (fn != Op::Num) {
        if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
        Expr arg = expr();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make_unary(fn, arg);
      }
      if (name.size() == 1) {
        static const std::string_view vars = "uvxy";
        auto slot = vars.find(name[0]);
        if (slot != std::string_view::npos) return make_var(static_cast<int>(slot));
      }
      throw ParseError("unknown identifier '" + std::string(s_.substr(start, pos_ - start)) + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }
};

// Precedence levels used by the printer.
int level(const Expr& e) {
  switch (e->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void emit(const Expr& e, std::string& out);

void emit_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  emit(e, out);
  if (wrap) out += ')';
}

void emit(const Expr& e, std::string& out) {
  switch (e->op) {
    case Op::Num: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e->value);
      (void)ec;
      out.append(buf, ptr);
      return;
    }
    case Op::Var: out += "uvxy"[e->index]; return;
    case Op::Exp: out += "exp("; emit(e->lhs, out); out += ')'; return;
    case Op::Ln: out += "ln("; emit(e->lhs, out); out += ')'; return;
    case Op::Sin: out += "sin("; emit(e->lhs, out); out += ')'; return;
    case Op::Cos: out += "cos("; emit(e->lhs, out); out += ')'; return;
    case Op::Neg:
      out += '-';
      emit_wrapped(e->lhs, level(e->lhs) < 3, out);
      return;
    case Op::Pow:
      emit_wrapped(e->lhs, level(e->lhs) < 5 || (e->lhs->op == Op::Num && e->lhs->value < 0), out);
      out += '^';
      out += std::to_string(e->index);
      return;
    default: {
      int lv = level(e);
      char sym = e->op == Op::Add ? '+' : e->op == Op::Sub ? '-' : e->op == Op::Mul ? '*' : '/';
      emit_wrapped(e->lhs, level(e->lhs) < lv, out);
      out += sym;
      emit_wrapped(e->rhs, level(e->rhs) <= lv, out);
      return;
    }
  }
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

std::string print(const Expr& e) {
  std::string out;
  emit(e, out);
  return out;
}

double eval_scalar(const Expr& e, const Point& p) {
  switch (e->op) {
    case Op::Num: return e->value;
    case Op::Var: return p[e->index];
    case Op::Add: return eval_scalar(e->lhs, p) + eval_scalar(e->rhs, p);
    case Op::Sub: return eval_scalar(e->lhs, p) - eval_scalar(e->rhs, p);
    case Op::Mul: return eval_scalar(e->lhs, p) * eval_scalar(e->rhs, p);
    case Op::Div: {
      double d = eval_scalar(e->rhs, p);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_scalar(e->lhs, p) / d;
    }
    case Op::Neg: return -eval_scalar(e->lhs, p);
    case Op::Pow: {
      double b = eval_scalar(e->lhs, p);
      if (b == 0.0 && e->index < 0) throw DomainError("division by zero");
      return std::pow(b, e->index);
    }
    case Op::Exp: return std::exp(eval_scalar(e->lhs, p));
    case Op::Ln: {
      double a = eval_scalar(e->lhs, p);
      if (!(a > 0.0)) throw DomainError("ln of non-positive value");
      return std::log(a);
    }
    case Op::Sin: return std::sin(eval_scalar(e->lhs, p));
    case Op::Cos: return std::cos(eval_scalar(e->lhs, p));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool depends_on(const Expr& e, int slot) {
  if (!e) return false;
  if (e->op == Op::Var) return e->index == slot;
  return depends_on(e->lhs, slot) || depends_on(e->rhs, slot);
}

Expr substitute(const Expr& e, const std::array<Expr, 4>& repl) {
  switch (e->op) {
    case Op::Num: return e;
    case Op::Var: return repl[e->index];
    case Op::Pow: return make_pow(substitute(e->lhs, repl), e->index);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return make_binary(e->op, substitute(e->lhs, repl), substitute(e->rhs, repl));
    default: return make_unary(e->op, substitute(e->lhs, repl));
  }
}

}  // namespace nsg
