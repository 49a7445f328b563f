#include "volex/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "volex/errors.hpp"

namespace volex {

namespace {

struct FuncInfo {
  std::string_view name;
  Expr::Func id;
};

constexpr std::array<FuncInfo, 10> kFuncs = {{
    {"sin", Expr::Func::Sin},
    {"cos", Expr::Func::Cos},
    {"tan", Expr::Func::Tan},
    {"exp", Expr::Func::Exp},
    {"log", Expr::Func::Log},
    {"sqrt", Expr::Func::Sqrt},
    {"sinh", Expr::Func::Sinh},
    {"cosh", Expr::Func::Cosh},
    {"tanh", Expr::Func::Tanh},
    {"abs", Expr::Func::Abs},
}};

const char* func_name(Expr::Func f) {
  for (const auto& fi : kFuncs)
    if (fi.id == f) return fi.name.data();
  return "?";
}

// ---- lexer ----

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      tok_.text = {};
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': single(Tok::Plus); return;
      case '-': single(Tok::Minus); return;
      case '*': single(Tok::Star); return;
      case '/': single(Tok::Slash); return;
      case '^': single(Tok::Caret); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok_.kind = Tok::Ident;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  void single(Tok k) {
    tok_.kind = k;
    tok_.text = src_.substr(pos_, 1);
    ++pos_;
  }

  void lex_number() {
    std::size_t end = pos_;
    while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.'))
      ++end;
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        ++e;
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        end = e;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + pos_, src_.data() + end, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + end)
      throw SyntaxError("malformed number literal", pos_);
    tok_.kind = Tok::Number;
    tok_.text = src_.substr(pos_, end - pos_);
    tok_.value = v;
    pos_ = end;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

// ---- parser ----

class Parser {
 public:
  Parser(std::string_view src, const Chart& chart, ExprBuilder& out)
      : lex_(src), chart_(chart), out_(out) {}

  int parse_all() {
    const int root = expression();
    if (lex_.peek().kind != Tok::End)
      throw SyntaxError("unexpected trailing input", lex_.peek().offset);
    return root;
  }

 private:
  int expression() {
    int lhs = term();
    while (true) {
      const Tok k = lex_.peek().kind;
      if (k != Tok::Plus && k != Tok::Minus) return lhs;
      lex_.take();
      const int rhs = term();
      lhs = out_.binary(k == Tok::Plus ? Expr::BinOp::Add : Expr::BinOp::Sub, lhs, rhs);
    }
  }

  int term() {
    int lhs = unary();
    while (true) {
      const Tok k = lex_.peek().kind;
      if (k != Tok::Star && k != Tok::Slash) return lhs;
      lex_.take();
      const int rhs = unary();
      lhs = out_.binary(k == Tok::Star ? Expr::BinOp::Mul : Expr::BinOp::Div, lhs, rhs);
    }
  }

  int unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return out_.neg(unary());
    }
    return power();
  }

  int power() {
    const int base = primary();
    if (lex_.peek().kind != Tok::Caret) return base;
    lex_.take();
    const int exp = unary();  // right-associative, unary minus allowed
    return out_.binary(Expr::BinOp::Pow, base, exp);
  }

  int primary() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Number:
        lex_.take();
        return out_.number(t.value);
      case Tok::LParen: {
        lex_.take();
        const int inner = expression();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Ident: {
        lex_.take();
        if (t.text == "pi") return out_.number(std::numbers::pi);
        for (const auto& fi : kFuncs) {
          if (t.text != fi.name) continue;
          expect(Tok::LParen, "expected '(' after function name");
          const int arg = expression();
          expect(Tok::RParen, "expected ')'");
          return out_.call(fi.id, arg);
        }
        const int idx = chart_.coord_index(t.text);
        if (idx < 0) throw UnknownSymbol(std::string(t.text));
        return out_.symbol(idx);
      }
      case Tok::End:
        throw SyntaxError("unexpected end of input", t.offset);
      default:
        throw SyntaxError("unexpected token '" + std::string(t.text) + "'", t.offset);
    }
  }

  void expect(Tok k, const char* msg) {
    if (lex_.peek().kind != k) throw SyntaxError(msg, lex_.peek().offset);
    lex_.take();
  }

  Lexer lex_;
  const Chart& chart_;
  ExprBuilder& out_;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Binding strength of a node's top-level construct; used by the
// serializer to decide parenthesization.
//   add/sub = 1, mul/div = 2, unary minus = 3, pow = 4, atoms = 5
int binding(const Expr::Node& n) {
  if (std::holds_alternative<Expr::Number>(n) || std::holds_alternative<Expr::Symbol>(n) ||
      std::holds_alternative<Expr::Call>(n))
    return 5;
  if (std::holds_alternative<Expr::Unary>(n)) return 3;
  switch (std::get<Expr::Binary>(n).op) {
    case Expr::BinOp::Add:
    case Expr::BinOp::Sub: return 1;
    case Expr::BinOp::Mul:
    case Expr::BinOp::Div: return 2;
    case Expr::BinOp::Pow: return 4;
  }
  return 5;
}

}  // namespace

Expr Expr::parse(std::string_view src, const Chart& chart) {
  ExprBuilder builder(chart);
  Parser p(src, chart, builder);
  return builder.finish(p.parse_all());
}

Expr Expr::number(double v, const Chart& chart) {
  Expr e;
  e.coord_names_ = chart.names();
  if (std::signbit(v)) {
    e.nodes_.push_back(Number{-v});
    e.nodes_.push_back(Unary{0});
    e.root_ = 1;
  } else {
    e.nodes_.push_back(Number{v});
    e.root_ = 0;
  }
  return e;
}

namespace {

inline double call_value(Expr::Func f, double x) {
  switch (f) {
    case Expr::Func::Sin: return std::sin(x);
    case Expr::Func::Cos: return std::cos(x);
    case Expr::Func::Tan: return std::tan(x);
    case Expr::Func::Exp: return std::exp(x);
    case Expr::Func::Log:
      if (x <= 0.0) throw DomainError("log of a non-positive value");
      return std::log(x);
    case Expr::Func::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
    case Expr::Func::Sinh: return std::sinh(x);
    case Expr::Func::Cosh: return std::cosh(x);
    case Expr::Func::Tanh: return std::tanh(x);
    case Expr::Func::Abs: return std::abs(x);
  }
  return 0.0;
}

inline void call_jet(Expr::Func f, Jet2& out, const Jet2& a) {
  const double x = a.value();
  switch (f) {
    case Expr::Func::Sin:
      Jet2::compose(out, a, std::sin(x), std::cos(x), -std::sin(x));
      return;
    case Expr::Func::Cos:
      Jet2::compose(out, a, std::cos(x), -std::sin(x), -std::cos(x));
      return;
    case Expr::Func::Tan: {
      const double t = std::tan(x);
      const double sec2 = 1.0 + t * t;
      Jet2::compose(out, a, t, sec2, 2.0 * t * sec2);
      return;
    }
    case Expr::Func::Exp: {
      const double e = std::exp(x);
      Jet2::compose(out, a, e, e, e);
      return;
    }
    case Expr::Func::Log:
      if (x <= 0.0) throw DomainError("log of a non-positive value");
      Jet2::compose(out, a, std::log(x), 1.0 / x, -1.0 / (x * x));
      return;
    case Expr::Func::Sqrt: {
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      const double s = std::sqrt(x);
      Jet2::compose(out, a, s, 0.5 / s, -0.25 / (s * s * s));
      return;
    }
    case Expr::Func::Sinh:
      Jet2::compose(out, a, std::sinh(x), std::cosh(x), std::sinh(x));
      return;
    case Expr::Func::Cosh:
      Jet2::compose(out, a, std::cosh(x), std::sinh(x), std::cosh(x));
      return;
    case Expr::Func::Tanh: {
      const double t = std::tanh(x);
      const double sech2 = 1.0 - t * t;
      Jet2::compose(out, a, t, sech2, -2.0 * t * sech2);
      return;
    }
    case Expr::Func::Abs: {
      const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      Jet2::compose(out, a, std::abs(x), sgn, 0.0);
      return;
    }
  }
}

}  // namespace

double Expr::eval(std::span<const double> p) const {
  thread_local std::vector<double> slots;
  if (slots.size() < nodes_.size()) slots.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (const auto* num = std::get_if<Number>(&n)) {
      slots[i] = num->value;
    } else if (const auto* sym = std::get_if<Symbol>(&n)) {
      slots[i] = p[sym->coord];
    } else if (const auto* u = std::get_if<Unary>(&n)) {
      slots[i] = -slots[u->operand];
    } else if (const auto* b = std::get_if<Binary>(&n)) {
      const double l = slots[b->lhs], r = slots[b->rhs];
      switch (b->op) {
        case BinOp::Add: slots[i] = l + r; break;
        case BinOp::Sub: slots[i] = l - r; break;
        case BinOp::Mul: slots[i] = l * r; break;
        case BinOp::Div: slots[i] = l / r; break;
        case BinOp::Pow: {
          const bool integral = (r == std::nearbyint(r)) && std::abs(r) < 1e9;
          if (!integral && l <= 0.0)
            throw DomainError("fractional power of a non-positive base");
          slots[i] = std::pow(l, r);
          break;
        }
      }
    } else {
      const auto& c = std::get<Call>(n);
      slots[i] = call_value(c.fn, slots[c.arg]);
    }
  }
  const double v = slots[root_];
  if (!std::isfinite(v)) throw NonFinite("expression evaluated to a non-finite value");
  return v;
}

Jet2 Expr::eval_at(std::span<const Jet2> coords) const {
  thread_local std::vector<Jet2> slots;
  if (slots.size() < nodes_.size()) slots.resize(nodes_.size());
  const int jdim = coords.empty() ? 0 : coords[0].dim();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    Jet2& out = slots[i];
    if (const auto* num = std::get_if<Number>(&n)) {
      out.set_dim(jdim);
      out.set_value(num->value);
    } else if (const auto* sym = std::get_if<Symbol>(&n)) {
      out = coords[sym->coord];
    } else if (const auto* u = std::get_if<Unary>(&n)) {
      Jet2::neg(out, slots[u->operand]);
    } else if (const auto* b = std::get_if<Binary>(&n)) {
      const Jet2& l = slots[b->lhs];
      const Jet2& r = slots[b->rhs];
      switch (b->op) {
        case BinOp::Add: Jet2::add(out, l, r); break;
        case BinOp::Sub: Jet2::sub(out, l, r); break;
        case BinOp::Mul: Jet2::mul(out, l, r); break;
        case BinOp::Div: Jet2::div(out, l, r); break;
        case BinOp::Pow: {
          bool const_exp = true;
          for (int k = 0; k < r.dim() && const_exp; ++k) {
            if (r.grad(k) != 0.0) const_exp = false;
            for (int m = 0; m <= k && const_exp; ++m)
              if (r.hess(k, m) != 0.0) const_exp = false;
          }
          if (const_exp)
            Jet2::pow_const(out, l, r.value());
          else
            Jet2::pow_jet(out, l, r);
          break;
        }
      }
    } else {
      const auto& c = std::get<Call>(n);
      call_jet(c.fn, out, slots[c.arg]);
    }
  }
  if (!slots[root_].all_finite())
    throw NonFinite("expression jet evaluated to a non-finite value");
  return slots[root_];
}

Jet2 Expr::eval_jet2(std::span<const double> p) const {
  const int n = dim();
  thread_local std::vector<Jet2> seeds;
  if (static_cast<int>(seeds.size()) < n) seeds.resize(n);
  for (int i = 0; i < n; ++i) seeds[i] = Jet2::variable(n, i, p[i]);
  return eval_at(std::span<const Jet2>(seeds.data(), n));
}

std::string Expr::serialize() const {
  std::vector<std::string> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    auto wrap = [&](int child, int min_binding) {
      const std::string& s = out[child];
      return binding(nodes_[child]) < min_binding ? "(" + s + ")" : s;
    };
    if (const auto* num = std::get_if<Number>(&n)) {
      out[i] = format_number(num->value);
    } else if (const auto* sym = std::get_if<Symbol>(&n)) {
      out[i] = coord_names_[sym->coord];
    } else if (const auto* u = std::get_if<Unary>(&n)) {
      out[i] = "-" + wrap(u->operand, 3);
    } else if (const auto* b = std::get_if<Binary>(&n)) {
      switch (b->op) {
        case BinOp::Add: out[i] = wrap(b->lhs, 1) + " + " + wrap(b->rhs, 2); break;
        case BinOp::Sub: out[i] = wrap(b->lhs, 1) + " - " + wrap(b->rhs, 2); break;
        case BinOp::Mul: out[i] = wrap(b->lhs, 2) + "*" + wrap(b->rhs, 3); break;
        case BinOp::Div: out[i] = wrap(b->lhs, 2) + "/" + wrap(b->rhs, 3); break;
        case BinOp::Pow: out[i] = wrap(b->lhs, 5) + "^" + wrap(b->rhs, 3); break;
      }
    } else {
      const auto& c = std::get<Call>(n);
      out[i] = std::string(func_name(c.fn)) + "(" + out[c.arg] + ")";
    }
  }
  return out[root_];
}

bool operator==(const Expr& a, const Expr& b) {
  // Compare structurally from the roots; node indices may differ.
  struct Cmp {
    const Expr& x;
    const Expr& y;
    bool eq(int i, int j) const {
      const Expr::Node& n = x.nodes_[i];
      const Expr::Node& m = y.nodes_[j];
      if (n.index() != m.index()) return false;
      if (const auto* a1 = std::get_if<Expr::Number>(&n))
        return a1->value == std::get<Expr::Number>(m).value;
      if (const auto* a2 = std::get_if<Expr::Symbol>(&n))
        return a2->coord == std::get<Expr::Symbol>(m).coord;
      if (const auto* a3 = std::get_if<Expr::Unary>(&n))
        return eq(a3->operand, std::get<Expr::Unary>(m).operand);
      if (const auto* a4 = std::get_if<Expr::Binary>(&n)) {
        const auto& b4 = std::get<Expr::Binary>(m);
        return a4->op == b4.op && eq(a4->lhs, b4.lhs) && eq(a4->rhs, b4.rhs);
      }
      const auto& a5 = std::get<Expr::Call>(n);
      const auto& b5 = std::get<Expr::Call>(m);
      return a5.fn == b5.fn && eq(a5.arg, b5.arg);
    }
  };
  if (a.coord_names_ != b.coord_names_) return false;
  if (a.root_ < 0 || b.root_ < 0) return a.root_ == b.root_;
  return Cmp{a, b}.eq(a.root_, b.root_);
}

ExprBuilder::ExprBuilder(const Chart& chart) { e_.coord_names_ = chart.names(); }

int ExprBuilder::number(double v) {
  e_.nodes_.push_back(Expr::Number{v});
  return static_cast<int>(e_.nodes_.size()) - 1;
}
int ExprBuilder::symbol(int coord) {
  e_.nodes_.push_back(Expr::Symbol{coord});
  return static_cast<int>(e_.nodes_.size()) - 1;
}
int ExprBuilder::neg(int a) {
  e_.nodes_.push_back(Expr::Unary{a});
  return static_cast<int>(e_.nodes_.size()) - 1;
}
int ExprBuilder::binary(Expr::BinOp op, int a, int b) {
  e_.nodes_.push_back(Expr::Binary{op, a, b});
  return static_cast<int>(e_.nodes_.size()) - 1;
}
int ExprBuilder::call(Expr::Func f, int a) {
  e_.nodes_.push_back(Expr::Call{f, a});
  return static_cast<int>(e_.nodes_.size()) - 1;
}
Expr ExprBuilder::finish(int root) {
  e_.root_ = root;
  return std::move(e_);
}

}  // namespace volex
