#include "indicatrix/expr.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

namespace indicatrix {

const char* function_name(Function f) {
  switch (f) {
    case Function::exp:
      return "exp";
    case Function::log:
      return "log";
    case Function::sqrt:
      return "sqrt";
    case Function::sin:
      return "sin";
    case Function::cos:
      return "cos";
  }
  return "?";
}

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs, std::size_t offset) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->offset = offset;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, Dims dims) : text_(text), dims_(dims) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "', expected operator", pos_);
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = make_binary(Node::Kind::add, lhs, parse_product(), at);
      } else if (accept('-')) {
        lhs = make_binary(Node::Kind::sub, lhs, parse_product(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = make_binary(Node::Kind::mul, lhs, parse_unary(), at);
      } else if (accept('/')) {
        lhs = make_binary(Node::Kind::div, lhs, parse_unary(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->lhs = parse_unary();
      n->offset = at;
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (!accept('^')) return base;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::power;
      n->lhs = base;
      n->number = parse_exponent();
      n->offset = at;
      base = n;
    }
  }

  double parse_exponent() {
    skip_space();
    if (accept('(')) {
      double v = parse_signed_literal();
      if (!accept(')')) throw ParseError("expected ')' after exponent", pos_);
      return v;
    }
    return parse_signed_literal();
  }

  double parse_signed_literal() {
    skip_space();
    double sign = 1.0;
    if (accept('-')) {
      sign = -1.0;
    } else {
      accept('+');
    }
    skip_space();
    if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      throw ParseError("exponent must be a numeric literal", pos_);
    return sign * parse_number_value();
  }

  double parse_number_value() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  NodePtr parse_primary() {
    skip_space();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input, expected operand", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::number;
      n->number = parse_number_value();
      n->offset = at;
      return n;
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "', expected operand (number, variable, call or '(')", at);
  }

  NodePtr parse_identifier() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
    const std::string word(text_.substr(pos_, end - pos_));
    std::size_t digits_end = end;
    while (digits_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[digits_end]))) ++digits_end;

    static const std::pair<const char*, Function> functions[] = {{"exp", Function::exp},
                                                                 {"log", Function::log},
                                                                 {"sqrt", Function::sqrt},
                                                                 {"sin", Function::sin},
                                                                 {"cos", Function::cos}};
    if (digits_end == end) {
      for (const auto& [name, fn] : functions) {
        if (word != name) continue;
        pos_ = end;
        if (!accept('(')) throw ParseError("expected '(' after " + word, pos_);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = fn;
        n->lhs = parse_sum();
        n->offset = at;
        if (!accept(')')) throw ParseError("expected ')' to close " + word + "(", pos_);
        return n;
      }
      if (word == "t" && dims_.allow_t) {
        pos_ = end;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->var = {VarKind::t, 0};
        n->offset = at;
        return n;
      }
      throw ParseError("unknown identifier '" + word + "'", at);
    }

    VarKind kind;
    int limit;
    if (word == "x") {
      kind = VarKind::x;
      limit = dims_.n;
    } else if (word == "y") {
      kind = VarKind::y;
      limit = dims_.n;
    } else if (word == "u") {
      kind = VarKind::u;
      limit = dims_.m;
    } else if (word == "v") {
      kind = VarKind::v;
      limit = dims_.m;
    } else {
      throw ParseError("unknown identifier '" + std::string(text_.substr(at, digits_end - at)) + "'", at);
    }
    int index = 0;
    std::from_chars(text_.data() + end, text_.data() + digits_end, index);
    if (index < 1 || index > limit)
      throw ParseError("variable " + std::string(text_.substr(at, digits_end - at)) + " out of range (dimension " +
                           std::to_string(limit) + ")",
                       at);
    pos_ = digits_end;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->var = {kind, index - 1};
    n->offset = at;
    return n;
  }

  std::string_view text_;
  Dims dims_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  return s;
}

bool is_atom(const Node& n) {
  using K = Node::Kind;
  return n.kind == K::number || n.kind == K::variable || n.kind == K::call;
}

std::string print_node(const Node& n) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::number:
      return format_number(n.number);
    case K::variable: {
      if (n.var.kind == VarKind::t) return "t";
      const char* names = "xyuv";
      return std::string(1, names[static_cast<int>(n.var.kind)]) + std::to_string(n.var.index + 1);
    }
    case K::negate: {
      const bool bare = is_atom(*n.lhs) || n.lhs->kind == K::power;
      return bare ? "-" + print_node(*n.lhs) : "-(" + print_node(*n.lhs) + ")";
    }
    case K::add:
      return "(" + print_node(*n.lhs) + " + " + print_node(*n.rhs) + ")";
    case K::sub:
      return "(" + print_node(*n.lhs) + " - " + print_node(*n.rhs) + ")";
    case K::mul:
      return "(" + print_node(*n.lhs) + " * " + print_node(*n.rhs) + ")";
    case K::div:
      return "(" + print_node(*n.lhs) + " / " + print_node(*n.rhs) + ")";
    case K::power: {
      std::string base = is_atom(*n.lhs) ? print_node(*n.lhs) : "(" + print_node(*n.lhs) + ")";
      return base + "^" + format_number(n.number);
    }
    case K::call:
      return std::string(function_name(n.fn)) + "(" + print_node(*n.lhs) + ")";
  }
  return "";
}

bool equal_nodes(const Node& a, const Node& b) {
  using K = Node::Kind;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case K::number:
      return a.number == b.number;
    case K::variable:
      return a.var == b.var;
    case K::negate:
      return equal_nodes(*a.lhs, *b.lhs);
    case K::power:
      return a.number == b.number && equal_nodes(*a.lhs, *b.lhs);
    case K::call:
      return a.fn == b.fn && equal_nodes(*a.lhs, *b.lhs);
    default:
      return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

void collect_usage(const Node& n, Expr::Usage& u) {
  if (n.kind == Node::Kind::variable) {
    const int idx = n.var.index + 1;
    switch (n.var.kind) {
      case VarKind::x:
        u.x = std::max(u.x, idx);
        break;
      case VarKind::y:
        u.y = std::max(u.y, idx);
        break;
      case VarKind::u:
        u.u = std::max(u.u, idx);
        break;
      case VarKind::v:
        u.v = std::max(u.v, idx);
        break;
      case VarKind::t:
        u.t = true;
        break;
    }
  }
  if (n.lhs) collect_usage(*n.lhs, u);
  if (n.rhs) collect_usage(*n.rhs, u);
}

}  // namespace

Expr Expr::parse(std::string_view text, Dims dims) { return Expr(Parser(text, dims).parse()); }

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->number = value;
  return Expr(n);
}

std::string Expr::print() const { return print_node(*root_); }

bool Expr::operator==(const Expr& other) const { return equal_nodes(*root_, *other.root_); }

Expr::Usage Expr::usage() const {
  Usage u;
  collect_usage(*root_, u);
  return u;
}

}  // namespace indicatrix
