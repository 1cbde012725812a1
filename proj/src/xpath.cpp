#include "svc/xpath.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <variant>

#include "svc/error.hpp"

namespace svc::xpath {

namespace detail {

struct Item {
  const html::Node* node = nullptr;
  int attr = -1;  // index into node->attributes when this is an attribute

  bool operator==(const Item&) const = default;
};

using NodeSet = std::vector<Item>;
using Value = std::variant<NodeSet, double, std::string, bool>;

struct Ctx {
  Item item;
  std::size_t position = 1;
  std::size_t size = 1;
  const html::Node* root = nullptr;
};

struct Expr {
  virtual ~Expr() = default;
  virtual Value eval(const Ctx& ctx) const = 0;
  virtual bool positional() const { return false; }
};

using ExprPtr = std::unique_ptr<Expr>;

}  // namespace detail

namespace {

using detail::Ctx;
using detail::Expr;
using detail::ExprPtr;
using detail::Item;
using detail::NodeSet;
using detail::Value;

bool item_less(const Item& a, const Item& b) {
  if (a.node->order != b.node->order) return a.node->order < b.node->order;
  return a.attr < b.attr;
}

void sort_unique(NodeSet& ns) {
  std::sort(ns.begin(), ns.end(), item_less);
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
}

std::string string_value(const Item& item) {
  if (item.attr >= 0) return item.node->attributes[static_cast<std::size_t>(item.attr)].second;
  switch (item.node->type) {
    case html::NodeType::text:
    case html::NodeType::comment:
      return item.node->data;
    default:
      return html::text_content(*item.node);
  }
}

double parse_number(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return std::nan("");
  auto e = s.find_last_not_of(" \t\r\n");
  std::string t(s.substr(b, e - b + 1));
  bool seen_digit = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
    } else if (!(c == '.' || (c == '-' && i == 0))) {
      return std::nan("");
    }
  }
  if (!seen_digit) return std::nan("");
  return std::strtod(t.c_str(), nullptr);
}

std::string number_to_string(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  if (d == std::floor(d) && std::fabs(d) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", d);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", d);
  return buf;
}

std::string to_string(const Value& v) {
  struct V {
    std::string operator()(const NodeSet& ns) const {
      if (ns.empty()) return "";
      return string_value(*std::min_element(ns.begin(), ns.end(), item_less));
    }
    std::string operator()(double d) const { return number_to_string(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, v);
}

double to_number(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  return parse_number(to_string(v));
}

bool to_boolean(const Value& v) {
  struct V {
    bool operator()(const NodeSet& ns) const { return !ns.empty(); }
    bool operator()(double d) const { return d != 0 && !std::isnan(d); }
    bool operator()(const std::string& s) const { return !s.empty(); }
    bool operator()(bool b) const { return b; }
  };
  return std::visit(V{}, v);
}

std::string normalize_space(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

enum class CmpOp { eq, ne, lt, le, gt, ge };

bool compare_atoms(CmpOp op, const Value& a, const Value& b) {
  if (op == CmpOp::eq || op == CmpOp::ne) {
    bool eq;
    if (std::holds_alternative<bool>(a) || std::holds_alternative<bool>(b)) {
      eq = to_boolean(a) == to_boolean(b);
    } else if (std::holds_alternative<double>(a) || std::holds_alternative<double>(b)) {
      eq = to_number(a) == to_number(b);
    } else {
      eq = to_string(a) == to_string(b);
    }
    return op == CmpOp::eq ? eq : !eq;
  }
  double x = to_number(a), y = to_number(b);
  switch (op) {
    case CmpOp::lt: return x < y;
    case CmpOp::le: return x <= y;
    case CmpOp::gt: return x > y;
    case CmpOp::ge: return x >= y;
    default: return false;
  }
}

bool compare(CmpOp op, const Value& a, const Value& b) {
  const auto* na = std::get_if<NodeSet>(&a);
  const auto* nb = std::get_if<NodeSet>(&b);
  if (na && nb) {
    for (const auto& x : *na)
      for (const auto& y : *nb)
        if (compare_atoms(op, Value(string_value(x)), Value(string_value(y)))) return true;
    return false;
  }
  if (na || nb) {
    const NodeSet& ns = na ? *na : *nb;
    const Value& other = na ? b : a;
    if (std::holds_alternative<bool>(other)) {
      return na ? compare_atoms(op, Value(!ns.empty()), other)
                : compare_atoms(op, other, Value(!ns.empty()));
    }
    for (const auto& item : ns) {
      Value sv = std::holds_alternative<double>(other) ? Value(parse_number(string_value(item)))
                                                       : Value(string_value(item));
      if (na ? compare_atoms(op, sv, other) : compare_atoms(op, other, sv)) return true;
    }
    return false;
  }
  return compare_atoms(op, a, b);
}

// ---- AST -----------------------------------------------------------------

struct NumberExpr : Expr {
  double value;
  explicit NumberExpr(double v) : value(v) {}
  Value eval(const Ctx&) const override { return value; }
  bool positional() const override { return true; }
};

struct LiteralExpr : Expr {
  std::string value;
  explicit LiteralExpr(std::string v) : value(std::move(v)) {}
  Value eval(const Ctx&) const override { return value; }
};

struct NegateExpr : Expr {
  ExprPtr inner;
  explicit NegateExpr(ExprPtr e) : inner(std::move(e)) {}
  Value eval(const Ctx& ctx) const override { return -to_number(inner->eval(ctx)); }
  bool positional() const override { return inner->positional(); }
};

enum class BinOp { or_, and_, eq, ne, lt, le, gt, ge, add, sub, mul, div, mod };

struct FunctionExpr : Expr {
  std::string name;
  std::vector<ExprPtr> args;

  Value eval(const Ctx& ctx) const override {
    auto arg = [&](std::size_t i) { return args[i]->eval(ctx); };
    auto context_string = [&]() {
      return args.empty() ? string_value(ctx.item) : to_string(arg(0));
    };
    if (name == "position") return static_cast<double>(ctx.position);
    if (name == "last") return static_cast<double>(ctx.size);
    if (name == "true") return true;
    if (name == "false") return false;
    if (name == "not") return !to_boolean(arg(0));
    if (name == "boolean") return to_boolean(arg(0));
    if (name == "number") return args.empty() ? parse_number(string_value(ctx.item)) : to_number(arg(0));
    if (name == "string") return context_string();
    if (name == "normalize-space") return normalize_space(context_string());
    if (name == "string-length") return static_cast<double>(context_string().size());
    if (name == "concat") {
      std::string out;
      for (std::size_t i = 0; i < args.size(); ++i) out += to_string(arg(i));
      return out;
    }
    if (name == "contains") return to_string(arg(0)).find(to_string(arg(1))) != std::string::npos;
    if (name == "starts-with") return to_string(arg(0)).starts_with(to_string(arg(1)));
    if (name == "ends-with") return to_string(arg(0)).ends_with(to_string(arg(1)));
    if (name == "substring-before" || name == "substring-after") {
      std::string s = to_string(arg(0)), t = to_string(arg(1));
      auto pos = s.find(t);
      if (pos == std::string::npos) return std::string();
      return name == "substring-before" ? s.substr(0, pos) : s.substr(pos + t.size());
    }
    if (name == "translate") {
      std::string s = to_string(arg(0)), from = to_string(arg(1)), to = to_string(arg(2));
      std::string out;
      for (char c : s) {
        auto pos = from.find(c);
        if (pos == std::string::npos) {
          out += c;
        } else if (pos < to.size()) {
          out += to[pos];
        }
      }
      return out;
    }
    if (name == "count") {
      Value v = arg(0);
      const auto* ns = std::get_if<NodeSet>(&v);
      if (!ns) throw Error(Errc::selector_parse, "count() expects a node-set");
      return static_cast<double>(ns->size());
    }
    if (name == "sum") {
      Value v = arg(0);
      const auto* ns = std::get_if<NodeSet>(&v);
      if (!ns) throw Error(Errc::selector_parse, "sum() expects a node-set");
      double total = 0;
      for (const auto& i : *ns) total += parse_number(string_value(i));
      return total;
    }
    if (name == "floor") return std::floor(to_number(arg(0)));
    if (name == "ceiling") return std::ceil(to_number(arg(0)));
    if (name == "round") return std::floor(to_number(arg(0)) + 0.5);
    if (name == "name" || name == "local-name") {
      Item it = ctx.item;
      if (!args.empty()) {
        Value v = arg(0);
        const auto* ns = std::get_if<NodeSet>(&v);
        if (!ns || ns->empty()) return std::string();
        it = *std::min_element(ns->begin(), ns->end(), item_less);
      }
      if (it.attr >= 0) return it.node->attributes[static_cast<std::size_t>(it.attr)].first;
      return it.node->is_element() ? it.node->name : std::string();
    }
    throw Error(Errc::selector_parse, "unknown xpath function " + name + "()");
  }

  bool positional() const override { return name == "last"; }
};

struct BinaryExpr : Expr {
  BinOp op;
  ExprPtr lhs, rhs;
  BinaryExpr(BinOp o, ExprPtr l, ExprPtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}

  Value eval(const Ctx& ctx) const override {
    switch (op) {
      case BinOp::or_: return to_boolean(lhs->eval(ctx)) || to_boolean(rhs->eval(ctx));
      case BinOp::and_: return to_boolean(lhs->eval(ctx)) && to_boolean(rhs->eval(ctx));
      case BinOp::eq: return compare(CmpOp::eq, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::ne: return compare(CmpOp::ne, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::lt: return compare(CmpOp::lt, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::le: return compare(CmpOp::le, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::gt: return compare(CmpOp::gt, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::ge: return compare(CmpOp::ge, lhs->eval(ctx), rhs->eval(ctx));
      case BinOp::add: return to_number(lhs->eval(ctx)) + to_number(rhs->eval(ctx));
      case BinOp::sub: return to_number(lhs->eval(ctx)) - to_number(rhs->eval(ctx));
      case BinOp::mul: return to_number(lhs->eval(ctx)) * to_number(rhs->eval(ctx));
      case BinOp::div: return to_number(lhs->eval(ctx)) / to_number(rhs->eval(ctx));
      case BinOp::mod: return std::fmod(to_number(lhs->eval(ctx)), to_number(rhs->eval(ctx)));
    }
    return false;
  }

  bool positional() const override {
    auto is_position_call = [](const Expr& e) {
      const auto* f = dynamic_cast<const FunctionExpr*>(&e);
      return f && f->name == "position";
    };
    switch (op) {
      case BinOp::add:
      case BinOp::sub:
      case BinOp::mul:
      case BinOp::div:
      case BinOp::mod:
        return lhs->positional() && rhs->positional();
      case BinOp::eq:
      case BinOp::ne:
      case BinOp::lt:
      case BinOp::le:
      case BinOp::gt:
      case BinOp::ge:
        return is_position_call(*lhs) || is_position_call(*rhs);
      default:
        return false;
    }
  }
};

enum class Axis {
  child, descendant, descendant_or_self, self, parent, ancestor, ancestor_or_self,
  following_sibling, preceding_sibling, attribute,
};

enum class TestKind { name, any, node, text, comment };

struct Predicate {
  ExprPtr expr;
  std::size_t begin = 0, end = 0;
};

struct Step {
  Axis axis = Axis::child;
  TestKind test = TestKind::node;
  std::string name;
  std::vector<Predicate> predicates;
};

bool test_matches(const Step& step, const Item& item) {
  if (step.axis == Axis::attribute) {
    if (item.attr < 0) return false;
    if (step.test == TestKind::name)
      return item.node->attributes[static_cast<std::size_t>(item.attr)].first == step.name;
    return step.test == TestKind::any || step.test == TestKind::node;
  }
  const html::Node& n = *item.node;
  switch (step.test) {
    case TestKind::name: return n.is_element() && n.name == step.name;
    case TestKind::any: return n.is_element();
    case TestKind::node: return true;
    case TestKind::text: return n.type == html::NodeType::text;
    case TestKind::comment: return n.type == html::NodeType::comment;
  }
  return false;
}

void descendants(const html::Node& n, NodeSet& out) {
  for (const auto& c : n.children) {
    if (c->type == html::NodeType::doctype) continue;
    out.push_back({c.get(), -1});
    descendants(*c, out);
  }
}

// Candidates in axis (proximity) order.
NodeSet axis_nodes(Axis axis, const Item& item) {
  NodeSet out;
  if (item.attr >= 0) {
    // Attributes have a parent (their element) and nothing else of interest.
    if (axis == Axis::parent || axis == Axis::ancestor || axis == Axis::ancestor_or_self) {
      if (axis == Axis::ancestor_or_self) out.push_back(item);
      for (const html::Node* p = item.node; p; p = p->parent) {
        out.push_back({p, -1});
        if (axis == Axis::parent) break;
      }
    } else if (axis == Axis::self || axis == Axis::descendant_or_self) {
      out.push_back(item);
    }
    return out;
  }
  const html::Node* n = item.node;
  switch (axis) {
    case Axis::child:
      for (const auto& c : n->children)
        if (c->type != html::NodeType::doctype) out.push_back({c.get(), -1});
      break;
    case Axis::descendant:
      descendants(*n, out);
      break;
    case Axis::descendant_or_self:
      out.push_back(item);
      descendants(*n, out);
      break;
    case Axis::self:
      out.push_back(item);
      break;
    case Axis::parent:
      if (n->parent) out.push_back({n->parent, -1});
      break;
    case Axis::ancestor_or_self:
      out.push_back(item);
      [[fallthrough]];
    case Axis::ancestor:
      for (const html::Node* p = n->parent; p; p = p->parent) out.push_back({p, -1});
      break;
    case Axis::following_sibling:
    case Axis::preceding_sibling: {
      if (!n->parent) break;
      const auto& sibs = n->parent->children;
      auto it = std::find_if(sibs.begin(), sibs.end(), [&](const auto& c) { return c.get() == n; });
      if (axis == Axis::following_sibling) {
        for (auto j = std::next(it); j != sibs.end(); ++j) out.push_back({j->get(), -1});
      } else {
        for (auto j = std::make_reverse_iterator(it); j != sibs.rend(); ++j)
          out.push_back({j->get(), -1});
      }
      break;
    }
    case Axis::attribute:
      if (n->is_element())
        for (std::size_t i = 0; i < n->attributes.size(); ++i)
          out.push_back({n, static_cast<int>(i)});
      break;
  }
  return out;
}

NodeSet apply_predicates(NodeSet nodes, const std::vector<Predicate>& preds, const html::Node* root) {
  for (const auto& pred : preds) {
    NodeSet kept;
    const std::size_t size = nodes.size();
    for (std::size_t i = 0; i < size; ++i) {
      Ctx c{nodes[i], i + 1, size, root};
      Value v = pred.expr->eval(c);
      bool keep = std::holds_alternative<double>(v)
                      ? std::get<double>(v) == static_cast<double>(i + 1)
                      : to_boolean(v);
      if (keep) kept.push_back(nodes[i]);
    }
    nodes = std::move(kept);
  }
  return nodes;
}

struct PathExpr : Expr {
  ExprPtr filter;  // primary expression, when this is a filter path
  std::vector<Predicate> filter_predicates;
  bool absolute = false;
  std::vector<Step> steps;

  Value eval(const Ctx& ctx) const override {
    NodeSet current;
    if (filter) {
      Value v = filter->eval(ctx);
      auto* ns = std::get_if<NodeSet>(&v);
      if (!ns) {
        if (steps.empty() && filter_predicates.empty()) return v;
        throw Error(Errc::selector_parse, "filter expression is not a node-set");
      }
      current = std::move(*ns);
      sort_unique(current);
      current = apply_predicates(std::move(current), filter_predicates, ctx.root);
    } else if (absolute) {
      current.push_back({ctx.root, -1});
    } else {
      current.push_back(ctx.item);
    }
    for (const auto& step : steps) {
      NodeSet next;
      for (const auto& item : current) {
        NodeSet candidates;
        for (const auto& c : axis_nodes(step.axis, item))
          if (test_matches(step, c)) candidates.push_back(c);
        auto kept = apply_predicates(std::move(candidates), step.predicates, ctx.root);
        next.insert(next.end(), kept.begin(), kept.end());
      }
      sort_unique(next);
      current = std::move(next);
    }
    return current;
  }

  std::vector<std::pair<std::size_t, std::size_t>> trailing_positional() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& preds = steps.empty() ? filter_predicates : steps.back().predicates;
    for (const auto& p : preds)
      if (p.expr->positional()) out.emplace_back(p.begin, p.end);
    return out;
  }
};

struct UnionExpr : Expr {
  std::vector<ExprPtr> branches;
  Value eval(const Ctx& ctx) const override {
    NodeSet out;
    for (const auto& b : branches) {
      Value v = b->eval(ctx);
      auto* ns = std::get_if<NodeSet>(&v);
      if (!ns) throw Error(Errc::selector_parse, "union operand is not a node-set");
      out.insert(out.end(), ns->begin(), ns->end());
    }
    sort_unique(out);
    return out;
  }
};

// ---- lexer -----------------------------------------------------------------

enum class Tok {
  slash, dslash, lparen, rparen, lbracket, rbracket, dot, ddot, at, comma, dcolon, pipe,
  plus, minus, eq, ne, lt, le, gt, ge, star, mul, literal, number, name, op_name, end,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t begin, end;
};

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || u >= 0x80;
}
bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || c == '.' || u >= 0x80;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  auto fail = [&](std::size_t at, const std::string& what) {
    throw Error(Errc::selector_parse,
                "xpath '" + std::string(src) + "': " + what + " at offset " + std::to_string(at));
  };
  // XPath 1.0 section 3.7: '*' and NCNames are operators when a preceding
  // token exists and is not one of @ :: ( [ , or an operator.
  auto operator_context = [&]() {
    if (out.empty()) return false;
    switch (out.back().kind) {
      case Tok::at: case Tok::dcolon: case Tok::lparen: case Tok::lbracket: case Tok::comma:
      case Tok::slash: case Tok::dslash: case Tok::pipe: case Tok::plus: case Tok::minus:
      case Tok::eq: case Tok::ne: case Tok::lt: case Tok::le: case Tok::gt: case Tok::ge:
      case Tok::mul: case Tok::op_name:
        return false;
      default:
        return true;
    }
  };
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(src.substr(start, len)), start, start + len});
      i = start + len;
    };
    auto next = [&](std::size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
    switch (c) {
      case '/': next(1) == '/' ? push(Tok::dslash, 2) : push(Tok::slash, 1); continue;
      case '(': push(Tok::lparen, 1); continue;
      case ')': push(Tok::rparen, 1); continue;
      case '[': push(Tok::lbracket, 1); continue;
      case ']': push(Tok::rbracket, 1); continue;
      case '@': push(Tok::at, 1); continue;
      case ',': push(Tok::comma, 1); continue;
      case '|': push(Tok::pipe, 1); continue;
      case '+': push(Tok::plus, 1); continue;
      case '-': push(Tok::minus, 1); continue;
      case '=': push(Tok::eq, 1); continue;
      case '!':
        if (next(1) != '=') fail(i, "expected '!='");
        push(Tok::ne, 2);
        continue;
      case '<': next(1) == '=' ? push(Tok::le, 2) : push(Tok::lt, 1); continue;
      case '>': next(1) == '=' ? push(Tok::ge, 2) : push(Tok::gt, 1); continue;
      case ':':
        if (next(1) != ':') fail(i, "unexpected ':'");
        push(Tok::dcolon, 2);
        continue;
      case '*': push(operator_context() ? Tok::mul : Tok::star, 1); continue;
      case '"':
      case '\'': {
        auto close = src.find(c, i + 1);
        if (close == std::string_view::npos) fail(i, "unterminated literal");
        out.push_back({Tok::literal, std::string(src.substr(i + 1, close - i - 1)), i, close + 1});
        i = close + 1;
        continue;
      }
      default: break;
    }
    if (c == '.') {
      if (std::isdigit(static_cast<unsigned char>(next(1)))) {
        // number like .5
      } else if (next(1) == '.') {
        push(Tok::ddot, 2);
        continue;
      } else {
        push(Tok::dot, 1);
        continue;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      push(Tok::number, j - i);
      continue;
    }
    if (is_name_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_name_char(src[j])) ++j;
      if (j + 1 < src.size() && src[j] == ':' && src[j + 1] != ':' && is_name_start(src[j + 1])) {
        ++j;
        while (j < src.size() && is_name_char(src[j])) ++j;
      }
      std::string word(src.substr(i, j - i));
      bool is_op = operator_context() && (word == "and" || word == "or" || word == "div" || word == "mod");
      push(is_op ? Tok::op_name : Tok::name, j - i);
      continue;
    }
    fail(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", src.size(), src.size()});
  return out;
}

// ---- parser ------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  ExprPtr parse() {
    ExprPtr e = parse_or();
    if (peek().kind != Tok::end) fail("unexpected token '" + peek().text + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::selector_parse, "xpath '" + std::string(src_) + "': " + what + " at offset " +
                                          std::to_string(peek().begin));
  }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  bool accept_op(std::string_view word) {
    if (peek().kind == Tok::op_name && peek().text == word) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_op("or")) lhs = std::make_unique<BinaryExpr>(BinOp::or_, std::move(lhs), parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_equality();
    while (accept_op("and"))
      lhs = std::make_unique<BinaryExpr>(BinOp::and_, std::move(lhs), parse_equality());
    return lhs;
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_relational();
    while (true) {
      if (accept(Tok::eq)) {
        lhs = std::make_unique<BinaryExpr>(BinOp::eq, std::move(lhs), parse_relational());
      } else if (accept(Tok::ne)) {
        lhs = std::make_unique<BinaryExpr>(BinOp::ne, std::move(lhs), parse_relational());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    while (true) {
      BinOp op;
      if (accept(Tok::lt)) op = BinOp::lt;
      else if (accept(Tok::le)) op = BinOp::le;
      else if (accept(Tok::gt)) op = BinOp::gt;
      else if (accept(Tok::ge)) op = BinOp::ge;
      else return lhs;
      lhs = std::make_unique<BinaryExpr>(op, std::move(lhs), parse_additive());
    }
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      if (accept(Tok::plus)) {
        lhs = std::make_unique<BinaryExpr>(BinOp::add, std::move(lhs), parse_multiplicative());
      } else if (accept(Tok::minus)) {
        lhs = std::make_unique<BinaryExpr>(BinOp::sub, std::move(lhs), parse_multiplicative());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (true) {
      if (accept(Tok::mul)) {
        lhs = std::make_unique<BinaryExpr>(BinOp::mul, std::move(lhs), parse_unary());
      } else if (accept_op("div")) {
        lhs = std::make_unique<BinaryExpr>(BinOp::div, std::move(lhs), parse_unary());
      } else if (accept_op("mod")) {
        lhs = std::make_unique<BinaryExpr>(BinOp::mod, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    if (accept(Tok::minus)) return std::make_unique<NegateExpr>(parse_unary());
    return parse_union();
  }

  ExprPtr parse_union() {
    ExprPtr first = parse_path();
    if (peek().kind != Tok::pipe) return first;
    auto u = std::make_unique<UnionExpr>();
    u->branches.push_back(std::move(first));
    while (accept(Tok::pipe)) u->branches.push_back(parse_path());
    return u;
  }

  static bool is_node_type(std::string_view name) {
    return name == "node" || name == "text" || name == "comment" ||
           name == "processing-instruction";
  }

  bool starts_filter() const {
    const Token& t = peek();
    if (t.kind == Tok::lparen || t.kind == Tok::literal || t.kind == Tok::number) return true;
    return t.kind == Tok::name && peek(1).kind == Tok::lparen && !is_node_type(t.text);
  }

  ExprPtr parse_path() {
    auto path = std::make_unique<PathExpr>();
    if (starts_filter()) {
      ExprPtr primary = parse_primary();
      while (peek().kind == Tok::lbracket) path->filter_predicates.push_back(parse_predicate());
      if (peek().kind != Tok::slash && peek().kind != Tok::dslash) {
        if (path->filter_predicates.empty()) return primary;
        path->filter = std::move(primary);
        return path;
      }
      path->filter = std::move(primary);
      parse_relative_steps(*path, /*leading_separator=*/true);
      return path;
    }
    if (peek().kind == Tok::slash) {
      take();
      path->absolute = true;
      if (starts_step()) parse_relative_steps(*path, false);
      return path;
    }
    if (peek().kind == Tok::dslash) {
      path->absolute = true;
      parse_relative_steps(*path, true);
      return path;
    }
    if (!starts_step()) fail("expected location step");
    parse_relative_steps(*path, false);
    return path;
  }

  bool starts_step() const {
    switch (peek().kind) {
      case Tok::dot: case Tok::ddot: case Tok::at: case Tok::star: case Tok::name:
        return true;
      default:
        return false;
    }
  }

  void parse_relative_steps(PathExpr& path, bool leading_separator) {
    bool need_separator = leading_separator;
    while (true) {
      if (need_separator) {
        if (accept(Tok::dslash)) {
          Step dos;
          dos.axis = Axis::descendant_or_self;
          dos.test = TestKind::node;
          path.steps.push_back(std::move(dos));
        } else if (!accept(Tok::slash)) {
          return;
        }
      }
      path.steps.push_back(parse_step());
      need_separator = true;
      if (peek().kind != Tok::slash && peek().kind != Tok::dslash) return;
    }
  }

  static std::optional<Axis> axis_from(std::string_view name) {
    if (name == "child") return Axis::child;
    if (name == "descendant") return Axis::descendant;
    if (name == "descendant-or-self") return Axis::descendant_or_self;
    if (name == "self") return Axis::self;
    if (name == "parent") return Axis::parent;
    if (name == "ancestor") return Axis::ancestor;
    if (name == "ancestor-or-self") return Axis::ancestor_or_self;
    if (name == "following-sibling") return Axis::following_sibling;
    if (name == "preceding-sibling") return Axis::preceding_sibling;
    if (name == "attribute") return Axis::attribute;
    return std::nullopt;
  }

  Step parse_step() {
    Step step;
    if (accept(Tok::dot)) {
      step.axis = Axis::self;
      step.test = TestKind::node;
      return step;
    }
    if (accept(Tok::ddot)) {
      step.axis = Axis::parent;
      step.test = TestKind::node;
      return step;
    }
    if (accept(Tok::at)) {
      step.axis = Axis::attribute;
    } else if (peek().kind == Tok::name && peek(1).kind == Tok::dcolon) {
      auto axis = axis_from(peek().text);
      if (!axis) fail("unsupported axis '" + peek().text + "'");
      step.axis = *axis;
      pos_ += 2;
    }
    if (accept(Tok::star)) {
      step.test = TestKind::any;
    } else if (peek().kind == Tok::name) {
      std::string name = take().text;
      if (peek().kind == Tok::lparen && is_node_type(name)) {
        take();
        expect(Tok::rparen, "')'");
        if (name == "node") step.test = TestKind::node;
        else if (name == "text") step.test = TestKind::text;
        else if (name == "comment") step.test = TestKind::comment;
        else fail("processing-instruction() is not supported");
      } else {
        step.test = TestKind::name;
        for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        step.name = std::move(name);
      }
    } else {
      fail("expected node test");
    }
    while (peek().kind == Tok::lbracket) step.predicates.push_back(parse_predicate());
    return step;
  }

  Predicate parse_predicate() {
    Predicate p;
    p.begin = peek().begin;
    expect(Tok::lbracket, "'['");
    p.expr = parse_or();
    p.end = peek().end;
    expect(Tok::rbracket, "']'");
    return p;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (accept(Tok::lparen)) {
      ExprPtr e = parse_or();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (t.kind == Tok::literal) return std::make_unique<LiteralExpr>(take().text);
    if (t.kind == Tok::number) return std::make_unique<NumberExpr>(std::strtod(take().text.c_str(), nullptr));
    auto fn = std::make_unique<FunctionExpr>();
    fn->name = take().text;
    static const std::vector<std::string_view> known = {
        "position", "last", "true", "false", "not", "boolean", "number", "string",
        "normalize-space", "string-length", "concat", "contains", "starts-with", "ends-with",
        "substring-before", "substring-after", "translate", "count", "sum", "floor", "ceiling",
        "round", "name", "local-name"};
    if (std::find(known.begin(), known.end(), fn->name) == known.end())
      fail("unknown function " + fn->name + "()");
    expect(Tok::lparen, "'('");
    if (!accept(Tok::rparen)) {
      do {
        fn->args.push_back(parse_or());
      } while (accept(Tok::comma));
      expect(Tok::rparen, "')'");
    }
    return fn;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

Expression Expression::compile(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  if (trimmed.empty()) throw Error(Errc::selector_parse, "empty xpath expression");
  Parser parser(text, lex(text));
  ExprPtr root = parser.parse();

  Expression out;
  out.source_ = std::string(text);
  std::function<void(const Expr&)> collect = [&](const Expr& e) {
    if (const auto* p = dynamic_cast<const PathExpr*>(&e)) {
      auto spans = p->trailing_positional();
      out.trailing_positional_.insert(out.trailing_positional_.end(), spans.begin(), spans.end());
    } else if (const auto* u = dynamic_cast<const UnionExpr*>(&e)) {
      for (const auto& b : u->branches) collect(*b);
    }
  };
  collect(*root);
  out.expr_ = std::shared_ptr<const Expr>(std::move(root));
  return out;
}

std::vector<const html::Node*> Expression::select(const html::Node& context,
                                                  const html::Node& root) const {
  Ctx ctx{{&context, -1}, 1, 1, &root};
  Value v = expr_->eval(ctx);
  auto* ns = std::get_if<NodeSet>(&v);
  if (!ns) throw Error(Errc::selector_parse, "xpath '" + source_ + "' does not select nodes");
  std::vector<const html::Node*> out;
  bool scoped = root.type != html::NodeType::document;
  for (const auto& item : *ns) {
    if (item.attr >= 0 || !item.node->is_element()) continue;
    if (scoped && item.node != &root && !root.is_ancestor_of(*item.node)) continue;
    out.push_back(item.node);
  }
  return out;
}

std::string Expression::strip_trailing_positions() const {
  if (trailing_positional_.empty()) return source_;
  auto spans = trailing_positional_;
  std::sort(spans.begin(), spans.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::string out = source_;
  for (const auto& [b, e] : spans) out.erase(b, e - b);
  return out;
}

std::string literal(std::string_view value) {
  if (value.find('\'') == std::string_view::npos) return "'" + std::string(value) + "'";
  if (value.find('"') == std::string_view::npos) return "\"" + std::string(value) + "\"";
  std::string out = "concat(";
  std::size_t start = 0;
  bool first = true;
  while (start <= value.size()) {
    auto q = value.find('\'', start);
    std::string_view part = value.substr(start, q == std::string_view::npos ? std::string_view::npos : q - start);
    if (!part.empty()) {
      if (!first) out += ",";
      out += "'" + std::string(part) + "'";
      first = false;
    }
    if (q == std::string_view::npos) break;
    if (!first) out += ",";
    out += "\"'\"";
    first = false;
    start = q + 1;
  }
  return out + ")";
}

}  // namespace svc::xpath
