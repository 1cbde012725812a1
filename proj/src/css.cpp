#include "svc/css.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>

#include "svc/error.hpp"

namespace svc::css {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  SelectorList parse_list() {
    SelectorList list;
    list.source = std::string(src_);
    skip_ws();
    if (at_end()) fail("empty selector");
    while (true) {
      list.alternatives.push_back(parse_complex());
      skip_ws();
      if (at_end()) break;
      if (peek() != ',') fail("unexpected character");
      ++pos_;
      skip_ws();
    }
    return list;
  }

  std::vector<Compound> parse_compound_list_until_paren() {
    std::vector<Compound> out;
    skip_ws();
    while (true) {
      out.push_back(parse_compound());
      skip_ws();
      if (!at_end() && peek() == ',') {
        ++pos_;
        skip_ws();
        continue;
      }
      break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::selector_parse, "css selector '" + std::string(src_) + "': " + what +
                                          " at offset " + std::to_string(pos_));
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  void skip_ws() {
    while (!at_end() && is_ws(peek())) ++pos_;
  }

  std::optional<Combinator> read_combinator() {
    if (at_end()) return std::nullopt;
    switch (peek()) {
      case '>': ++pos_; return Combinator::child;
      case '+': ++pos_; return Combinator::adjacent;
      case '~': ++pos_; return Combinator::sibling;
      default: return std::nullopt;
    }
  }

  Complex parse_complex() {
    Complex cx;
    // A leading combinator means the selector is relative to :scope.
    if (auto lead = read_combinator()) {
      Compound scope;
      PseudoClass pc;
      pc.kind = PseudoClass::Kind::scope;
      scope.pseudos.push_back(pc);
      cx.compounds.push_back(scope);
      cx.combinators.push_back(*lead);
      skip_ws();
    }
    cx.compounds.push_back(parse_compound());
    while (true) {
      std::size_t before = pos_;
      skip_ws();
      bool had_ws = pos_ > before;
      if (at_end() || peek() == ',' || peek() == ')') {
        pos_ = at_end() || peek() == ',' ? pos_ : before;
        break;
      }
      auto comb = read_combinator();
      if (comb) {
        skip_ws();
      } else if (had_ws) {
        comb = Combinator::descendant;
      } else {
        fail("expected combinator");
      }
      cx.combinators.push_back(*comb);
      cx.compounds.push_back(parse_compound());
    }
    return cx;
  }

  std::string parse_ident() {
    std::string out;
    if (!at_end() && peek() == '-') {
      out += '-';
      ++pos_;
      if (!at_end() && peek() == '-') {
        out += '-';
        ++pos_;
      }
    }
    bool first = true;
    while (!at_end()) {
      char c = peek();
      if (c == '\\') {
        read_escape(out);
      } else if (first && out.empty() ? is_name_start(c) : is_name_char(c)) {
        out += c;
        ++pos_;
      } else {
        break;
      }
      first = false;
    }
    if (out.empty() || out == "-") fail("expected identifier");
    return out;
  }

  void read_escape(std::string& out) {
    ++pos_;  // backslash
    if (at_end()) fail("dangling escape");
    std::size_t start = pos_;
    while (!at_end() && pos_ - start < 6 && std::isxdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ > start) {
      auto cp = static_cast<std::uint32_t>(std::stoul(std::string(src_.substr(start, pos_ - start)), nullptr, 16));
      append_utf8(out, cp);
      if (!at_end() && is_ws(peek())) ++pos_;
    } else {
      out += peek();
      ++pos_;
    }
  }

  std::string parse_string() {
    char quote = peek();
    ++pos_;
    std::string out;
    while (!at_end() && peek() != quote) {
      if (peek() == '\\') {
        read_escape(out);
      } else {
        out += peek();
        ++pos_;
      }
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return out;
  }

  Compound parse_compound() {
    Compound cp;
    cp.begin = pos_;
    bool any = false;
    if (!at_end() && peek() == '*') {
      ++pos_;
      any = true;
    } else if (!at_end() && (is_name_start(peek()) || peek() == '-' || peek() == '\\')) {
      cp.tag = lower(parse_ident());
      any = true;
    }
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        ++pos_;
        cp.ids.push_back(parse_ident());
      } else if (c == '.') {
        ++pos_;
        cp.classes.push_back(parse_ident());
      } else if (c == '[') {
        cp.attributes.push_back(parse_attribute());
      } else if (c == ':') {
        cp.pseudos.push_back(parse_pseudo());
      } else {
        break;
      }
      any = true;
    }
    if (!any) fail("expected simple selector");
    cp.end = pos_;
    return cp;
  }

  AttributeTest parse_attribute() {
    ++pos_;  // [
    skip_ws();
    AttributeTest at;
    at.name = lower(parse_ident());
    skip_ws();
    if (at_end()) fail("unterminated attribute selector");
    if (peek() == ']') {
      ++pos_;
      return at;
    }
    using Op = AttributeTest::Op;
    char c = peek();
    if (c == '=') {
      at.op = Op::equals;
      ++pos_;
    } else {
      if (pos_ + 1 >= src_.size() || src_[pos_ + 1] != '=') fail("bad attribute operator");
      switch (c) {
        case '~': at.op = Op::includes; break;
        case '|': at.op = Op::dash_match; break;
        case '^': at.op = Op::prefix; break;
        case '$': at.op = Op::suffix; break;
        case '*': at.op = Op::substring; break;
        default: fail("bad attribute operator");
      }
      pos_ += 2;
    }
    skip_ws();
    if (at_end()) fail("missing attribute value");
    if (peek() == '"' || peek() == '\'') {
      at.value = parse_string();
    } else {
      at.value = parse_ident();
    }
    skip_ws();
    if (!at_end() && (peek() == 'i' || peek() == 'I')) {
      at.case_insensitive = true;
      ++pos_;
      skip_ws();
    } else if (!at_end() && (peek() == 's' || peek() == 'S')) {
      ++pos_;
      skip_ws();
    }
    if (at_end() || peek() != ']') fail("expected ']'");
    ++pos_;
    return at;
  }

  void parse_nth(PseudoClass& pc) {
    skip_ws();
    std::size_t close = src_.find(')', pos_);
    if (close == std::string_view::npos) fail("unterminated nth expression");
    std::string expr;
    for (char c : src_.substr(pos_, close - pos_))
      if (!is_ws(c)) expr += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    pos_ = close + 1;
    if (expr == "odd") {
      pc.a = 2;
      pc.b = 1;
      return;
    }
    if (expr == "even") {
      pc.a = 2;
      pc.b = 0;
      return;
    }
    auto parse_int = [&](std::string_view s, long& out) {
      if (s.empty()) return false;
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i >= s.size()) return false;
      long v = 0;
      for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
      }
      out = neg ? -v : v;
      return true;
    };
    auto n = expr.find('n');
    if (n == std::string::npos) {
      pc.a = 0;
      if (!parse_int(expr, pc.b)) fail("bad nth expression");
      return;
    }
    std::string_view coef = std::string_view(expr).substr(0, n);
    if (coef.empty() || coef == "+") {
      pc.a = 1;
    } else if (coef == "-") {
      pc.a = -1;
    } else if (!parse_int(coef, pc.a)) {
      fail("bad nth expression");
    }
    std::string_view rest = std::string_view(expr).substr(n + 1);
    pc.b = 0;
    if (!rest.empty() && !parse_int(rest, pc.b)) fail("bad nth expression");
  }

  PseudoClass parse_pseudo() {
    using K = PseudoClass::Kind;
    PseudoClass pc;
    pc.begin = pos_;
    ++pos_;  // :
    if (!at_end() && peek() == ':') fail("pseudo-elements are not supported");
    std::string name = lower(parse_ident());
    bool takes_arg = !at_end() && peek() == '(';
    if (takes_arg) ++pos_;
    if (name == "first-child") pc.kind = K::first_child;
    else if (name == "last-child") pc.kind = K::last_child;
    else if (name == "only-child") pc.kind = K::only_child;
    else if (name == "first-of-type") pc.kind = K::first_of_type;
    else if (name == "last-of-type") pc.kind = K::last_of_type;
    else if (name == "only-of-type") pc.kind = K::only_of_type;
    else if (name == "empty") pc.kind = K::empty;
    else if (name == "root") pc.kind = K::root;
    else if (name == "scope") pc.kind = K::scope;
    else if (name == "checked") pc.kind = K::checked;
    else if (name == "disabled") pc.kind = K::disabled;
    else if (name == "nth-child") pc.kind = K::nth_child;
    else if (name == "nth-last-child") pc.kind = K::nth_last_child;
    else if (name == "nth-of-type") pc.kind = K::nth_of_type;
    else if (name == "nth-last-of-type") pc.kind = K::nth_last_of_type;
    else if (name == "not") pc.kind = K::negation;
    else fail("unsupported pseudo-class :" + name);

    bool needs_arg = pc.kind == K::nth_child || pc.kind == K::nth_last_child ||
                     pc.kind == K::nth_of_type || pc.kind == K::nth_last_of_type ||
                     pc.kind == K::negation;
    if (needs_arg != takes_arg) fail(":" + name + (needs_arg ? " requires" : " takes no") + " argument");
    if (pc.kind == K::negation) {
      pc.negated = parse_compound_list_until_paren();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
    } else if (needs_arg) {
      parse_nth(pc);
    }
    pc.end = pos_;
    return pc;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

bool nth_matches(long a, long b, long position) {
  if (a == 0) return position == b;
  long diff = position - b;
  return diff % a == 0 && diff / a >= 0;
}

bool contains_word(std::string_view hay, std::string_view word) {
  if (word.empty() || word.find_first_of(" \t\n\r\f") != std::string_view::npos) return false;
  std::size_t i = 0;
  while (i < hay.size()) {
    while (i < hay.size() && is_ws(hay[i])) ++i;
    std::size_t j = i;
    while (j < hay.size() && !is_ws(hay[j])) ++j;
    if (hay.substr(i, j - i) == word) return true;
    i = j;
  }
  return false;
}

bool attribute_matches(const AttributeTest& t, const html::Node& el) {
  const std::string* v = el.attr(t.name);
  if (!v) return false;
  using Op = AttributeTest::Op;
  std::string value = t.case_insensitive ? lower(*v) : *v;
  std::string want = t.case_insensitive ? lower(t.value) : t.value;
  switch (t.op) {
    case Op::exists: return true;
    case Op::equals: return value == want;
    case Op::includes: return contains_word(value, want);
    case Op::dash_match: return value == want || value.starts_with(want + "-");
    case Op::prefix: return !want.empty() && value.starts_with(want);
    case Op::suffix: return !want.empty() && value.ends_with(want);
    case Op::substring: return !want.empty() && value.find(want) != std::string::npos;
  }
  return false;
}

bool compound_matches(const Compound& cp, const html::Node& el, const html::Node* scope);

bool pseudo_matches(const PseudoClass& pc, const html::Node& el, const html::Node* scope) {
  using K = PseudoClass::Kind;
  const html::Node* parent = el.parent;
  auto siblings = [&]() {
    return parent ? parent->element_children() : std::vector<const html::Node*>{&el};
  };
  switch (pc.kind) {
    case K::first_child: return el.element_index() == 0;
    case K::last_child: {
      auto sib = siblings();
      return !sib.empty() && sib.back() == &el;
    }
    case K::only_child: return siblings().size() == 1;
    case K::nth_child: return nth_matches(pc.a, pc.b, static_cast<long>(el.element_index()) + 1);
    case K::nth_last_child: {
      long count = static_cast<long>(siblings().size());
      return nth_matches(pc.a, pc.b, count - static_cast<long>(el.element_index()));
    }
    case K::first_of_type: return el.index_of_type() == 1;
    case K::last_of_type: return el.index_of_type() == el.count_of_type();
    case K::only_of_type: return el.count_of_type() == 1;
    case K::nth_of_type: return nth_matches(pc.a, pc.b, static_cast<long>(el.index_of_type()));
    case K::nth_last_of_type:
      return nth_matches(pc.a, pc.b,
                         static_cast<long>(el.count_of_type() - el.index_of_type() + 1));
    case K::empty:
      return std::none_of(el.children.begin(), el.children.end(), [](const auto& c) {
        return c->is_element() || (c->type == html::NodeType::text && !c->data.empty());
      });
    case K::root: return parent && parent->type == html::NodeType::document;
    case K::scope:
      if (scope && scope->is_element()) return &el == scope;
      return parent && parent->type == html::NodeType::document;
    case K::checked: return el.has_attr("checked") || el.has_attr("selected");
    case K::disabled: return el.has_attr("disabled");
    case K::negation:
      return std::none_of(pc.negated.begin(), pc.negated.end(),
                          [&](const Compound& c) { return compound_matches(c, el, scope); });
  }
  return false;
}

bool compound_matches(const Compound& cp, const html::Node& el, const html::Node* scope) {
  if (!el.is_element()) return false;
  if (!cp.tag.empty() && cp.tag != el.name) return false;
  for (const auto& id : cp.ids) {
    const std::string* v = el.attr("id");
    if (!v || *v != id) return false;
  }
  for (const auto& cls : cp.classes)
    if (!el.has_class(cls)) return false;
  for (const auto& at : cp.attributes)
    if (!attribute_matches(at, el)) return false;
  for (const auto& pc : cp.pseudos)
    if (!pseudo_matches(pc, el, scope)) return false;
  return true;
}

const html::Node* previous_element(const html::Node& el) {
  if (!el.parent) return nullptr;
  const html::Node* prev = nullptr;
  for (const auto& c : el.parent->children) {
    if (c.get() == &el) return prev;
    if (c->is_element()) prev = c.get();
  }
  return nullptr;
}

// Matches compounds[0..=index] with compounds[index] anchored at `el`.
bool complex_matches_at(const Complex& cx, std::size_t index, const html::Node& el,
                        const html::Node* scope) {
  if (!compound_matches(cx.compounds[index], el, scope)) return false;
  if (index == 0) return true;
  Combinator comb = cx.combinators[index - 1];
  switch (comb) {
    case Combinator::child: {
      const html::Node* p = el.parent_element();
      return p && complex_matches_at(cx, index - 1, *p, scope);
    }
    case Combinator::descendant:
      for (const html::Node* p = el.parent_element(); p; p = p->parent_element())
        if (complex_matches_at(cx, index - 1, *p, scope)) return true;
      return false;
    case Combinator::adjacent: {
      const html::Node* prev = previous_element(el);
      return prev && complex_matches_at(cx, index - 1, *prev, scope);
    }
    case Combinator::sibling:
      for (const html::Node* prev = previous_element(el); prev; prev = previous_element(*prev))
        if (complex_matches_at(cx, index - 1, *prev, scope)) return true;
      return false;
  }
  return false;
}

void collect(const SelectorList& list, const html::Node& node, const html::Node* scope,
             std::vector<const html::Node*>& out) {
  for (const auto& child : node.children) {
    if (!child->is_element()) continue;
    if (matches(list, *child, scope)) out.push_back(child.get());
    collect(list, *child, scope, out);
  }
}

}  // namespace

bool PseudoClass::positional() const {
  switch (kind) {
    case Kind::first_child:
    case Kind::last_child:
    case Kind::only_child:
    case Kind::nth_child:
    case Kind::nth_last_child:
    case Kind::first_of_type:
    case Kind::last_of_type:
    case Kind::only_of_type:
    case Kind::nth_of_type:
    case Kind::nth_last_of_type:
      return true;
    default:
      return false;
  }
}

SelectorList parse(std::string_view text) { return Parser(text).parse_list(); }

bool matches(const SelectorList& list, const html::Node& element, const html::Node* scope) {
  for (const auto& cx : list.alternatives)
    if (complex_matches_at(cx, cx.compounds.size() - 1, element, scope)) return true;
  return false;
}

std::vector<const html::Node*> select(const SelectorList& list, const html::Node& scope) {
  std::vector<const html::Node*> out;
  collect(list, scope, &scope, out);
  return out;
}

std::string strip_trailing_positions(const SelectorList& list) {
  struct Cut {
    std::size_t begin, end;
    bool leaves_empty;
    std::size_t compound_begin;
  };
  std::vector<Cut> cuts;
  for (const auto& cx : list.alternatives) {
    const Compound& last = cx.compounds.back();
    if (last.begin == last.end) continue;  // implicit :scope
    bool all_positional = last.tag.empty() && last.ids.empty() && last.classes.empty() &&
                          last.attributes.empty();
    std::size_t positional = 0;
    for (const auto& pc : last.pseudos) {
      if (pc.positional()) {
        ++positional;
      } else {
        all_positional = false;
      }
    }
    if (positional == 0) continue;
    bool star = last.begin < list.source.size() && list.source[last.begin] == '*';
    for (const auto& pc : last.pseudos) {
      if (pc.positional())
        cuts.push_back({pc.begin, pc.end, all_positional && !star, last.begin});
    }
  }
  if (cuts.empty()) return list.source;
  std::string out = list.source;
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.begin > b.begin; });
  std::vector<std::size_t> star_at;
  for (const auto& cut : cuts) {
    out.erase(cut.begin, cut.end - cut.begin);
    if (cut.leaves_empty &&
        std::find(star_at.begin(), star_at.end(), cut.compound_begin) == star_at.end())
      star_at.push_back(cut.compound_begin);
  }
  // Offsets of compound starts are unaffected by later cuts (all cuts are at
  // or after the compound start), so insert from the back.
  std::sort(star_at.rbegin(), star_at.rend());
  for (auto pos : star_at) out.insert(pos, "*");
  return out;
}

std::string escape_ident(std::string_view ident) {
  std::string out;
  for (std::size_t i = 0; i < ident.size(); ++i) {
    char c = ident[i];
    auto u = static_cast<unsigned char>(c);
    bool ok = std::isalpha(u) || c == '_' || u >= 0x80 || (i > 0 && (std::isdigit(u) || c == '-')) ||
              (i == 0 && c == '-' && ident.size() > 1 && !std::isdigit(static_cast<unsigned char>(ident[1])));
    if (ok) {
      out += c;
    } else if (std::isdigit(u)) {
      static constexpr char kHex[] = "0123456789abcdef";
      out += '\\';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
      out += ' ';
    } else {
      out += '\\';
      out += c;
    }
  }
  return out;
}

std::string quote_string(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\a ";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace svc::css
