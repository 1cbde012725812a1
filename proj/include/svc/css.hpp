#pragma once

// CSS level-3 selector subset: type/universal, #id, .class, attribute tests
// (= ~= |= ^= $= *=, optional " i" flag), structural pseudo-classes, :not(),
// :empty, :root, :scope, :checked, :disabled, and the four combinators.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "svc/html.hpp"

namespace svc::css {

struct AttributeTest {
  enum class Op { exists, equals, includes, dash_match, prefix, suffix, substring };
  std::string name;
  Op op = Op::exists;
  std::string value;
  bool case_insensitive = false;
};

struct Compound;

struct PseudoClass {
  enum class Kind {
    first_child, last_child, only_child, nth_child, nth_last_child,
    first_of_type, last_of_type, only_of_type, nth_of_type, nth_last_of_type,
    empty, root, scope, checked, disabled, negation,
  };
  Kind kind = Kind::root;
  long a = 0;  // an+b coefficients for the nth-* kinds
  long b = 0;
  std::vector<Compound> negated;
  std::size_t begin = 0;  // source span, used by generalization
  std::size_t end = 0;

  bool positional() const;
};

struct Compound {
  std::string tag;  // empty means universal
  std::vector<std::string> ids;
  std::vector<std::string> classes;
  std::vector<AttributeTest> attributes;
  std::vector<PseudoClass> pseudos;
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class Combinator { descendant, child, adjacent, sibling };

struct Complex {
  std::vector<Compound> compounds;
  std::vector<Combinator> combinators;  // combinators[i] joins compounds[i] and [i+1]
};

struct SelectorList {
  std::string source;
  std::vector<Complex> alternatives;
};

/// Throws svc::Error(Errc::selector_parse).
SelectorList parse(std::string_view text);

bool matches(const SelectorList& list, const html::Node& element, const html::Node* scope);

/// Matching descendants of `scope` in document order (querySelectorAll).
std::vector<const html::Node*> select(const SelectorList& list, const html::Node& scope);

/// Removes positional pseudo-classes from the last compound of every
/// alternative. Returns the input text when nothing is positional.
std::string strip_trailing_positions(const SelectorList& list);

/// Serializes `ident` as a CSS identifier, escaping as required.
std::string escape_ident(std::string_view ident);
std::string quote_string(std::string_view value);

}  // namespace svc::css
