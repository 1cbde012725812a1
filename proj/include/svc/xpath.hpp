#pragma once

// XPath 1.0 subset over html::Node trees: location paths on the child,
// descendant(-or-self), self, parent, ancestor(-or-self), sibling and
// attribute axes; predicates with positional, comparison, boolean and
// string functions; unions and parenthesized filter expressions.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "svc/html.hpp"

namespace svc::xpath {

namespace detail {
struct Expr;
}

class Expression {
 public:
  /// Throws svc::Error(Errc::selector_parse).
  static Expression compile(std::string_view text);

  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  ~Expression();

  /// Elements selected with `context` as the context node. Absolute paths
  /// start at `root`, which is the document node for document-wide
  /// evaluation or the scope element for scoped evaluation.
  std::vector<const html::Node*> select(const html::Node& context, const html::Node& root) const;

  const std::string& source() const { return source_; }

  /// Source text with positional predicates removed from the final step of
  /// each union branch.
  std::string strip_trailing_positions() const;

 private:
  Expression() = default;

  std::string source_;
  std::shared_ptr<const detail::Expr> expr_;
  std::vector<std::pair<std::size_t, std::size_t>> trailing_positional_;  // [begin,end) spans
};

/// Quotes a string as an XPath literal, using concat() when it contains both
/// quote characters.
std::string literal(std::string_view value);

}  // namespace svc::xpath
