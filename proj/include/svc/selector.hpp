#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "svc/css.hpp"
#include "svc/html.hpp"
#include "svc/model.hpp"
#include "svc/xpath.hpp"

namespace svc {

/// A parsed Selector, reusable across documents.
class CompiledSelector {
 public:
  /// Throws Error(Errc::selector_parse).
  explicit CompiledSelector(const Selector& selector);

  const Selector& selector() const { return selector_; }

  /// Matches anywhere in the document, in document order.
  std::vector<const html::Node*> select(const html::Document& doc) const;
  /// Matches inside `scope`'s subtree. XPath absolute paths are rooted at
  /// `scope`, so "//span" and ".//span" mean the same thing here.
  std::vector<const html::Node*> select_in(const html::Node& scope) const;

  /// Same semantics as select_in but returns only the first match.
  const html::Node* first_in(const html::Node& scope) const;

 private:
  Selector selector_;
  std::variant<css::SelectorList, std::shared_ptr<const xpath::Expression>> compiled_;
};

std::vector<const html::Node*> evaluate(const Selector& selector, const html::Document& doc);
std::vector<const html::Node*> evaluate(const Selector& selector, const html::Node& scope);

/// Empty string when the expression parses under its kind's grammar.
std::string selector_error(const Selector& selector);

/// Child-element indices from the root <html> element; empty = the root.
struct NodePath {
  std::vector<std::size_t> steps;
  bool operator==(const NodePath&) const = default;
};

const html::Node* resolve(const html::Document& doc, const NodePath& path);
NodePath path_of(const html::Node& element);

enum class Specificity { unique, generalized };
std::string_view to_string(Specificity s);

struct SelectorSuggestion {
  Selector selector;
  std::size_t match_count = 0;
  Specificity specificity = Specificity::unique;
  int rank = 0;
};

enum class Anchor { id, class_name, structure };

struct SuggestOptions {
  // Earlier anchors rank first; ties fall back to shorter expressions.
  std::vector<Anchor> anchor_preference{Anchor::id, Anchor::class_name, Anchor::structure};
  bool include_css = true;
  bool include_xpath = true;
};

/// Candidate selectors for the node at `path`. Every suggestion matches that
/// node; at least one is unique, and when same-tag siblings exist at least
/// one generalized suggestion matches all of them. Throws
/// Error(Errc::unresolvable_path).
std::vector<SelectorSuggestion> suggest_selectors(const html::Document& doc, const NodePath& path,
                                                  const SuggestOptions& options = {});

/// Drops positional constraints from the final step so the selector also
/// matches structurally similar siblings. Returns the input unchanged when
/// there is nothing to drop or the result would lose an original match.
Selector generalize(const Selector& selector, const html::Document& doc);

}  // namespace svc
