#include "svc/selector.hpp"

#include <algorithm>
#include <set>

#include "svc/error.hpp"

namespace svc {

CompiledSelector::CompiledSelector(const Selector& selector) : selector_(selector) {
  if (selector.kind == SelectorKind::css) {
    compiled_ = css::parse(selector.expression);
  } else {
    compiled_ = std::make_shared<const xpath::Expression>(xpath::Expression::compile(selector.expression));
  }
}

std::vector<const html::Node*> CompiledSelector::select(const html::Document& doc) const {
  if (const auto* list = std::get_if<css::SelectorList>(&compiled_))
    return css::select(*list, doc.document_node());
  const auto& expr = *std::get<std::shared_ptr<const xpath::Expression>>(compiled_);
  return expr.select(doc.document_node(), doc.document_node());
}

std::vector<const html::Node*> CompiledSelector::select_in(const html::Node& scope) const {
  if (scope.type == html::NodeType::document) {
    if (const auto* list = std::get_if<css::SelectorList>(&compiled_)) return css::select(*list, scope);
    return std::get<std::shared_ptr<const xpath::Expression>>(compiled_)->select(scope, scope);
  }
  if (const auto* list = std::get_if<css::SelectorList>(&compiled_)) {
    // :scope may match the scope element itself (e.g. the container is the link).
    std::vector<const html::Node*> out;
    if (css::matches(*list, scope, &scope)) {
      for (const auto& cx : list->alternatives) {
        const auto& last = cx.compounds.back();
        bool scope_only = std::any_of(last.pseudos.begin(), last.pseudos.end(), [](const auto& p) {
          return p.kind == css::PseudoClass::Kind::scope;
        });
        if (scope_only) {
          out.push_back(&scope);
          break;
        }
      }
    }
    auto rest = css::select(*list, scope);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  return std::get<std::shared_ptr<const xpath::Expression>>(compiled_)->select(scope, scope);
}

const html::Node* CompiledSelector::first_in(const html::Node& scope) const {
  auto all = select_in(scope);
  return all.empty() ? nullptr : all.front();
}

std::vector<const html::Node*> evaluate(const Selector& selector, const html::Document& doc) {
  return CompiledSelector(selector).select(doc);
}

std::vector<const html::Node*> evaluate(const Selector& selector, const html::Node& scope) {
  return CompiledSelector(selector).select_in(scope);
}

std::string selector_error(const Selector& selector) {
  try {
    CompiledSelector compiled(selector);
    return {};
  } catch (const Error& e) {
    return e.what();
  }
}

const html::Node* resolve(const html::Document& doc, const NodePath& path) {
  const html::Node* node = &doc.root();
  for (std::size_t step : path.steps) {
    auto kids = node->element_children();
    if (step >= kids.size()) return nullptr;
    node = kids[step];
  }
  return node;
}

NodePath path_of(const html::Node& element) {
  NodePath path;
  for (const html::Node* n = &element; n->parent && n->parent->is_element(); n = n->parent)
    path.steps.push_back(n->element_index());
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::string_view to_string(Specificity s) {
  return s == Specificity::unique ? "unique" : "generalized";
}

namespace {

struct Candidate {
  Selector selector;
  Anchor anchor;
};

bool has_unique_id(const html::Document& doc, const html::Node& node) {
  const std::string* id = node.attr("id");
  if (!id || id->empty()) return false;
  Selector probe = Selector::xpath("//*[@id=" + xpath::literal(*id) + "]");
  return evaluate(probe, doc).size() == 1;
}

std::string css_id(const std::string& id) {
  std::string escaped = css::escape_ident(id);
  return "#" + escaped;
}

// "tag:nth-child(k)" steps from `anchor` (exclusive) down to `node`.
std::string css_structural(const html::Node& node, const html::Node* anchor, bool last_positional) {
  std::vector<std::string> parts;
  for (const html::Node* n = &node; n && n != anchor && n->is_element(); n = n->parent_element()) {
    std::string part = n->name;
    bool is_last = n == &node;
    bool root = n->parent && n->parent->type == html::NodeType::document;
    if (!root && (!is_last || last_positional) && n->count_of_type() > 1)
      part += ":nth-child(" + std::to_string(n->element_index() + 1) + ")";
    parts.push_back(part);
  }
  std::reverse(parts.begin(), parts.end());
  std::string out;
  if (anchor) out = css_id(*anchor->attr("id"));
  for (const auto& p : parts) {
    if (!out.empty()) out += " > ";
    out += p;
  }
  return out;
}

// "/html/body/div[2]/ul/li[3]" with positions among same-tag siblings.
std::string xpath_positional(const html::Node& node) {
  std::vector<std::string> parts;
  for (const html::Node* n = &node; n && n->is_element(); n = n->parent_element()) {
    std::string part = n->name;
    if (n->count_of_type() > 1) part += "[" + std::to_string(n->index_of_type()) + "]";
    parts.push_back(part);
  }
  std::reverse(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += "/" + p;
  return out;
}

const html::Node* nearest_id_ancestor(const html::Document& doc, const html::Node& node) {
  for (const html::Node* p = node.parent_element(); p; p = p->parent_element())
    if (has_unique_id(doc, *p)) return p;
  return nullptr;
}

std::vector<Candidate> candidates_for(const html::Document& doc, const html::Node& node,
                                      const SuggestOptions& options) {
  std::vector<Candidate> out;
  auto add_css = [&](std::string expr, Anchor anchor) {
    if (options.include_css) out.push_back({Selector::css(std::move(expr)), anchor});
  };
  auto add_xpath = [&](std::string expr, Anchor anchor) {
    if (options.include_xpath) out.push_back({Selector::xpath(std::move(expr)), anchor});
  };

  if (has_unique_id(doc, node)) {
    const std::string& id = *node.attr("id");
    add_css(css_id(id), Anchor::id);
    add_xpath("//" + node.name + "[@id=" + xpath::literal(id) + "]", Anchor::id);
  }

  const html::Node* anchor = nearest_id_ancestor(doc, node);
  auto classes = node.classes();
  if (anchor) {
    add_css(css_structural(node, anchor, true), Anchor::id);
    add_css(css_structural(node, anchor, false), Anchor::id);
    for (auto cls : classes)
      add_css(css_id(*anchor->attr("id")) + " " + node.name + "." + css::escape_ident(cls), Anchor::id);
  }
  for (auto cls : classes) {
    add_css(node.name + "." + css::escape_ident(cls), Anchor::class_name);
    add_xpath("//" + node.name + "[contains(concat(' ', normalize-space(@class), ' '), " +
                  xpath::literal(" " + std::string(cls) + " ") + ")]",
              Anchor::class_name);
  }
  if (classes.size() > 1) {
    std::string all = node.name;
    for (auto cls : classes) all += "." + css::escape_ident(cls);
    add_css(all, Anchor::class_name);
  }

  add_css(css_structural(node, nullptr, true), Anchor::structure);
  std::string positional = xpath_positional(node);
  add_xpath(positional, Anchor::structure);
  auto general = xpath::Expression::compile(positional).strip_trailing_positions();
  if (general != positional) add_xpath(general, Anchor::structure);
  return out;
}

}  // namespace

std::vector<SelectorSuggestion> suggest_selectors(const html::Document& doc, const NodePath& path,
                                                  const SuggestOptions& options) {
  const html::Node* node = resolve(doc, path);
  if (!node) throw Error(Errc::unresolvable_path, "node path does not resolve in document");

  struct Scored {
    SelectorSuggestion suggestion;
    std::size_t anchor_rank;
  };
  std::vector<Scored> scored;
  std::set<std::pair<SelectorKind, std::string>> seen;
  for (auto& cand : candidates_for(doc, *node, options)) {
    if (!seen.emplace(cand.selector.kind, cand.selector.expression).second) continue;
    std::vector<const html::Node*> matches;
    try {
      matches = evaluate(cand.selector, doc);
    } catch (const Error&) {
      continue;
    }
    if (std::find(matches.begin(), matches.end(), node) == matches.end()) continue;
    SelectorSuggestion s;
    s.match_count = matches.size();
    s.specificity = matches.size() == 1 ? Specificity::unique : Specificity::generalized;
    s.selector = cand.selector;
    s.selector.expect_many = s.specificity == Specificity::generalized;
    auto pref = std::find(options.anchor_preference.begin(), options.anchor_preference.end(), cand.anchor);
    std::size_t anchor_rank = static_cast<std::size_t>(pref - options.anchor_preference.begin());
    scored.push_back({std::move(s), anchor_rank});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.anchor_rank != b.anchor_rank) return a.anchor_rank < b.anchor_rank;
    const auto& ea = a.suggestion.selector.expression;
    const auto& eb = b.suggestion.selector.expression;
    if (ea.size() != eb.size()) return ea.size() < eb.size();
    return ea < eb;
  });
  std::vector<SelectorSuggestion> out;
  out.reserve(scored.size());
  for (auto& s : scored) {
    s.suggestion.rank = static_cast<int>(out.size());
    out.push_back(std::move(s.suggestion));
  }
  return out;
}

Selector generalize(const Selector& selector, const html::Document& doc) {
  std::string widened;
  try {
    if (selector.kind == SelectorKind::css) {
      widened = css::strip_trailing_positions(css::parse(selector.expression));
    } else {
      widened = xpath::Expression::compile(selector.expression).strip_trailing_positions();
    }
  } catch (const Error&) {
    return selector;
  }
  if (widened == selector.expression) return selector;
  Selector out = selector;
  out.expression = widened;
  try {
    auto before = evaluate(selector, doc);
    auto after = evaluate(out, doc);
    std::set<const html::Node*> after_set(after.begin(), after.end());
    for (const auto* n : before)
      if (!after_set.count(n)) return selector;
    out.expect_many = after.size() > 1 || selector.expect_many;
  } catch (const Error&) {
    return selector;
  }
  return out;
}

}  // namespace svc
