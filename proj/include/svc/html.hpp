#pragma once

// A forgiving HTML parser producing an immutable element tree. It covers what
// search result pages need: implied end tags for p/li/tr/td/option, void and
// raw-text elements, character references, and a guaranteed single <html>
// root even for fragments.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svc::html {

enum class NodeType { document, element, text, comment, doctype };

class Node {
 public:
  using Attribute = std::pair<std::string, std::string>;

  NodeType type = NodeType::element;
  std::string name;  // lowercase tag name for elements
  std::vector<Attribute> attributes;
  std::string data;  // decoded text for text/comment/doctype nodes
  Node* parent = nullptr;
  std::vector<std::unique_ptr<Node>> children;
  std::size_t order = 0;  // pre-order position in the document

  bool is_element() const { return type == NodeType::element; }
  bool is_element(std::string_view tag) const { return is_element() && name == tag; }

  const std::string* attr(std::string_view attr_name) const;
  bool has_attr(std::string_view attr_name) const { return attr(attr_name) != nullptr; }
  std::vector<std::string_view> classes() const;
  bool has_class(std::string_view cls) const;

  const Node* parent_element() const;
  std::vector<const Node*> element_children() const;
  /// Position among the parent's element children (0-based).
  std::size_t element_index() const;
  /// 1-based position among same-tag element siblings.
  std::size_t index_of_type() const;
  std::size_t count_of_type() const;
  bool is_ancestor_of(const Node& other) const;
};

class Document {
 public:
  static Document parse(std::string_view source, std::string base_url = {});

  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;
  Document(const Document&) = delete;
  Document& operator=(const Document&) = delete;

  const Node& document_node() const { return *doc_; }
  /// The single <html> element (synthesized for fragments).
  const Node& root() const;
  /// The effective base URL: the fetch URL adjusted by any <base href>.
  const std::string& base_url() const { return base_url_; }
  bool empty() const;

  /// Removes script elements, on* event attributes and javascript: URLs.
  void sanitize();

 private:
  Document() = default;
  void renumber();

  std::unique_ptr<Node> doc_;
  std::string base_url_;
};

using DocumentHandle = std::shared_ptr<const Document>;

DocumentHandle make_handle(std::string_view source, std::string base_url = {});

/// Concatenated descendant text; script/style content excluded.
std::string text_content(const Node& node);
std::string inner_html(const Node& node);
std::string outer_html(const Node& node);
std::string serialize(const Document& doc);

/// Decodes character references in `text`. `in_attribute` enables the
/// attribute-value rules for legacy references without a trailing ';'.
std::string decode_entities(std::string_view text, bool in_attribute = false);
std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);

/// Parses, sanitizes and re-serializes.
std::string sanitize_html(std::string_view source);

bool is_void_element(std::string_view tag);

}  // namespace svc::html
