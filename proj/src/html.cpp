#include "svc/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_map>

#include "svc/url.hpp"

namespace svc::html {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = lower(c);
  return out;
}

bool iequals_prefix(std::string_view hay, std::size_t pos, std::string_view needle) {
  if (pos + needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i < needle.size(); ++i)
    if (lower(hay[pos + i]) != needle[i]) return false;
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
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

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> table = {
      {"amp", '&'},       {"lt", '<'},         {"gt", '>'},        {"quot", '"'},
      {"apos", '\''},     {"nbsp", 0xA0},      {"copy", 0xA9},     {"reg", 0xAE},
      {"trade", 0x2122},  {"hellip", 0x2026},  {"mdash", 0x2014},  {"ndash", 0x2013},
      {"laquo", 0xAB},    {"raquo", 0xBB},     {"lsquo", 0x2018},  {"rsquo", 0x2019},
      {"ldquo", 0x201C},  {"rdquo", 0x201D},   {"bull", 0x2022},   {"middot", 0xB7},
      {"times", 0xD7},    {"divide", 0xF7},    {"deg", 0xB0},      {"euro", 0x20AC},
      {"pound", 0xA3},    {"yen", 0xA5},       {"cent", 0xA2},     {"sect", 0xA7},
      {"para", 0xB6},     {"iexcl", 0xA1},     {"iquest", 0xBF},   {"shy", 0xAD},
      {"aacute", 0xE1},   {"eacute", 0xE9},    {"iacute", 0xED},   {"oacute", 0xF3},
      {"uacute", 0xFA},   {"Aacute", 0xC1},    {"Eacute", 0xC9},   {"Iacute", 0xCD},
      {"Oacute", 0xD3},   {"Uacute", 0xDA},    {"agrave", 0xE0},   {"egrave", 0xE8},
      {"igrave", 0xEC},   {"ograve", 0xF2},    {"ugrave", 0xF9},   {"acirc", 0xE2},
      {"ecirc", 0xEA},    {"icirc", 0xEE},     {"ocirc", 0xF4},    {"ucirc", 0xFB},
      {"auml", 0xE4},     {"euml", 0xEB},      {"iuml", 0xEF},     {"ouml", 0xF6},
      {"uuml", 0xFC},     {"Auml", 0xC4},      {"Ouml", 0xD6},     {"Uuml", 0xDC},
      {"ntilde", 0xF1},   {"Ntilde", 0xD1},    {"ccedil", 0xE7},   {"Ccedil", 0xC7},
      {"atilde", 0xE3},   {"otilde", 0xF5},    {"szlig", 0xDF},    {"oslash", 0xF8},
      {"aring", 0xE5},    {"aelig", 0xE6},     {"ordm", 0xBA},     {"ordf", 0xAA},
      {"larr", 0x2190},   {"rarr", 0x2192},    {"uarr", 0x2191},   {"darr", 0x2193},
      {"star", 0x2606},   {"hearts", 0x2665},  {"thinsp", 0x2009}, {"ensp", 0x2002},
      {"emsp", 0x2003},   {"zwnj", 0x200C},    {"zwj", 0x200D},    {"lrm", 0x200E},
      {"rlm", 0x200F},    {"frac12", 0xBD},    {"frac14", 0xBC},   {"frac34", 0xBE},
      {"plusmn", 0xB1},   {"micro", 0xB5},     {"prime", 0x2032},  {"Prime", 0x2033},
  };
  return table;
}

// Legacy references that browsers accept without a trailing ';'.
bool is_legacy_entity(std::string_view name) {
  return name == "amp" || name == "lt" || name == "gt" || name == "quot" || name == "nbsp" ||
         name == "copy" || name == "reg";
}

constexpr std::array kVoidElements = {"area", "base",  "br",    "col",  "embed",
                                      "hr",   "img",   "input", "link", "meta",
                                      "param", "source", "track", "wbr", "keygen"};

bool is_raw_text(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "xmp" || tag == "iframe" ||
         tag == "noembed" || tag == "noframes";
}

bool is_rcdata(std::string_view tag) { return tag == "textarea" || tag == "title"; }

bool closes_paragraph(std::string_view tag) {
  static constexpr std::array kTags = {
      "address", "article", "aside", "blockquote", "details", "dialog", "dir",   "div",
      "dl",      "fieldset", "figcaption", "figure", "footer", "form",  "h1",    "h2",
      "h3",      "h4",      "h5",    "h6",     "header",  "hgroup", "hr",   "main",
      "menu",    "nav",     "ol",    "p",      "pre",     "section", "table", "ul", "li",
      "dd",      "dt"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

bool is_scope_boundary(std::string_view tag) {
  return tag == "html" || tag == "table" || tag == "td" || tag == "th" || tag == "caption" ||
         tag == "marquee" || tag == "object" || tag == "applet" || tag == "template" ||
         tag == "button";
}

class TreeBuilder {
 public:
  explicit TreeBuilder(Node& document) { stack_.push_back(&document); }

  void start_tag(std::string name, std::vector<Node::Attribute> attrs, bool self_closing) {
    if (name == "html") {
      // A second <html> merges attributes instead of nesting.
      for (Node* n : stack_) {
        if (n->is_element("html")) {
          merge_attributes(*n, attrs);
          return;
        }
      }
    }
    if (name == "image") name = "img";
    apply_implied_end_tags(name);

    auto node = std::make_unique<Node>();
    node->type = NodeType::element;
    node->name = std::move(name);
    node->attributes = std::move(attrs);
    Node* raw = append(std::move(node));

    bool in_foreign = std::any_of(stack_.begin(), stack_.end(), [](const Node* n) {
      return n->is_element("svg") || n->is_element("math");
    });
    bool is_foreign_root = raw->name == "svg" || raw->name == "math";
    if (is_void_element(raw->name) || (self_closing && (in_foreign || is_foreign_root))) return;
    stack_.push_back(raw);
  }

  void end_tag(std::string_view name) {
    if (name == "br") {
      start_tag("br", {}, false);
      return;
    }
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->is_element(name)) {
        stack_.resize(i);
        return;
      }
      // Do not let a stray end tag escape a table cell or similar boundary.
      bool table_part = name == "table" || name == "td" || name == "th" || name == "tr" ||
                        name == "tbody" || name == "thead" || name == "tfoot" ||
                        name == "caption" || name == "button";
      if (is_scope_boundary(stack_[i]->name) && !table_part) {
        return;
      }
    }
  }

  void text(std::string data) {
    if (data.empty()) return;
    Node* top = stack_.back();
    if (!top->children.empty() && top->children.back()->type == NodeType::text) {
      top->children.back()->data += data;
      return;
    }
    auto node = std::make_unique<Node>();
    node->type = NodeType::text;
    node->data = std::move(data);
    append(std::move(node));
  }

  void comment(std::string data) {
    auto node = std::make_unique<Node>();
    node->type = NodeType::comment;
    node->data = std::move(data);
    append(std::move(node));
  }

  void doctype(std::string data) {
    auto node = std::make_unique<Node>();
    node->type = NodeType::doctype;
    node->data = std::move(data);
    append(std::move(node));
  }

 private:
  Node* append(std::unique_ptr<Node> node) {
    Node* top = stack_.back();
    node->parent = top;
    top->children.push_back(std::move(node));
    return top->children.back().get();
  }

  static void merge_attributes(Node& node, const std::vector<Node::Attribute>& attrs) {
    for (const auto& a : attrs)
      if (!node.has_attr(a.first)) node.attributes.push_back(a);
  }

  // Pops up to and including the nearest open element named one of `targets`,
  // searching no further than an element named in `stop_at` or a scope boundary.
  void close_if_open(std::initializer_list<std::string_view> targets,
                     std::initializer_list<std::string_view> stop_at) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const auto& name = stack_[i]->name;
      if (std::find(targets.begin(), targets.end(), name) != targets.end()) {
        stack_.resize(i);
        return;
      }
      if (std::find(stop_at.begin(), stop_at.end(), name) != stop_at.end() ||
          is_scope_boundary(name)) {
        return;
      }
    }
  }

  void apply_implied_end_tags(std::string_view name) {
    if (closes_paragraph(name)) close_if_open({"p"}, {});
    if (name == "li") close_if_open({"li"}, {"ul", "ol", "menu"});
    if (name == "dt" || name == "dd") close_if_open({"dt", "dd"}, {"dl"});
    if (name == "option") close_if_open({"option"}, {"select", "datalist", "optgroup"});
    if (name == "optgroup") close_if_open({"option", "optgroup"}, {"select"});
    if (name == "tr") close_if_open({"tr"}, {"thead", "tbody", "tfoot"});
    if (name == "td" || name == "th") close_if_open({"td", "th"}, {"tr"});
    if (name == "thead" || name == "tbody" || name == "tfoot")
      close_if_open({"thead", "tbody", "tfoot"}, {});
    if (name == "a") close_if_open({"a"}, {});
    if (name == "body" || name == "head") close_if_open({"head"}, {});
  }

  std::vector<Node*> stack_;
};

class Tokenizer {
 public:
  Tokenizer(std::string_view src, TreeBuilder& builder) : src_(src), builder_(builder) {}

  void run() {
    std::string text;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '<' && pos_ + 1 < src_.size()) {
        char n = src_[pos_ + 1];
        bool tag_like = std::isalpha(static_cast<unsigned char>(n)) || n == '/' || n == '!' ||
                        n == '?';
        if (tag_like) {
          flush_text(text);
          markup();
          continue;
        }
      }
      text += c;
      ++pos_;
    }
    flush_text(text);
  }

 private:
  void flush_text(std::string& text) {
    if (!text.empty()) builder_.text(decode_entities(text));
    text.clear();
  }

  void markup() {
    if (src_.compare(pos_, 4, "<!--") == 0) {
      auto end = src_.find("-->", pos_ + 4);
      std::size_t stop = end == std::string_view::npos ? src_.size() : end;
      builder_.comment(std::string(src_.substr(pos_ + 4, stop - pos_ - 4)));
      pos_ = end == std::string_view::npos ? src_.size() : end + 3;
      return;
    }
    if (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?') {
      auto end = src_.find('>', pos_);
      std::size_t stop = end == std::string_view::npos ? src_.size() : end;
      std::string body(src_.substr(pos_ + 2, stop - pos_ - 2));
      if (iequals_prefix(src_, pos_ + 2, "doctype")) {
        std::string rest = body.substr(7);
        auto first = rest.find_first_not_of(" \t\r\n");
        builder_.doctype(first == std::string::npos ? "" : rest.substr(first));
      } else if (src_.compare(pos_, 9, "<![CDATA[") == 0) {
        auto cend = src_.find("]]>", pos_);
        std::size_t cstop = cend == std::string_view::npos ? src_.size() : cend;
        builder_.text(std::string(src_.substr(pos_ + 9, cstop - pos_ - 9)));
        pos_ = cend == std::string_view::npos ? src_.size() : cend + 3;
        return;
      } else {
        builder_.comment(body);
      }
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      return;
    }
    if (src_[pos_ + 1] == '/') {
      std::size_t p = pos_ + 2;
      if (p >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[p]))) {
        // "</>" or "</ x": bogus, skip to '>'
        auto end = src_.find('>', pos_);
        pos_ = end == std::string_view::npos ? src_.size() : end + 1;
        return;
      }
      std::size_t start = p;
      while (p < src_.size() && !is_space(src_[p]) && src_[p] != '>' && src_[p] != '/') ++p;
      std::string name = lowercase(src_.substr(start, p - start));
      auto end = src_.find('>', p);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      builder_.end_tag(name);
      return;
    }
    start_tag();
  }

  void start_tag() {
    std::size_t p = pos_ + 1;
    std::size_t start = p;
    while (p < src_.size() && !is_space(src_[p]) && src_[p] != '>' && src_[p] != '/') ++p;
    std::string name = lowercase(src_.substr(start, p - start));
    std::vector<Node::Attribute> attrs;
    bool self_closing = false;
    while (p < src_.size()) {
      while (p < src_.size() && is_space(src_[p])) ++p;
      if (p >= src_.size()) break;
      if (src_[p] == '>') {
        ++p;
        break;
      }
      if (src_[p] == '/') {
        ++p;
        if (p < src_.size() && src_[p] == '>') {
          self_closing = true;
          ++p;
          break;
        }
        continue;
      }
      std::size_t astart = p;
      ++p;  // an attribute name may begin with '='
      while (p < src_.size() && !is_space(src_[p]) && src_[p] != '=' && src_[p] != '>' &&
             src_[p] != '/')
        ++p;
      std::string aname = lowercase(src_.substr(astart, p - astart));
      std::size_t q = p;
      while (q < src_.size() && is_space(src_[q])) ++q;
      std::string value;
      if (q < src_.size() && src_[q] == '=') {
        ++q;
        while (q < src_.size() && is_space(src_[q])) ++q;
        if (q < src_.size() && (src_[q] == '"' || src_[q] == '\'')) {
          char quote = src_[q];
          auto close = src_.find(quote, q + 1);
          std::size_t stop = close == std::string_view::npos ? src_.size() : close;
          value = decode_entities(src_.substr(q + 1, stop - q - 1), true);
          p = close == std::string_view::npos ? src_.size() : close + 1;
        } else {
          std::size_t vstart = q;
          while (q < src_.size() && !is_space(src_[q]) && src_[q] != '>') ++q;
          value = decode_entities(src_.substr(vstart, q - vstart), true);
          p = q;
        }
      }
      bool duplicate = std::any_of(attrs.begin(), attrs.end(),
                                   [&](const Node::Attribute& a) { return a.first == aname; });
      if (!duplicate) attrs.emplace_back(std::move(aname), std::move(value));
    }
    pos_ = p;
    bool raw = is_raw_text(name);
    bool rcdata = is_rcdata(name);
    std::string tag = name;
    builder_.start_tag(std::move(name), std::move(attrs), self_closing);
    if ((raw || rcdata) && !(self_closing && tag != "script")) {
      std::string closer = "</" + tag;
      std::size_t end = pos_;
      while (true) {
        end = src_.find("</", end);
        if (end == std::string_view::npos || iequals_prefix(src_, end, closer)) break;
        end += 2;
      }
      std::size_t stop = end == std::string_view::npos ? src_.size() : end;
      std::string_view content = src_.substr(pos_, stop - pos_);
      if (!content.empty()) builder_.text(rcdata ? decode_entities(content) : std::string(content));
      if (end == std::string_view::npos) {
        pos_ = src_.size();
      } else {
        auto gt = src_.find('>', end);
        pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
      }
      builder_.end_tag(tag);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  TreeBuilder& builder_;
};

void serialize_into(const Node& node, std::string& out) {
  switch (node.type) {
    case NodeType::document:
      for (const auto& c : node.children) serialize_into(*c, out);
      return;
    case NodeType::doctype:
      out += "<!DOCTYPE " + node.data + ">";
      return;
    case NodeType::comment:
      out += "<!--" + node.data + "-->";
      return;
    case NodeType::text: {
      const Node* p = node.parent;
      if (p && p->is_element() && is_raw_text(p->name)) {
        out += node.data;
      } else {
        out += escape_text(node.data);
      }
      return;
    }
    case NodeType::element:
      out += '<';
      out += node.name;
      for (const auto& [name, value] : node.attributes) {
        out += ' ';
        out += name;
        out += "=\"";
        out += escape_attribute(value);
        out += '"';
      }
      out += '>';
      if (is_void_element(node.name)) return;
      for (const auto& c : node.children) serialize_into(*c, out);
      out += "</" + node.name + ">";
      return;
  }
}

void text_into(const Node& node, std::string& out) {
  if (node.type == NodeType::text) {
    out += node.data;
    return;
  }
  if (node.is_element() && (node.name == "script" || node.name == "style" ||
                            node.name == "template" || node.name == "noscript"))
    return;
  for (const auto& c : node.children) text_into(*c, out);
}

bool is_javascript_url(std::string_view value) {
  std::string compact;
  for (char c : value)
    if (!is_space(c) && static_cast<unsigned char>(c) >= 0x20) compact += lower(c);
  return compact.starts_with("javascript:") || compact.starts_with("vbscript:");
}

void sanitize_node(Node& node) {
  auto& kids = node.children;
  kids.erase(std::remove_if(kids.begin(), kids.end(),
                            [](const std::unique_ptr<Node>& c) { return c->is_element("script"); }),
             kids.end());
  if (node.is_element()) {
    auto& attrs = node.attributes;
    attrs.erase(std::remove_if(attrs.begin(), attrs.end(),
                               [](const Node::Attribute& a) {
                                 if (a.first.size() > 2 && a.first.starts_with("on")) return true;
                                 bool url_attr = a.first == "href" || a.first == "src" ||
                                                 a.first == "action" || a.first == "formaction";
                                 return url_attr && is_javascript_url(a.second);
                               }),
                attrs.end());
  }
  for (auto& c : kids) sanitize_node(*c);
}

}  // namespace

bool is_void_element(std::string_view tag) {
  return std::find(kVoidElements.begin(), kVoidElements.end(), tag) != kVoidElements.end();
}

const std::string* Node::attr(std::string_view attr_name) const {
  for (const auto& a : attributes)
    if (a.first == attr_name) return &a.second;
  return nullptr;
}

std::vector<std::string_view> Node::classes() const {
  std::vector<std::string_view> out;
  const std::string* cls = attr("class");
  if (!cls) return out;
  std::string_view rest = *cls;
  while (!rest.empty()) {
    std::size_t i = 0;
    while (i < rest.size() && is_space(rest[i])) ++i;
    std::size_t j = i;
    while (j < rest.size() && !is_space(rest[j])) ++j;
    if (j > i) out.push_back(rest.substr(i, j - i));
    rest.remove_prefix(j);
  }
  return out;
}

bool Node::has_class(std::string_view cls) const {
  auto all = classes();
  return std::find(all.begin(), all.end(), cls) != all.end();
}

const Node* Node::parent_element() const {
  return parent && parent->is_element() ? parent : nullptr;
}

std::vector<const Node*> Node::element_children() const {
  std::vector<const Node*> out;
  for (const auto& c : children)
    if (c->is_element()) out.push_back(c.get());
  return out;
}

std::size_t Node::element_index() const {
  if (!parent) return 0;
  std::size_t i = 0;
  for (const auto& c : parent->children) {
    if (c.get() == this) return i;
    if (c->is_element()) ++i;
  }
  return i;
}

std::size_t Node::index_of_type() const {
  if (!parent) return 1;
  std::size_t i = 0;
  for (const auto& c : parent->children) {
    if (c->is_element(name)) ++i;
    if (c.get() == this) return i;
  }
  return i;
}

std::size_t Node::count_of_type() const {
  if (!parent) return 1;
  std::size_t n = 0;
  for (const auto& c : parent->children)
    if (c->is_element(name)) ++n;
  return n;
}

bool Node::is_ancestor_of(const Node& other) const {
  for (const Node* p = other.parent; p; p = p->parent)
    if (p == this) return true;
  return false;
}

Document Document::parse(std::string_view source, std::string base_url) {
  // Skip a UTF-8 byte order mark.
  if (source.starts_with("\xEF\xBB\xBF")) source.remove_prefix(3);

  Document doc;
  doc.doc_ = std::make_unique<Node>();
  doc.doc_->type = NodeType::document;
  {
    TreeBuilder builder(*doc.doc_);
    Tokenizer tokenizer(source, builder);
    tokenizer.run();
  }

  // Guarantee exactly one <html> element child of the document node.
  auto& top = doc.doc_->children;
  std::size_t elements = 0;
  bool has_html = false;
  for (const auto& c : top) {
    if (c->is_element()) {
      ++elements;
      has_html = has_html || c->name == "html";
    }
  }
  if (!(elements == 1 && has_html)) {
    auto html = std::make_unique<Node>();
    html->type = NodeType::element;
    html->name = "html";
    html->parent = doc.doc_.get();
    std::vector<std::unique_ptr<Node>> kept;
    for (auto& c : top) {
      if (c->type == NodeType::doctype) {
        kept.push_back(std::move(c));
      } else if (c->is_element("html")) {
        // Unwrap a stray <html> into the synthesized one.
        for (auto& a : c->attributes) html->attributes.push_back(a);
        for (auto& gc : c->children) {
          gc->parent = html.get();
          html->children.push_back(std::move(gc));
        }
      } else {
        c->parent = html.get();
        html->children.push_back(std::move(c));
      }
    }
    kept.push_back(std::move(html));
    top = std::move(kept);
  }
  doc.renumber();

  doc.base_url_ = std::move(base_url);
  // Honor the first <base href>.
  std::vector<const Node*> pending{&doc.root()};
  while (!pending.empty()) {
    const Node* n = pending.back();
    pending.pop_back();
    if (n->is_element("base")) {
      if (const auto* href = n->attr("href")) {
        doc.base_url_ = doc.base_url_.empty() ? *href : url::resolve(doc.base_url_, *href);
      }
      break;
    }
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it)
      if ((*it)->is_element()) pending.push_back(it->get());
  }
  return doc;
}

const Node& Document::root() const {
  for (const auto& c : doc_->children)
    if (c->is_element()) return *c;
  return *doc_;  // unreachable: parse() always creates <html>
}

bool Document::empty() const { return root().children.empty(); }

void Document::sanitize() {
  sanitize_node(*doc_);
  renumber();
}

void Document::renumber() {
  std::size_t counter = 0;
  std::vector<Node*> pending{doc_.get()};
  while (!pending.empty()) {
    Node* n = pending.back();
    pending.pop_back();
    n->order = counter++;
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) pending.push_back(it->get());
  }
}

DocumentHandle make_handle(std::string_view source, std::string base_url) {
  return std::make_shared<const Document>(Document::parse(source, std::move(base_url)));
}

std::string text_content(const Node& node) {
  std::string out;
  text_into(node, out);
  return out;
}

std::string inner_html(const Node& node) {
  std::string out;
  for (const auto& c : node.children) serialize_into(*c, out);
  return out;
}

std::string outer_html(const Node& node) {
  std::string out;
  serialize_into(node, out);
  return out;
}

std::string serialize(const Document& doc) { return outer_html(doc.document_node()); }

std::string decode_entities(std::string_view text, bool in_attribute) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '&') {
      out += c;
      continue;
    }
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '#') {
      ++j;
      bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
      if (hex) ++j;
      std::size_t start = j;
      std::uint32_t cp = 0;
      while (j < text.size() &&
             (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                  : std::isdigit(static_cast<unsigned char>(text[j])))) {
        int d = std::isdigit(static_cast<unsigned char>(text[j])) ? text[j] - '0'
                                                                 : lower(text[j]) - 'a' + 10;
        if (cp < 0x110000) cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        ++j;
      }
      if (j == start) {
        out += c;
        continue;
      }
      if (j < text.size() && text[j] == ';') ++j;
      append_utf8(out, cp);
      i = j - 1;
      continue;
    }
    std::size_t start = j;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view name = text.substr(start, j - start);
    const auto& table = named_entities();
    auto it = table.find(name);
    if (it == table.end()) {
      out += c;
      continue;
    }
    bool terminated = j < text.size() && text[j] == ';';
    if (!terminated) {
      if (!is_legacy_entity(name)) {
        out += c;
        continue;
      }
      if (in_attribute && j < text.size() && (text[j] == '=' || std::isalnum(static_cast<unsigned char>(text[j])))) {
        out += c;
        continue;
      }
    }
    append_utf8(out, it->second);
    i = terminated ? j : j - 1;
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sanitize_html(std::string_view source) {
  Document doc = Document::parse(source);
  doc.sanitize();
  return serialize(doc);
}

}  // namespace svc::html
