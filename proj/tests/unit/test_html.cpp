#include <gtest/gtest.h>

#include "svc/html.hpp"
#include "svc/selector.hpp"

using namespace svc;
using html::Document;

TEST(Html, ImpliedEndTagsForListItems) {
  auto doc = Document::parse("<ul><li>one<li>two<li>three</ul>");
  auto items = evaluate(Selector::css("ul > li"), doc);
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(html::text_content(*items[1]), "two");
}

TEST(Html, ParagraphClosedByBlock) {
  auto doc = Document::parse("<p>a<div>b</div>");
  auto divs = evaluate(Selector::css("p div"), doc);
  EXPECT_TRUE(divs.empty());
}

TEST(Html, TablesWithoutExplicitEnds) {
  auto doc = Document::parse("<table><tr><td>1<td>2<tr><td>3</table><p>after");
  EXPECT_EQ(evaluate(Selector::css("tr"), doc).size(), 2u);
  EXPECT_EQ(evaluate(Selector::css("td"), doc).size(), 3u);
  EXPECT_EQ(evaluate(Selector::css("table p"), doc).size(), 0u);
}

TEST(Html, DecodesEntitiesInTextAndAttributes) {
  auto doc = Document::parse("<a href=\"/s?a=1&amp;b=2\" title=\"x&lt;y\">Caf&eacute; &#233; &#x41;</a>");
  auto a = evaluate(Selector::css("a"), doc);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(*a[0]->attr("href"), "/s?a=1&b=2");
  EXPECT_EQ(*a[0]->attr("title"), "x<y");
  EXPECT_EQ(html::text_content(*a[0]), "Café é A");
}

TEST(Html, RawTextElementsAreNotParsed) {
  auto doc = Document::parse("<script>if (a < b) { document.write('<li>x</li>'); }</script><li>real</li>");
  EXPECT_EQ(evaluate(Selector::css("li"), doc).size(), 1u);
  EXPECT_EQ(html::text_content(doc.root()), "real");
}

TEST(Html, FragmentsGetSyntheticRoot) {
  auto doc = Document::parse("<li class=\"result\">x</li><li class=\"result\">y</li>");
  EXPECT_EQ(doc.root().name, "html");
  EXPECT_EQ(evaluate(Selector::css("li.result"), doc).size(), 2u);
}

TEST(Html, BaseHrefAdjustsBaseUrl) {
  auto doc = Document::parse("<head><base href=\"/sub/\"></head><a href=\"x\">", "http://h/page");
  EXPECT_EQ(doc.base_url(), "http://h/sub/");
}

TEST(Html, SanitizeRemovesScriptsAndHandlers) {
  std::string out = html::sanitize_html(
      "<div onclick=\"evil()\"><script>x()</script><a href=\"javascript:alert(1)\">a</a>"
      "<img src=x onerror=boom><SCRIPT src=//x></SCRIPT></div>");
  auto doc = Document::parse(out);
  EXPECT_TRUE(evaluate(Selector::css("script"), doc).empty());
  for (const auto* el : evaluate(Selector::xpath("//*"), doc)) {
    for (const auto& [name, value] : el->attributes) {
      EXPECT_NE(name.rfind("on", 0), 0u) << name;
      EXPECT_EQ(value.find("javascript:"), std::string::npos);
    }
  }
}

TEST(Html, EmptyDocument) {
  auto doc = Document::parse("");
  EXPECT_TRUE(doc.empty());
  EXPECT_TRUE(evaluate(Selector::css("li"), doc).empty());
  EXPECT_TRUE(evaluate(Selector::xpath("//li"), doc).empty());
}

TEST(Html, SerializeRoundTripsStructure) {
  auto doc = Document::parse("<ul><li class=\"a\">x &amp; y</li><li>z</li></ul>");
  auto again = Document::parse(html::serialize(doc));
  EXPECT_EQ(html::serialize(again), html::serialize(doc));
  EXPECT_EQ(evaluate(Selector::css("li.a"), again).size(), 1u);
}
