#include <gtest/gtest.h>

#include "svc/extraction.hpp"
#include "svc/fixtures.hpp"
#include "svc/html.hpp"

using namespace svc;

namespace {

SearchResultSpec books_spec() {
  return fixtures::fixture_spec(fixtures::Mode::form_reload, "http://s", true).result_spec;
}

const char* kPage = R"(<ul id="results">
<li class="result"><a class="title" href="/book/1">  Ficciones
  </a><span class="author">Jorge&nbsp;Luis Borges</span><span class="rating">4.5</span><span class="venue">journal</span></li>
<li class="result"><a class="title" href="book/2">El Aleph</a><span class="author">Borges</span><span class="venue">conference</span></li>
<li class="result"><span class="title">no link</span></li>
</ul>)";

}  // namespace

TEST(NormalizeText, CollapsesWhitespace) {
  EXPECT_EQ(normalize_text("  a \n\t b  "), "a b");
  EXPECT_EQ(normalize_text("a\xC2\xA0\xC2\xA0" "b"), "a b");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text("caf\xC3\xA9"), "caf\xC3\xA9");
}

TEST(Extract, ValuesUrlsAndDrops) {
  auto doc = html::Document::parse(kPage, "http://s/form/search?q=borges");
  auto out = extract_results(doc, books_spec(), doc.base_url(), "2020-01-01T00:00:00Z");
  ASSERT_EQ(out.objects.size(), 2u);
  EXPECT_EQ(out.dropped, 1u);
  const auto& a = out.objects[0];
  EXPECT_EQ(a.target_url, "http://s/book/1");
  EXPECT_EQ(a.value("title").value, "Ficciones");
  EXPECT_EQ(a.value("author").value, "Jorge Luis Borges");
  EXPECT_TRUE(a.value("bibtex").is_missing());
  EXPECT_EQ(out.objects[1].target_url, "http://s/form/book/2");
  EXPECT_TRUE(out.objects[1].value("rating").is_missing());
  EXPECT_EQ(out.objects[1].provenance.container_index, 1u);
  EXPECT_EQ(a.provenance.source_url, "http://s/form/search?q=borges");
  EXPECT_EQ(a.provenance.fetched_at, "2020-01-01T00:00:00Z");
}

TEST(Extract, AttributeUrlsResolve) {
  auto doc = html::Document::parse("<div><img src='../i.png'><a data-x='rel'></a></div>", "http://s/a/b/c");
  PropertySpec img{"img", PropertyLocation::in_result, Selector::css("img"), ExtractRule::attr("src")};
  auto v = read_property(img, doc.root(), doc.base_url());
  EXPECT_EQ(v.kind, PropertyValue::Kind::url);
  EXPECT_EQ(v.value, "http://s/a/i.png");
  PropertySpec other{"x", PropertyLocation::in_result, Selector::css("a"), ExtractRule::attr("data-x")};
  v = read_property(other, doc.root(), doc.base_url());
  EXPECT_EQ(v.kind, PropertyValue::Kind::text);
  EXPECT_EQ(v.value, "rel");
}

TEST(Extract, EmptyDocument) {
  auto doc = html::Document::parse("", "http://s/");
  auto out = extract_results(doc, books_spec(), doc.base_url(), "");
  EXPECT_TRUE(out.objects.empty());
  EXPECT_EQ(out.dropped, 0u);
}

TEST(Enrich, FillsInTargetAndReportsFailures) {
  StaticFetcher f;
  f.add("http://s/book/1", "<pre class='bibtex'>@book{one}</pre>");
  // book/2 answers 404
  auto doc = html::Document::parse(kPage, "http://s/");
  auto out = extract_results(doc, books_spec(), doc.base_url(), "");
  std::vector<std::string> diags;
  auto enriched = enrich_in_target(out.objects, books_spec(), f, &diags);
  ASSERT_EQ(enriched.size(), 2u);
  EXPECT_EQ(enriched[0].value("bibtex").value, "@book{one}");
  EXPECT_TRUE(enriched[1].value("bibtex").is_missing());
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].find("404"), std::string::npos) << diags[0];
  EXPECT_EQ(enriched[0].value("title"), out.objects[0].value("title"));

  std::size_t before = f.requests().size();
  auto again = enrich_in_target(std::vector<DomainObject>{enriched[0]}, books_spec(), f);
  EXPECT_EQ(f.requests().size(), before);
  EXPECT_EQ(again[0], enriched[0]);
}

TEST(ResultJson, MissingIsNull) {
  DomainObject o;
  o.type_name = "Book";
  o.target_url = "http://s/book/1";
  o.values["a"] = PropertyValue::missing();
  o.values["b"] = PropertyValue::text("x");
  auto j = to_json(o);
  EXPECT_TRUE(j["values"]["a"].is_null());
  EXPECT_EQ(j["values"]["b"], "x");
  EXPECT_EQ(j["type"], "Book");
}
