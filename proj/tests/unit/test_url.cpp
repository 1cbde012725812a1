#include <gtest/gtest.h>

#include "svc/url.hpp"

using namespace svc::url;

TEST(Url, ResolvesRfc3986Examples) {
  const std::string base = "http://a/b/c/d;p?q";
  EXPECT_EQ(resolve(base, "g"), "http://a/b/c/g");
  EXPECT_EQ(resolve(base, "./g"), "http://a/b/c/g");
  EXPECT_EQ(resolve(base, "/g"), "http://a/g");
  EXPECT_EQ(resolve(base, "//g"), "http://g");
  EXPECT_EQ(resolve(base, "?y"), "http://a/b/c/d;p?y");
  EXPECT_EQ(resolve(base, "#s"), "http://a/b/c/d;p?q#s");
  EXPECT_EQ(resolve(base, "../g"), "http://a/b/g");
  EXPECT_EQ(resolve(base, "../../../g"), "http://a/g");
  EXPECT_EQ(resolve(base, ""), "http://a/b/c/d;p?q");
}

TEST(Url, FormEncodingRoundTrips) {
  EXPECT_EQ(form_encode("Julio Cortázar"), "Julio+Cort%C3%A1zar");
  EXPECT_EQ(form_decode("Julio+Cort%C3%A1zar"), "Julio Cortázar");
  EXPECT_EQ(form_decode("100%"), "100%");
  EXPECT_EQ(form_encode("a&b=c"), "a%26b%3Dc");
}

TEST(Url, SplitsAndJoinsQueries) {
  auto [base, params] = split_query("http://h:8/p?q=a+b&ref=home#frag");
  EXPECT_EQ(base, "http://h:8/p");
  ASSERT_EQ(params.size(), 2u);
  EXPECT_EQ(params[0], (Param{"q", "a b"}));
  EXPECT_EQ(params[1], (Param{"ref", "home"}));
  EXPECT_EQ(with_params("http://h/p?x=1", {{"q", "Borges"}}), "http://h/p?x=1&q=Borges");
}

TEST(Url, ParsesComponents) {
  Url u = parse("https://user@example.org:8443/a/b?c=d#e");
  EXPECT_EQ(u.scheme, "https");
  EXPECT_EQ(u.host(), "example.org");
  EXPECT_EQ(u.origin(), "https://example.org:8443");
  EXPECT_EQ(u.path_and_query(), "/a/b?c=d");
  EXPECT_TRUE(is_absolute_http("http://x/"));
  EXPECT_FALSE(is_absolute_http("ftp://x/"));
  EXPECT_FALSE(is_absolute_http("/relative"));
  EXPECT_FALSE(is_absolute_http("http://"));
}
