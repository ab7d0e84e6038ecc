#include "doctest.h"

#include "acbr/html.hpp"

using namespace acbr;

namespace {

std::string all_text(html::node const& n)
{
    if (n.type == html::node_type::text) {
        return n.text;
    }
    std::string out;
    for (auto const& c : n.children) {
        out += all_text(c);
    }
    return out;
}

}  // namespace

TEST_CASE("numeric and named references decode")
{
    CHECK(html::decode_entities("&#x41;") == "A");
    CHECK(html::decode_entities("&#65;&#X42;") == "AB");
    CHECK(html::decode_entities("&#x0905;") == "\xE0\xA4\x85");
    CHECK(html::decode_entities("fish &amp; chips &lt;3") == "fish & chips <3");
    CHECK(html::decode_entities("&unknown; & done") == "&unknown; & done");
    CHECK(html::decode_entities("&#xD800;") == "\xEF\xBF\xBD");
    CHECK(html::decode_entities("&#1234567;") == "\xEF\xBF\xBD");
    CHECK(html::decode_entities("&#;") == "&#;");
}

TEST_CASE("utf8 validation")
{
    CHECK(html::is_valid_utf8("plain"));
    CHECK(html::is_valid_utf8("caf\xC3\xA9"));
    CHECK_FALSE(html::is_valid_utf8("caf\xE9"));
    CHECK_FALSE(html::is_valid_utf8("\xC0\xAF"));      // overlong
    CHECK_FALSE(html::is_valid_utf8("\xED\xA0\x80"));  // surrogate
    CHECK_FALSE(html::is_valid_utf8("\xE2\x82"));      // truncated
}

TEST_CASE("tree building is permissive")
{
    SUBCASE("unclosed paragraphs close at the next paragraph")
    {
        auto root = html::parse("<p>a<p>b");
        REQUIRE(root.children.size() == 2);
        CHECK(root.children[0].tag == "p");
        CHECK(root.children[1].tag == "p");
    }
    SUBCASE("script, style, comments and title are invisible")
    {
        auto root = html::parse("<title>T</title><script>x<y</script><!-- <p>c</p> --><style>s</style>z");
        CHECK(all_text(root) == "z");
    }
    SUBCASE("stray end tags are ignored, attributes with '>' are skipped")
    {
        auto root = html::parse("</div><span title=\"a>b\">t</span></p>");
        CHECK(all_text(root) == "t");
    }
    SUBCASE("void and self-closing elements take no children")
    {
        auto root = html::parse("<br>a<img src=x/>b");
        CHECK(root.children.size() == 4);
        CHECK(all_text(root) == "ab");
    }
    SUBCASE("literal '<' stays text")
    {
        CHECK(all_text(html::parse("a < b")) == "a < b");
    }
    SUBCASE("deep nesting is flattened")
    {
        std::string deep;
        for (int i = 0; i < 5000; ++i) {
            deep += "<span>";
        }
        deep += "x";
        auto root = html::parse(deep);
        CHECK(all_text(root) == "x");
    }
}
