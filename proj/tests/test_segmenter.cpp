#include "doctest.h"

#include <random>
#include <regex>

#include "acbr/error.hpp"
#include "acbr/segmenter.hpp"
#include "support.hpp"

using namespace acbr;

namespace {

std::vector<std::string> block_texts(std::string const& html)
{
    std::vector<std::string> out;
    for (auto const& b : segment_blocks(parse_document(html, "t"))) {
        out.push_back(b.text);
    }
    return out;
}

using strings = std::vector<std::string>;

}  // namespace

TEST_CASE("parse_document")
{
    CHECK(parse_document("<p>hi</p>", "d1").doc_id == "d1");

    auto d2 = parse_document("<p>&#x41;</p>", "d2");
    REQUIRE(segment_blocks(d2).size() == 1);
    CHECK(segment_blocks(d2)[0].text == "A");

    CHECK_THROWS_AS((void)parse_document("", "d3"), parse_error);
    CHECK_THROWS_WITH_AS((void)parse_document("<p>caf\xE9</p>", "latin1.html"), doctest::Contains("latin1.html"),
                         parse_error);
}

TEST_CASE("segment_blocks")
{
    CHECK(block_texts("<div>a</div><p>b</p>") == strings{"a", "b"});

    auto plain = segment_blocks(parse_document("plain text only", "t"));
    REQUIRE(plain.size() == 1);
    CHECK(plain[0].kind == block_kind::synthetic);
    CHECK(plain[0].text == "plain text only");

    // deepest segmenting element holding the text owns it
    CHECK(block_texts("<div><p>x</p><p>y</p></div>") == strings{"x", "y"});

    SUBCASE("wrapper text becomes its own block ahead of the children")
    {
        CHECK(block_texts("<div>intro<p>x</p>outro</div>") == strings{"intro\noutro", "x"});
    }
    SUBCASE("table cells belong to the table")
    {
        auto blocks = segment_blocks(parse_document("<table><tr><td>a</td><td>b</td></tr></table>", "t"));
        REQUIRE(blocks.size() == 1);
        CHECK(blocks[0].kind == block_kind::table);
        CHECK(blocks[0].text == "a b");
    }
    SUBCASE("loose text trails after all element blocks")
    {
        CHECK(block_texts("lead<p>x</p>tail") == strings{"x", "lead\ntail"});
    }
    SUBCASE("indices are contiguous")
    {
        auto blocks = segment_blocks(parse_document("<div> </div><p>a</p><div></div><p>b</p>", "t"));
        REQUIRE(blocks.size() == 2);
        CHECK(blocks[0].index == 0);
        CHECK(blocks[1].index == 1);
    }
    SUBCASE("anchor characters are counted apart")
    {
        auto blocks = segment_blocks(parse_document("<p><a href=x>home</a>  beach   resorts</p>", "t"));
        REQUIRE(blocks.size() == 1);
        CHECK(blocks[0].linked_chars == 4);
        CHECK(blocks[0].unlinked_chars == 13);
    }
    SUBCASE("headings are boundaries")
    {
        CHECK(block_texts("<div><h2>Title</h2>Body text</div>") == strings{"Title\nBody text"});
    }
}

TEST_CASE("link_to_text_ratio")
{
    block b;
    b.unlinked_chars = 5;
    CHECK(link_to_text_ratio(b) == 0.0);
    b.linked_chars = 5;
    b.unlinked_chars = 0;
    CHECK(link_to_text_ratio(b) == 1.0);
    b.linked_chars = 2;
    b.unlinked_chars = 6;
    CHECK(link_to_text_ratio(b) == 0.25);
    b.linked_chars = 0;
    b.unlinked_chars = 0;
    CHECK(link_to_text_ratio(b) == 0.0);
}

TEST_CASE("extract_block_text")
{
    auto plain = make_block(0, block_kind::paragraph, {{"goa beach", false, false}});
    CHECK(extract_block_text(plain, 0.5) == "goa beach");

    auto links = make_block(0, block_kind::div, {{"home", true, false}, {"about", true, false}});
    CHECK(link_to_text_ratio(links) == 1.0);
    CHECK(extract_block_text(links, 0.5).empty());

    // ratio 0.8: 52 linked characters against 13 unlinked
    auto mixed = make_block(0, block_kind::div,
                            {{"home", true, false},
                             {std::string(48, 'n'), true, false},
                             {"beach resorts", false, false}});
    CHECK(mixed.linked_chars == 52);
    CHECK(link_to_text_ratio(mixed) == doctest::Approx(0.8));
    CHECK(extract_block_text(mixed, 0.5) == "beach resorts");
    CHECK(extract_block_text(mixed, 0.9) == "home " + std::string(48, 'n') + " beach resorts");

    SUBCASE("a dropped anchor keeps its boundary")
    {
        auto b = make_block(0, block_kind::div,
                            {{"Intro", false, false}, {"link text here", true, true}, {"Body", false, false}});
        CHECK(extract_block_text(b, 0.1) == "Intro\nBody");
    }
}

TEST_CASE("dedupe_sentences")
{
    CHECK(dedupe_sentences("A b. A b.") == "A b.");
    CHECK(dedupe_sentences("x. y. x.") == "x. y.");
    CHECK(dedupe_sentences("visit goa beach visit goa beach now.") == "visit goa beach now.");

    CHECK(dedupe_sentences("Goa beach.   GOA   beach.") == "Goa beach.");
    CHECK(dedupe_sentences("Heading\nHeading\nBody.") == "Heading\nBody.");
    CHECK(dedupe_sentences("one two one two.") == "one two one two.");  // two-token phrase stays
    CHECK(dedupe_sentences("Version 3.5 is out.") == "Version 3.5 is out.");
    CHECK(dedupe_sentences("").empty());

    SUBCASE("idempotent on random text")
    {
        std::mt19937_64 rng(7);
        std::vector<std::string> pieces = {"goa ", "beach ", "Goa ", "visit ", ". ", "! ", "?", "\n", "  ",
                                           "a.b ", "x ", "y ", "z ", "\t", "...", "\xC2\xA0", "<", "temple "};
        std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
        std::uniform_int_distribution<int> len(0, 60);
        for (int trial = 0; trial < 500; ++trial) {
            std::string text;
            for (int i = len(rng); i > 0; --i) {
                text += pieces[pick(rng)];
            }
            auto once = dedupe_sentences(text);
            CHECK_MESSAGE(dedupe_sentences(once) == once, "input: " << text);
        }
    }
}

TEST_CASE("tokenize")
{
    stop_words stops;
    CHECK(tokenize("The Taj Mahal", stops) == strings{"taj", "mahal"});
    CHECK(tokenize("", stops).empty());
    CHECK(tokenize("beach, beach!", stops) == strings{"beach", "beach"});

    CHECK(tokenize("CAF\xC3\x89 d\xE2\x80\x99" "arc", stops) == strings{"caf\xC3\xA9", "arc"});
    CHECK(tokenize("\xE0\xA4\x85\xE0\xA4\x95 temple\xE0\xA5\xA4", stops)
          == strings{"\xE0\xA4\x85\xE0\xA4\x95", "temple"});

    stop_words custom({"Beach"});
    CHECK(tokenize("The beach", custom) == strings{"the"});
    CHECK_FALSE(custom.is_default());
    CHECK(stops.is_default());
}

TEST_CASE("segmentation properties on malformed HTML")
{
    std::mt19937_64 rng(42);
    std::regex markup("<[a-zA-Z/!]");
    for (int trial = 0; trial < 300; ++trial) {
        auto html = testing::random_html(rng);
        auto doc = parse_document(html, "fuzz");
        auto blocks = segment_blocks(doc);
        std::size_t counted = 0;
        for (auto const& b : blocks) {
            auto ratio = link_to_text_ratio(b);
            CHECK(ratio >= 0.0);
            CHECK(ratio <= 1.0);
            CHECK_FALSE(std::regex_search(b.text, markup));
            CHECK_FALSE(std::regex_search(extract_block_text(b, 0.5), markup));
            counted += b.linked_chars + b.unlinked_chars;
        }
        CHECK(counted <= visible_chars(doc));
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            CHECK(blocks[i].index == i);
        }
        CHECK(segment_blocks(parse_document(html, "fuzz")) == blocks);
    }
}
