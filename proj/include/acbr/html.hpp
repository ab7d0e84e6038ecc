#pragma once

#include <string>
#include <string_view>
#include <vector>

/// Permissive HTML tree builder. Only what block segmentation needs: element
/// nesting, visible text with character references decoded, and nothing else.
/// Attributes are dropped; script/style/title content is invisible.
namespace acbr::html {

enum class node_type { element, text };

struct node {
    node_type type = node_type::element;
    std::string tag;   // lower-case; "#root" for the document root
    std::string text;  // decoded, only for text nodes
    std::vector<node> children;

    bool operator==(node const&) const = default;
};

/// Nesting beyond this depth is flattened into the deepest open element.
inline constexpr std::size_t max_depth = 256;

/// Builds a tree from markup. Never fails: unclosed elements are closed at
/// end of input, stray end tags are ignored. Input must already be valid UTF-8.
[[nodiscard]] node parse(std::string_view markup);

/// Decodes named and numeric character references (`&amp;`, `&#65;`,
/// `&#x0905;`). Unknown named references are kept verbatim; out-of-range or
/// surrogate code points become U+FFFD.
[[nodiscard]] std::string decode_entities(std::string_view text);

[[nodiscard]] bool is_valid_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);

}  // namespace acbr::html
