#include "acbr/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace acbr::html {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool one_of(std::string_view tag, std::initializer_list<std::string_view> tags)
{
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

bool is_void(std::string_view tag)
{
    return one_of(
        tag,
        {"area", "base", "br", "col", "embed", "hr", "img", "input", "keygen", "link", "meta",
         "param", "source", "track", "wbr"});
}

// Content of these is never visible text.
bool is_raw_invisible(std::string_view tag)
{
    return one_of(tag, {"script", "style", "title", "noscript", "template", "textarea", "xmp"});
}

bool is_phrasing(std::string_view tag)
{
    return one_of(
        tag,
        {"a", "abbr", "b", "big", "cite", "code", "em", "font", "i", "label", "mark", "q",
         "s", "small", "span", "strike", "strong", "sub", "sup", "tt", "u"});
}

// Start tags that implicitly close an open <p>.
bool closes_paragraph(std::string_view tag)
{
    return one_of(
        tag,
        {"address", "article", "aside", "blockquote", "div", "dl", "fieldset", "footer", "form",
         "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "menu", "nav", "ol", "p", "pre",
         "section", "table", "ul"});
}

struct named_entity {
    std::string_view name;
    char32_t cp;
};

constexpr std::array<named_entity, 32> named_entities{{
    {"amp", U'&'},      {"lt", U'<'},        {"gt", U'>'},       {"quot", U'"'},
    {"apos", U'\''},    {"nbsp", 0x00A0},    {"copy", 0x00A9},   {"reg", 0x00AE},
    {"trade", 0x2122},  {"mdash", 0x2014},   {"ndash", 0x2013},  {"hellip", 0x2026},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},   {"ldquo", 0x201C},  {"rdquo", 0x201D},
    {"bull", 0x2022},   {"middot", 0x00B7},  {"laquo", 0x00AB},  {"raquo", 0x00BB},
    {"eacute", 0x00E9}, {"egrave", 0x00E8},  {"aacute", 0x00E1}, {"agrave", 0x00E0},
    {"ouml", 0x00F6},   {"uuml", 0x00FC},    {"auml", 0x00E4},   {"ccedil", 0x00E7},
    {"deg", 0x00B0},    {"rupee", 0x20B9},   {"euro", 0x20AC},   {"pound", 0x00A3},
}};

class tree_builder {
  public:
    tree_builder() { m_stack.push_back(&m_root); }

    node take() { return std::move(m_root); }

    void text(std::string_view raw)
    {
        if (raw.empty()) {
            return;
        }
        auto& children = m_stack.back()->children;
        if (!children.empty() && children.back().type == node_type::text) {
            children.back().text += decode_entities(raw);
        } else {
            node n;
            n.type = node_type::text;
            n.text = decode_entities(raw);
            children.push_back(std::move(n));
        }
    }

    void start(std::string const& tag, bool self_closing)
    {
        if (closes_paragraph(tag)) {
            close_within("p", [](std::string_view t) { return !is_phrasing(t) && t != "p"; });
        }
        if (tag == "li") {
            close_within("li", [](std::string_view t) { return t == "ul" || t == "ol"; });
        } else if (tag == "td" || tag == "th") {
            close_within("td", [](std::string_view t) { return t == "tr" || t == "table"; });
            close_within("th", [](std::string_view t) { return t == "tr" || t == "table"; });
        } else if (tag == "tr") {
            close_within("tr", [](std::string_view t) { return t == "table"; });
        } else if (tag == "a") {
            close_within("a", [](std::string_view) { return false; });
        } else if (tag == "option") {
            close_within("option", [](std::string_view t) { return t == "select"; });
        }

        node n;
        n.tag = tag;
        auto& children = m_stack.back()->children;
        children.push_back(std::move(n));
        if (!self_closing && !is_void(tag) && m_stack.size() < max_depth) {
            m_stack.push_back(&children.back());
        }
    }

    void end(std::string const& tag)
    {
        for (std::size_t i = m_stack.size(); i-- > 1;) {
            if (m_stack[i]->tag == tag) {
                m_stack.resize(i);
                return;
            }
        }
    }

  private:
    // Pops through the nearest open `tag` unless a boundary element is hit first.
    template <typename Boundary>
    void close_within(std::string_view tag, Boundary is_boundary)
    {
        for (std::size_t i = m_stack.size(); i-- > 1;) {
            if (m_stack[i]->tag == tag) {
                m_stack.resize(i);
                return;
            }
            if (is_boundary(m_stack[i]->tag)) {
                return;
            }
        }
    }

    node m_root{node_type::element, "#root", {}, {}};
    std::vector<node*> m_stack;
};

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from)
{
    if (needle.size() > hay.size()) {
        return std::string_view::npos;
    }
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(hay[i + j]))
                != static_cast<unsigned char>(needle[j])) {
                match = false;
                break;
            }
        }
        if (match) {
            return i;
        }
    }
    return std::string_view::npos;
}

// Skips attributes of a start tag; returns position after '>' and whether the
// tag was written self-closing.
std::pair<std::size_t, bool> skip_attributes(std::string_view in, std::size_t pos)
{
    bool self_closing = false;
    while (pos < in.size()) {
        char c = in[pos];
        if (c == '>') {
            return {pos + 1, self_closing};
        }
        if (c == '"' || c == '\'') {
            auto close = in.find(c, pos + 1);
            if (close == std::string_view::npos) {
                return {in.size(), false};
            }
            pos = close + 1;
            self_closing = false;
            continue;
        }
        if (c == '/') {
            self_closing = true;
        } else if (!is_space(c)) {
            self_closing = false;
        }
        ++pos;
    }
    return {in.size(), self_closing};
}

}  // namespace

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_valid_utf8(std::string_view bytes)
{
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        }
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > bytes.size()) {
            return false;
        }
        for (std::size_t j = 1; j < len; ++j) {
            auto cc = static_cast<unsigned char>(bytes[i + j]);
            if ((cc & 0xC0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong forms, surrogates, beyond U+10FFFF.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)
            || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
            return false;
        }
        i += len;
    }
    return true;
}

std::string decode_entities(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t j = i + 1;
        if (j < text.size() && text[j] == '#') {
            ++j;
            bool hex = j < text.size() && (text[j] == 'x' || text[j] == 'X');
            if (hex) {
                ++j;
            }
            std::size_t digits_start = j;
            char32_t cp = 0;
            bool overflow = false;
            while (j < text.size()
                   && (hex ? std::isxdigit(static_cast<unsigned char>(text[j]))
                           : std::isdigit(static_cast<unsigned char>(text[j])))) {
                auto c = static_cast<unsigned char>(text[j]);
                unsigned digit = std::isdigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10);
                if (cp > 0x10FFFF) {
                    overflow = true;
                } else {
                    cp = cp * (hex ? 16 : 10) + digit;
                }
                ++j;
            }
            if (j == digits_start) {
                out.push_back(text[i++]);
                continue;
            }
            if (j < text.size() && text[j] == ';') {
                ++j;
            }
            if (overflow || cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                cp = 0xFFFD;
            }
            append_utf8(out, cp);
            i = j;
            continue;
        }
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))
               && j - i <= 8) {
            ++j;
        }
        if (j < text.size() && text[j] == ';') {
            auto name = text.substr(i + 1, j - i - 1);
            auto it = std::find_if(named_entities.begin(), named_entities.end(), [&](auto const& e) {
                return e.name == name;
            });
            if (it != named_entities.end()) {
                append_utf8(out, it->cp);
                i = j + 1;
                continue;
            }
        }
        out.push_back(text[i++]);
    }
    return out;
}

node parse(std::string_view in)
{
    tree_builder builder;
    std::size_t pos = 0;
    std::size_t text_start = 0;

    auto flush_text = [&](std::size_t end) {
        if (end > text_start) {
            builder.text(in.substr(text_start, end - text_start));
        }
    };

    while (pos < in.size()) {
        if (in[pos] != '<' || pos + 1 >= in.size()) {
            ++pos;
            continue;
        }
        char next = in[pos + 1];
        if (next == '!' || next == '?') {
            flush_text(pos);
            std::size_t end;
            if (in.substr(pos, 4) == "<!--") {
                end = in.find("-->", pos + 4);
                end = end == std::string_view::npos ? in.size() : end + 3;
            } else {
                end = in.find('>', pos);
                end = end == std::string_view::npos ? in.size() : end + 1;
            }
            pos = text_start = end;
            continue;
        }
        bool closing = next == '/';
        std::size_t name_start = pos + (closing ? 2 : 1);
        if (name_start >= in.size() || !is_alpha(in[name_start])) {
            // A literal '<', part of the text.
            ++pos;
            continue;
        }
        flush_text(pos);
        std::size_t name_end = name_start;
        while (name_end < in.size()
               && (std::isalnum(static_cast<unsigned char>(in[name_end])) || in[name_end] == '-'
                   || in[name_end] == ':')) {
            ++name_end;
        }
        std::string tag = lower(in.substr(name_start, name_end - name_start));
        auto [after, self_closing] = skip_attributes(in, name_end);
        pos = text_start = after;
        if (closing) {
            builder.end(tag);
            continue;
        }
        if (is_raw_invisible(tag) && !self_closing) {
            std::string close_tag = "</" + tag;
            auto end = find_ci(in, close_tag, pos);
            if (end == std::string_view::npos) {
                pos = text_start = in.size();
            } else {
                auto gt = in.find('>', end);
                pos = text_start = gt == std::string_view::npos ? in.size() : gt + 1;
            }
            continue;
        }
        builder.start(tag, self_closing);
    }
    flush_text(in.size());
    return builder.take();
}

}  // namespace acbr::html
