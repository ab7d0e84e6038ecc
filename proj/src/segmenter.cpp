#include "acbr/segmenter.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "acbr/error.hpp"

namespace acbr {

namespace {

bool is_segmenting(std::string_view tag) { return tag == "table" || tag == "p" || tag == "div"; }

block_kind kind_of(std::string_view tag)
{
    if (tag == "table") {
        return block_kind::table;
    }
    if (tag == "p") {
        return block_kind::paragraph;
    }
    return block_kind::div;
}

// Elements whose edges are sentence/paragraph boundaries in extracted text.
bool is_break(std::string_view tag)
{
    static constexpr std::string_view tags[] = {
        "p",  "div", "table", "tr", "br",         "li",  "dt",      "dd",     "h1",
        "h2", "h3",  "h4",    "h5", "h6",         "hr",  "pre",     "ul",     "ol",
        "dl", "nav", "header", "footer", "blockquote", "section", "article", "aside"};
    return std::find(std::begin(tags), std::end(tags), tag) != std::end(tags);
}

std::size_t count_code_points(std::string_view s)
{
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

// Collapses whitespace runs (ASCII and U+00A0) to a single space and trims.
// '<' becomes whitespace too, so decoded text can never look like markup.
std::string collapse_whitespace(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'
            || c == '<';
        if (!space && static_cast<unsigned char>(c) == 0xC2 && i + 1 < s.size()
            && static_cast<unsigned char>(s[i + 1]) == 0xA0) {
            space = true;
            ++i;
        }
        if (space) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::string join_runs(std::vector<text_run> const& runs, bool drop_linked)
{
    std::string out;
    bool pending_break = false;
    for (auto const& run : runs) {
        if (drop_linked && run.linked) {
            pending_break = pending_break || run.break_before;
            continue;
        }
        if (!out.empty()) {
            out.push_back(run.break_before || pending_break ? '\n' : ' ');
        }
        out += run.text;
        pending_break = false;
    }
    return out;
}

struct pending_block {
    block_kind kind;
    std::vector<text_run> runs;
    std::size_t last_break = 0;
};

class block_collector {
  public:
    void walk(html::node const& n, std::optional<std::size_t> owner, bool linked)
    {
        if (n.type == html::node_type::text) {
            add_text(n.text, owner, linked);
            return;
        }
        bool brk = is_break(n.tag);
        if (brk) {
            ++m_break;
        }
        if (is_segmenting(n.tag)) {
            m_blocks.push_back({kind_of(n.tag), {}, m_break});
            owner = m_blocks.size() - 1;
        }
        bool child_linked = linked || n.tag == "a";
        for (auto const& child : n.children) {
            walk(child, owner, child_linked);
        }
        if (brk) {
            ++m_break;
        }
    }

    std::vector<block> finish() &&
    {
        std::vector<block> out;
        for (auto& pb : m_blocks) {
            if (!pb.runs.empty()) {
                out.push_back(make_block(out.size(), pb.kind, std::move(pb.runs)));
            }
        }
        if (!m_trailing.runs.empty()) {
            out.push_back(make_block(out.size(), block_kind::synthetic, std::move(m_trailing.runs)));
        }
        return out;
    }

  private:
    void add_text(std::string_view raw, std::optional<std::size_t> owner, bool linked)
    {
        auto text = collapse_whitespace(raw);
        if (text.empty()) {
            return;
        }
        auto& target = owner ? m_blocks[*owner] : m_trailing;
        bool brk = !target.runs.empty() && target.last_break != m_break;
        target.runs.push_back({std::move(text), linked, brk});
        target.last_break = m_break;
    }

    std::vector<pending_block> m_blocks;
    pending_block m_trailing{block_kind::synthetic, {}, 0};
    std::size_t m_break = 0;
};

std::size_t count_visible(html::node const& n)
{
    if (n.type == html::node_type::text) {
        return count_code_points(collapse_whitespace(n.text));
    }
    std::size_t total = 0;
    for (auto const& child : n.children) {
        total += count_visible(child);
    }
    return total;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

std::vector<std::string> split_words(std::string_view s)
{
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') {
            ++j;
        }
        if (j > i) {
            words.emplace_back(s.substr(i, j - i));
        }
        i = j;
    }
    return words;
}

// Sentences longer than this skip phrase collapsing; the quadratic scan is
// not worth it on what is then almost certainly boilerplate.
constexpr std::size_t max_phrase_scan_tokens = 2000;

// Collapses "p p" -> "p" for phrases p of at least three tokens until no
// immediate repeat remains.
std::string collapse_repeated_phrases(std::string const& sentence)
{
    auto words = split_words(sentence);
    if (words.size() < 6 || words.size() > max_phrase_scan_tokens) {
        return sentence;
    }
    std::vector<std::string> keys;
    keys.reserve(words.size());
    for (auto const& w : words) {
        keys.push_back(fold_case(w));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t len = 3; 2 * len <= keys.size() && !changed; ++len) {
            // run = number of consecutive positions ending at i with keys[i] == keys[i + len]
            std::size_t run = 0;
            for (std::size_t i = 0; i + len < keys.size(); ++i) {
                run = keys[i] == keys[i + len] ? run + 1 : 0;
                if (run == len) {
                    std::size_t start = i + 1;  // second copy starts here
                    keys.erase(keys.begin() + static_cast<std::ptrdiff_t>(start),
                               keys.begin() + static_cast<std::ptrdiff_t>(start + len));
                    words.erase(words.begin() + static_cast<std::ptrdiff_t>(start),
                                words.begin() + static_cast<std::ptrdiff_t>(start + len));
                    changed = true;
                    break;
                }
            }
        }
    }
    std::string out;
    for (auto const& w : words) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += w;
    }
    return out;
}

// Decodes one code point; invalid bytes yield U+FFFD and advance by one.
char32_t next_code_point(std::string_view s, std::size_t& i)
{
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    std::size_t len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = c & (len == 2 ? 0x1F : len == 3 ? 0x0F : 0x07);
    for (std::size_t j = 1; j < len; ++j) {
        auto cc = static_cast<unsigned char>(s[i + j]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += len;
    return cp;
}

bool is_word_char(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp == 0xFFFD || (cp >= 0x00A0 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7) {
        return false;
    }
    if ((cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x20A0 && cp <= 0x20CF)
        || (cp >= 0x3000 && cp <= 0x303F) || cp == 0x0964 || cp == 0x0965) {
        return false;
    }
    return true;
}

char32_t fold(char32_t cp)
{
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 32;
    }
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) {
        return cp + 32;
    }
    return cp;
}

// NLTK-style English list.
constexpr std::string_view default_stop_list[] = {
    "a",       "about",   "above",   "after",  "again",   "against",  "all",   "am",
    "an",      "and",     "any",     "are",    "as",      "at",       "be",    "because",
    "been",    "before",  "being",   "below",  "between", "both",     "but",   "by",
    "can",     "could",   "d",       "did",    "do",      "does",     "doing", "down",
    "during",  "each",    "few",     "for",    "from",    "further",  "had",   "has",
    "have",    "having",  "he",      "her",    "here",    "hers",     "herself", "him",
    "himself", "his",     "how",     "i",      "if",      "in",       "into",  "is",
    "it",      "its",     "itself",  "just",   "ll",      "m",        "me",    "more",
    "most",    "my",      "myself",  "no",     "nor",     "not",      "now",   "o",
    "of",      "off",     "on",      "once",   "only",    "or",       "other", "our",
    "ours",    "ourselves", "out",   "over",   "own",     "re",       "s",     "same",
    "she",     "should",  "so",      "some",   "such",    "t",        "than",  "that",
    "the",     "their",   "theirs",  "them",   "themselves", "then",  "there", "these",
    "they",    "this",    "those",   "through", "to",     "too",      "under", "until",
    "up",      "ve",      "very",    "was",    "we",      "were",     "what",  "when",
    "where",   "which",   "while",   "who",    "whom",    "why",      "will",  "with",
    "would",   "y",       "you",     "your",   "yours",   "yourself", "yourselves",
};

}  // namespace

std::string_view to_string(block_kind kind)
{
    switch (kind) {
    case block_kind::table: return "table";
    case block_kind::paragraph: return "paragraph";
    case block_kind::div: return "div";
    case block_kind::synthetic: return "synthetic";
    }
    return "unknown";
}

block make_block(std::size_t index, block_kind kind, std::vector<text_run> runs)
{
    block b;
    b.index = index;
    b.kind = kind;
    for (auto const& run : runs) {
        (run.linked ? b.linked_chars : b.unlinked_chars) += count_code_points(run.text);
    }
    b.text = join_runs(runs, false);
    b.runs = std::move(runs);
    return b;
}

raw_document parse_document(std::string bytes, std::string doc_id, std::filesystem::path source_path)
{
    if (bytes.empty()) {
        throw parse_error(doc_id + ": empty document");
    }
    if (!html::is_valid_utf8(bytes)) {
        throw parse_error(doc_id + ": byte stream is not valid UTF-8");
    }
    raw_document doc;
    doc.root = html::parse(bytes);
    doc.doc_id = std::move(doc_id);
    doc.source_path = std::move(source_path);
    doc.bytes = std::move(bytes);
    return doc;
}

std::vector<block> segment_blocks(raw_document const& doc)
{
    block_collector collector;
    collector.walk(doc.root, std::nullopt, false);
    return std::move(collector).finish();
}

std::size_t visible_chars(raw_document const& doc) { return count_visible(doc.root); }

double link_to_text_ratio(block const& b)
{
    auto total = b.linked_chars + b.unlinked_chars;
    if (total == 0) {
        return 0.0;
    }
    return static_cast<double>(b.linked_chars) / static_cast<double>(total);
}

std::string extract_block_text(block const& b, double tau)
{
    return join_runs(b.runs, link_to_text_ratio(b) > tau);
}

std::vector<std::string> split_sentences(std::string_view raw)
{
    // Normalize each line first so ' ' and '\n' are the only whitespace left.
    std::string text;
    std::size_t line_start = 0;
    while (line_start <= raw.size()) {
        auto nl = raw.find('\n', line_start);
        auto end = nl == std::string_view::npos ? raw.size() : nl;
        text += collapse_whitespace(raw.substr(line_start, end - line_start));
        if (nl == std::string_view::npos) {
            break;
        }
        text.push_back('\n');
        line_start = nl + 1;
    }
    std::vector<std::string> sentences;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        auto s = collapse_whitespace(std::string_view(text).substr(start, end - start));
        if (!s.empty()) {
            sentences.push_back(std::move(s));
        }
        start = end;
    };
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n') {
            emit(i);
            start = ++i;
            continue;
        }
        if (is_terminal(text[i])) {
            std::size_t j = i;
            while (j < text.size() && is_terminal(text[j])) {
                ++j;
            }
            if (j == text.size() || text[j] == ' ' || text[j] == '\n') {
                emit(j);
            }
            i = j;
            continue;
        }
        ++i;
    }
    emit(text.size());
    return sentences;
}

std::string dedupe_sentences(std::string_view text)
{
    std::vector<std::string> kept;
    std::unordered_set<std::string> seen;
    for (auto const& sentence : split_sentences(text)) {
        auto collapsed = collapse_repeated_phrases(sentence);
        if (seen.insert(fold_case(collapsed)).second) {
            kept.push_back(std::move(collapsed));
        }
    }
    std::string out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0) {
            out.push_back(is_terminal(kept[i - 1].back()) ? ' ' : '\n');
        }
        out += kept[i];
    }
    return out;
}

std::string fold_case(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t before = i;
        char32_t cp = next_code_point(text, i);
        char32_t folded = fold(cp);
        if (folded == cp) {
            out.append(text.substr(before, i - before));
        } else {
            html::append_utf8(out, folded);
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text, stop_words const& stops)
{
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!stops.contains(current)) {
                tokens.push_back(std::move(current));
            }
            current.clear();
        }
    };
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = next_code_point(text, i);
        if (is_word_char(cp)) {
            html::append_utf8(current, fold(cp));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

stop_words::stop_words() : m_default(true)
{
    for (auto w : default_stop_list) {
        m_words.emplace(w);
    }
}

stop_words::stop_words(std::vector<std::string> words)
{
    for (auto& w : words) {
        m_words.insert(fold_case(w));
    }
}

stop_words stop_words::load(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open stop-word file " + path.string());
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto word = collapse_whitespace(line);
        if (word.empty() || word.front() == '#') {
            continue;
        }
        words.push_back(std::move(word));
    }
    return stop_words(std::move(words));
}

bool stop_words::contains(std::string_view word) const
{
    return m_words.find(std::string(word)) != m_words.end();
}

std::vector<std::string> stop_words::words() const
{
    std::vector<std::string> out(m_words.begin(), m_words.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace acbr
