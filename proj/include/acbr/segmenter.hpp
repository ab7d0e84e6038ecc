#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "acbr/html.hpp"

namespace acbr {

struct raw_document {
    std::string doc_id;
    std::filesystem::path source_path;
    std::string bytes;
    html::node root;
};

enum class block_kind { table, paragraph, div, synthetic };

[[nodiscard]] std::string_view to_string(block_kind kind);

/// A stretch of visible text with whitespace collapsed. `break_before` marks a
/// heading/paragraph boundary between this run and the previous one.
struct text_run {
    std::string text;
    bool linked = false;
    bool break_before = false;

    bool operator==(text_run const&) const = default;
};

struct block {
    std::size_t index = 0;
    block_kind kind = block_kind::synthetic;
    std::size_t linked_chars = 0;
    std::size_t unlinked_chars = 0;
    std::string text;
    std::vector<text_run> runs;

    bool operator==(block const&) const = default;
};

/// Builds a block from runs, filling in the counts and the joined text.
[[nodiscard]] block make_block(std::size_t index, block_kind kind, std::vector<text_run> runs);

/// Validates and parses raw bytes. Throws parse_error on empty input or
/// bytes that are not UTF-8.
[[nodiscard]] raw_document
parse_document(std::string bytes, std::string doc_id, std::filesystem::path source_path = {});

/// One block per table/p/div element that directly holds visible text (text
/// reached through non-segmenting elements only), in document order. Text
/// outside every segmenting element forms a trailing synthetic block.
[[nodiscard]] std::vector<block> segment_blocks(raw_document const& doc);

/// Characters of visible text in the whole document, counted like block runs.
[[nodiscard]] std::size_t visible_chars(raw_document const& doc);

[[nodiscard]] double link_to_text_ratio(block const& b);

/// Default link-to-text threshold.
inline constexpr double default_tau = 0.5;

/// Block text with anchor text dropped when the link ratio exceeds `tau`.
/// Boundaries become '\n'. Empty result means the block is noise.
[[nodiscard]] std::string extract_block_text(block const& b, double tau);

/// Removes repeated sentences (first occurrence wins) and immediately repeated
/// phrases of three or more tokens inside a sentence. Comparison is
/// case-insensitive with whitespace collapsed. Idempotent.
[[nodiscard]] std::string dedupe_sentences(std::string_view text);

/// Splits text into sentences on '.', '!', '?' followed by whitespace or end,
/// and on '\n'. Whitespace inside sentences is collapsed.
[[nodiscard]] std::vector<std::string> split_sentences(std::string_view text);

class stop_words {
  public:
    /// The shipped English list.
    stop_words();
    explicit stop_words(std::vector<std::string> words);

    /// One word per line; blank lines and lines starting with '#' ignored.
    [[nodiscard]] static stop_words load(std::filesystem::path const& path);

    [[nodiscard]] bool contains(std::string_view word) const;
    /// Sorted, case-folded.
    [[nodiscard]] std::vector<std::string> words() const;
    [[nodiscard]] bool is_default() const { return m_default; }

  private:
    std::unordered_set<std::string> m_words;
    bool m_default = false;
};

/// Case-folds a UTF-8 string (ASCII and Latin-1 letters).
[[nodiscard]] std::string fold_case(std::string_view text);

/// Case-folded word tokens in order, punctuation stripped, stop words removed.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text, stop_words const& stops);

}  // namespace acbr
