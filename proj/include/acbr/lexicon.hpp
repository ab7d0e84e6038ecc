#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace acbr {

/// One affordance. Terms are case-folded, whitespace-collapsed, unique, in
/// first-seen order. A term with spaces matches as a contiguous token phrase.
struct topic {
    std::string name;
    std::vector<std::string> terms;
    bool miscellaneous = false;

    bool operator==(topic const&) const = default;
};

/// Ordered topic list. Element i of every affordance vector refers to topic i.
///
/// File format, one topic per line:
///
///     Beaches<TAB>beach,sand,surf
///     Miscellaneous<TAB>*
///
/// Lines starting with '#' and blank lines are skipped. `*` marks the
/// miscellaneous topic, which counts tokens no other topic matched.
class lexicon {
  public:
    /// Throws format_error on an empty list, duplicate names, more than one
    /// miscellaneous topic, or a named topic without terms.
    explicit lexicon(std::vector<topic> topics);

    [[nodiscard]] static lexicon parse(std::string_view text);
    [[nodiscard]] static lexicon load(std::filesystem::path const& path);

    /// Canonical text form; parse(serialize()) == *this.
    [[nodiscard]] std::string serialize() const;
    /// FNV-1a 64 of serialize(), as 16 hex digits.
    [[nodiscard]] std::string fingerprint() const;

    [[nodiscard]] std::size_t size() const { return m_topics.size(); }
    [[nodiscard]] std::vector<topic> const& topics() const { return m_topics; }
    [[nodiscard]] topic const& operator[](std::size_t i) const { return m_topics[i]; }
    [[nodiscard]] std::optional<std::size_t> miscellaneous_index() const { return m_misc; }

    /// Occurrences of topic `index`'s terms in `tokens`. Phrases match greedily,
    /// longest first, left to right. For the miscellaneous topic: tokens not
    /// covered by any named topic's matches.
    [[nodiscard]] std::size_t match_count(std::span<std::string const> tokens, std::size_t index) const;

    /// match_count for every topic at once.
    [[nodiscard]] std::vector<std::size_t> match_counts(std::span<std::string const> tokens) const;

    bool operator==(lexicon const& other) const { return m_topics == other.m_topics; }

  private:
    using phrase = std::vector<std::string>;

    // first token -> phrases starting with it, longest first
    using phrase_table = std::unordered_map<std::string, std::vector<phrase>>;

    std::size_t scan_topic(std::span<std::string const> tokens, std::size_t index,
                           std::vector<char>* covered) const;

    std::vector<topic> m_topics;
    std::vector<phrase_table> m_tables;
    std::optional<std::size_t> m_misc;
};

}  // namespace acbr
