#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acbr/affordance.hpp"
#include "acbr/lexicon.hpp"
#include "acbr/segmenter.hpp"

namespace acbr {

struct weighted_term {
    std::string term;
    double weight = 0.0;  // tf * idf, 12 significant digits
    std::uint32_t tf = 0;

    bool operator==(weighted_term const&) const = default;
};

/// Document frequencies over admitted documents.
struct corpus_stats {
    std::size_t num_docs = 0;
    std::map<std::string, std::uint32_t> df;

    /// ln(1 + N / (1 + df)); unseen terms have df = 0.
    [[nodiscard]] double idf(std::string const& term) const;

    bool operator==(corpus_stats const&) const = default;
};

struct build_config {
    std::size_t k_terms = 20;
    double tau = default_tau;
    std::size_t k_retrieve = 10;
    double alpha = 0.0;
    double eta = 0.0;

    /// Throws input_error when a parameter is out of range.
    void validate() const;

    bool operator==(build_config const&) const = default;
};

struct case_record {
    std::string doc_id;
    std::vector<weighted_term> prob_desc;  // sorted by term
    affordance_vector av;                  // raw counts
    affordance_vector av_revised;

    bool operator==(case_record const&) const = default;
};

struct case_base {
    explicit case_base(lexicon lex) : lex(std::move(lex)) {}

    lexicon lex;
    /// Set when documents were tokenized with a non-default stop list.
    std::optional<std::vector<std::string>> custom_stop_words;
    build_config config;
    std::vector<case_record> cases;
    corpus_stats stats;

    [[nodiscard]] std::string fingerprint() const { return lex.fingerprint(); }
    /// The stop list documents were tokenized with; queries must use it too.
    [[nodiscard]] stop_words tokenizer_stop_words() const;

    bool operator==(case_base const&) const = default;
};

/// Rounds to 12 significant digits. Stored reals go through this so that the
/// text form reproduces them exactly.
[[nodiscard]] double round_sig12(double x);

/// The k distinct terms with highest tf*idf; ties broken by term ascending.
[[nodiscard]] std::vector<weighted_term>
select_top_k_terms(std::span<std::string const> tokens, corpus_stats const& stats, std::size_t k);

/// Token lists of the non-noise blocks of a document, in block order:
/// segment, drop anchor text past `tau`, dedupe sentences, tokenize.
/// Blocks that end up with no tokens are dropped.
[[nodiscard]] std::vector<std::vector<std::string>>
block_token_lists(raw_document const& doc, double tau, stop_words const& stops);

struct source_document {
    std::string doc_id;
    std::string bytes;
};

struct document_blocks {
    std::string doc_id;
    std::vector<std::vector<std::string>> blocks;
    std::optional<std::string> error;  // parse failure; document skipped

    [[nodiscard]] bool admitted() const { return !error && !blocks.empty(); }
    bool operator==(document_blocks const&) const = default;
};

/// Case from already extracted blocks; nullopt when no block survived.
[[nodiscard]] std::optional<case_record>
build_case(document_blocks const& doc, lexicon const& lex, build_config const& config,
           corpus_stats const& stats);

[[nodiscard]] std::optional<case_record>
build_case(raw_document const& doc, lexicon const& lex, build_config const& config,
           corpus_stats const& stats, stop_words const& stops);

[[nodiscard]] corpus_stats compute_corpus_stats(std::span<document_blocks const> docs);

// Per-document kernels. `threads` <= 0 uses the OpenMP default. The serial
// versions are the reference the parallel ones are tested against.

[[nodiscard]] std::vector<document_blocks>
extract_documents(std::span<source_document const> docs, double tau, stop_words const& stops,
                  int threads = 0);
[[nodiscard]] std::vector<document_blocks>
extract_documents_serial(std::span<source_document const> docs, double tau, stop_words const& stops);

[[nodiscard]] std::vector<std::optional<case_record>>
build_cases(std::span<document_blocks const> docs, lexicon const& lex, build_config const& config,
            corpus_stats const& stats, int threads = 0);
[[nodiscard]] std::vector<std::optional<case_record>>
build_cases_serial(std::span<document_blocks const> docs, lexicon const& lex,
                   build_config const& config, corpus_stats const& stats);

/// `.html`/`.htm` files under `dir`, doc_id = relative path with '/', sorted.
[[nodiscard]] std::vector<source_document> read_corpus(std::filesystem::path const& dir);

/// Two-pass build: stats over extracted block tokens, then one case per
/// admitted document in doc_id order. Skipped documents are logged to stderr.
/// Throws build_error when nothing is admitted.
[[nodiscard]] case_base populate_case_base(std::span<source_document const> docs, lexicon const& lex,
                                           build_config const& config, stop_words const& stops,
                                           int threads = 0);
[[nodiscard]] case_base populate_case_base(std::filesystem::path const& corpus_dir,
                                           lexicon const& lex, build_config const& config,
                                           stop_words const& stops, int threads = 0);

/// av_revised += eta * |av_revised| * normalize(query_av). `av` is untouched.
[[nodiscard]] case_record revise_case_affordance(case_record c, affordance_vector const& query_av,
                                                 double eta);

/// Line-delimited JSON: header, one line per case, corpus stats last.
[[nodiscard]] std::string serialize_case_base(case_base const& cb);
/// Throws format_error on malformed or truncated input.
[[nodiscard]] case_base parse_case_base(std::string_view text);

void save_case_base(case_base const& cb, std::filesystem::path const& path);
[[nodiscard]] case_base load_case_base(std::filesystem::path const& path);

/// Throws compatibility_error unless `cb` was built with `active`.
void check_compatible(case_base const& cb, lexicon const& active);

}  // namespace acbr
