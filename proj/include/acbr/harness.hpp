#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acbr/casebase.hpp"
#include "acbr/retrieval.hpp"

namespace acbr {

/// Parses `<top> <num>..</num> <title>..</title> <desc>..</desc> <narr>..</narr> </top>`
/// blocks. Closing field tags, desc and narr are optional. Throws format_error
/// on a missing or duplicate num, or a title with no terms after stop-wording.
[[nodiscard]] std::vector<query> parse_queries(std::string_view text, stop_words const& stops);
[[nodiscard]] std::vector<query> load_queries(std::filesystem::path const& path, stop_words const& stops);

/// Relevance judgments, `query_id<TAB>doc_id<TAB>0|1` per line.
class qrels {
  public:
    [[nodiscard]] static qrels parse(std::string_view text);
    [[nodiscard]] static qrels load(std::filesystem::path const& path);

    [[nodiscard]] bool relevant(std::string const& query_id, std::string const& doc_id) const;
    [[nodiscard]] std::size_t size() const { return m_labels.size(); }

  private:
    std::map<std::pair<std::string, std::string>, bool> m_labels;
};

/// Kendall tau-a between two orderings of the same set. Throws input_error if
/// the sets differ. Sets of size 0 or 1 give 1.
[[nodiscard]] double compare_rankings(std::span<std::string const> first, std::span<std::string const> second);

/// Precision cutoffs reported when qrels are supplied.
inline constexpr std::array<std::size_t, 4> precision_cutoffs{1, 3, 5, 10};

struct run_config {
    std::size_t k = 10;
    double alpha = 0.0;
    bool use_desc = false;
    bool use_revised = false;
    /// > 0 revises the pool's av_revised after every query, in query order,
    /// and later queries rank against the revised vectors.
    double eta = 0.0;
    int threads = 0;
};

struct report_row {
    std::string query_id;
    std::string doc_id;
    std::size_t baseline_rank = 0;
    std::size_t final_rank = 0;
    double baseline_score = 0.0;
    double affordance_cosine = 0.0;
    double final_score = 0.0;
};

struct summary_row {
    std::string query_id;
    std::size_t pool_size = 0;
    double kendall_tau = 1.0;
    std::vector<double> baseline_precision;  // per cutoff, only with qrels
    std::vector<double> final_precision;
};

struct run_report {
    std::vector<report_row> rows;        // by (query_id, final_rank)
    std::vector<summary_row> summary;    // by query_id
    build_config config;                 // echo of the case base's build config
    run_config run;
    std::string lexicon_fingerprint;
    bool with_qrels = false;
};

/// For each query: retrieve_top_k, query affordance, rerank. Queries run in
/// parallel unless eta > 0. Output order does not depend on thread count.
[[nodiscard]] run_report run_experiment(case_base& cb, inverted_index const& index,
                                        std::span<query const> queries, run_config const& config,
                                        qrels const* judgments = nullptr);

/// Writes rows.csv, summary.csv and config.json into `dir` (created if needed).
void emit_report(run_report const& report, std::filesystem::path const& dir);

[[nodiscard]] std::string rows_csv(run_report const& report);
[[nodiscard]] std::string summary_csv(run_report const& report);

}  // namespace acbr
