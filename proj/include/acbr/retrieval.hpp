#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "acbr/affordance.hpp"
#include "acbr/casebase.hpp"

namespace acbr {

struct query {
    std::string id;
    std::string title_text;
    std::vector<std::string> title;
    std::vector<std::string> desc;
    std::string narr;

    /// Title tokens, followed by desc tokens when `use_desc` is set.
    [[nodiscard]] std::vector<std::string> terms(bool use_desc) const;
};

struct posting {
    std::uint32_t case_index;
    std::uint32_t tf;

    bool operator==(posting const&) const = default;
};

/// Postings over problem-description terms. Postings are sorted by case index.
class inverted_index {
  public:
    /// Throws build_error on an empty case base.
    explicit inverted_index(case_base const& cb);

    [[nodiscard]] std::size_t num_cases() const { return m_norms.size(); }
    [[nodiscard]] std::span<posting const> postings(std::string const& term) const;
    [[nodiscard]] std::size_t df(std::string const& term) const { return postings(term).size(); }
    /// 1 + ln(N / (df + 1))
    [[nodiscard]] double idf(std::string const& term) const;
    /// 1 / sqrt(|prob_desc|)
    [[nodiscard]] double doc_norm(std::size_t case_index) const { return m_norms[case_index]; }
    /// Stored tf of `term` in a case, 0 when absent.
    [[nodiscard]] std::uint32_t tf(std::string const& term, std::size_t case_index) const;
    [[nodiscard]] std::size_t num_terms() const { return m_postings.size(); }

    bool operator==(inverted_index const&) const = default;

  private:
    std::unordered_map<std::string, std::vector<posting>> m_postings;
    std::vector<double> m_norms;
};

[[nodiscard]] inverted_index build_index(case_base const& cb);

/// Distinct terms in first-occurrence order. Scores sum over them in this
/// order so every scoring path produces bit-identical values.
[[nodiscard]] std::vector<std::string> distinct_terms(std::span<std::string const> query_terms);

/// coord(q,c) * sum over matching t of tf * idf^2 * norm; queryNorm and
/// boosts are 1.
[[nodiscard]] double
baseline_score(std::span<std::string const> query_terms, std::size_t case_index, inverted_index const& index);

struct candidate {
    std::size_t case_index;
    std::string doc_id;
    double baseline_score;

    bool operator==(candidate const&) const = default;
};

/// Top k cases by baseline score (ties by doc_id), nonzero scores only.
/// Term-at-a-time accumulation over the postings.
[[nodiscard]] std::vector<candidate> retrieve_top_k(std::span<std::string const> query_terms,
                                                    inverted_index const& index, case_base const& cb,
                                                    std::size_t k);

// Exhaustive per-case scoring: OpenMP across cases, and the serial reference.
[[nodiscard]] std::vector<double>
score_all_cases(std::span<std::string const> query_terms, inverted_index const& index, int threads = 0);
[[nodiscard]] std::vector<double>
score_all_cases_serial(std::span<std::string const> query_terms, inverted_index const& index);

struct ranked_entry {
    std::string doc_id;
    std::size_t case_index = 0;
    double baseline_score = 0.0;
    double affordance_cosine = 0.0;
    double final_score = 0.0;
    std::size_t baseline_rank = 0;
    std::size_t final_rank = 0;

    bool operator==(ranked_entry const&) const = default;
};

struct ranked_result {
    std::vector<ranked_entry> entries;  // by final_score desc, doc_id asc

    bool operator==(ranked_result const&) const = default;
};

/// final = alpha * minmax(baseline over the pool) + (1 - alpha) * cosine.
/// A pool whose baseline scores are all equal normalizes them to 1.
[[nodiscard]] ranked_result rerank(std::span<candidate const> candidates, affordance_vector const& query_av,
                                   case_base const& cb, double alpha, bool use_revised);

}  // namespace acbr
