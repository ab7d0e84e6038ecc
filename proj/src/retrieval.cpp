#include "acbr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "acbr/error.hpp"
#include "parallel.hpp"

namespace acbr {

namespace {

double term_contribution(std::uint32_t tf, double idf, double norm)
{
    return static_cast<double>(tf) * idf * idf * norm;
}

bool by_score_then_id(candidate const& a, candidate const& b)
{
    if (a.baseline_score != b.baseline_score) {
        return a.baseline_score > b.baseline_score;
    }
    return a.doc_id < b.doc_id;
}

}  // namespace

std::vector<std::string> query::terms(bool use_desc) const
{
    auto out = title;
    if (use_desc) {
        out.insert(out.end(), desc.begin(), desc.end());
    }
    return out;
}

inverted_index::inverted_index(case_base const& cb)
{
    if (cb.cases.empty()) {
        throw build_error("cannot index an empty case base");
    }
    m_norms.reserve(cb.cases.size());
    for (std::size_t c = 0; c < cb.cases.size(); ++c) {
        auto const& pd = cb.cases[c].prob_desc;
        m_norms.push_back(pd.empty() ? 0.0 : 1.0 / std::sqrt(static_cast<double>(pd.size())));
        for (auto const& wt : pd) {
            m_postings[wt.term].push_back({static_cast<std::uint32_t>(c), wt.tf});
        }
    }
}

std::span<posting const> inverted_index::postings(std::string const& term) const
{
    auto it = m_postings.find(term);
    if (it == m_postings.end()) {
        return {};
    }
    return it->second;
}

double inverted_index::idf(std::string const& term) const
{
    return 1.0 + std::log(static_cast<double>(num_cases()) / (static_cast<double>(df(term)) + 1.0));
}

std::uint32_t inverted_index::tf(std::string const& term, std::size_t case_index) const
{
    auto list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), case_index, [](posting const& p, std::size_t c) {
        return p.case_index < c;
    });
    return it != list.end() && it->case_index == case_index ? it->tf : 0;
}

inverted_index build_index(case_base const& cb) { return inverted_index(cb); }

std::vector<std::string> distinct_terms(std::span<std::string const> query_terms)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto const& t : query_terms) {
        if (seen.insert(t).second) {
            out.push_back(t);
        }
    }
    return out;
}

double baseline_score(std::span<std::string const> query_terms, std::size_t case_index,
                      inverted_index const& index)
{
    auto terms = distinct_terms(query_terms);
    if (terms.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t matched = 0;
    for (auto const& t : terms) {
        auto tf = index.tf(t, case_index);
        if (tf == 0) {
            continue;
        }
        ++matched;
        sum += term_contribution(tf, index.idf(t), index.doc_norm(case_index));
    }
    double coord = static_cast<double>(matched) / static_cast<double>(terms.size());
    return coord * sum;
}

std::vector<candidate> retrieve_top_k(std::span<std::string const> query_terms, inverted_index const& index,
                                      case_base const& cb, std::size_t k)
{
    auto terms = distinct_terms(query_terms);
    std::vector<double> acc(index.num_cases(), 0.0);
    std::vector<std::uint32_t> matched(index.num_cases(), 0);
    for (auto const& t : terms) {
        double idf = index.idf(t);
        for (auto const& p : index.postings(t)) {
            acc[p.case_index] += term_contribution(p.tf, idf, index.doc_norm(p.case_index));
            ++matched[p.case_index];
        }
    }

    std::vector<candidate> out;
    for (std::size_t c = 0; c < acc.size(); ++c) {
        if (matched[c] == 0) {
            continue;
        }
        double coord = static_cast<double>(matched[c]) / static_cast<double>(terms.size());
        double score = coord * acc[c];
        if (score > 0.0) {
            out.push_back({c, cb.cases[c].doc_id, score});
        }
    }
    auto keep = std::min(k, out.size());
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), by_score_then_id);
    out.resize(keep);
    return out;
}

std::vector<double>
score_all_cases(std::span<std::string const> query_terms, inverted_index const& index, int threads)
{
    std::vector<double> scores(index.num_cases(), 0.0);
    detail::parallel_for(scores.size(), threads, [&](std::size_t c) {
        scores[c] = baseline_score(query_terms, c, index);
    });
    return scores;
}

std::vector<double> score_all_cases_serial(std::span<std::string const> query_terms, inverted_index const& index)
{
    std::vector<double> scores;
    scores.reserve(index.num_cases());
    for (std::size_t c = 0; c < index.num_cases(); ++c) {
        scores.push_back(baseline_score(query_terms, c, index));
    }
    return scores;
}

ranked_result rerank(std::span<candidate const> candidates, affordance_vector const& query_av, case_base const& cb,
                     double alpha, bool use_revised)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    ranked_result result;
    if (candidates.empty()) {
        return result;
    }
    auto [lo_it, hi_it] = std::minmax_element(candidates.begin(), candidates.end(), [](auto const& a, auto const& b) {
        return a.baseline_score < b.baseline_score;
    });
    double lo = lo_it->baseline_score;
    double range = hi_it->baseline_score - lo;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto const& cand = candidates[i];
        auto const& c = cb.cases.at(cand.case_index);
        ranked_entry e;
        e.doc_id = cand.doc_id;
        e.case_index = cand.case_index;
        e.baseline_score = cand.baseline_score;
        e.baseline_rank = i + 1;
        e.affordance_cosine = cosine_sim(query_av, use_revised ? c.av_revised : c.av);
        double normalized = range > 0.0 ? (cand.baseline_score - lo) / range : 1.0;
        e.final_score = alpha * normalized + (1.0 - alpha) * e.affordance_cosine;
        result.entries.push_back(std::move(e));
    }
    std::sort(result.entries.begin(), result.entries.end(), [](auto const& a, auto const& b) {
        if (a.final_score != b.final_score) {
            return a.final_score > b.final_score;
        }
        return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        result.entries[i].final_rank = i + 1;
    }
    return result;
}

}  // namespace acbr
