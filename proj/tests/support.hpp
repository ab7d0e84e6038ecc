#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths it
// is used to check: the oracles recompute from plain data.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "acbr/casebase.hpp"
#include "acbr/lexicon.hpp"

namespace acbr::testing {

// Naive affordance counter: linear scan over every term of every topic,
// longest phrase wins at each position, misc = tokens no named topic covered.
inline std::vector<double> naive_affordance(std::vector<std::string> const& tokens, std::vector<topic> const& topics)
{
    std::vector<double> counts(topics.size(), 0.0);
    std::vector<bool> covered(tokens.size(), false);
    int misc = -1;
    for (std::size_t t = 0; t < topics.size(); ++t) {
        if (topics[t].miscellaneous) {
            misc = static_cast<int>(t);
            continue;
        }
        std::size_t i = 0;
        while (i < tokens.size()) {
            std::size_t best = 0;
            for (auto const& term : topics[t].terms) {
                std::vector<std::string> words;
                std::string w;
                for (char c : term) {
                    if (c == ' ') {
                        words.push_back(w);
                        w.clear();
                    } else {
                        w.push_back(c);
                    }
                }
                words.push_back(w);
                if (i + words.size() > tokens.size()) {
                    continue;
                }
                bool ok = true;
                for (std::size_t j = 0; j < words.size(); ++j) {
                    ok = ok && tokens[i + j] == words[j];
                }
                if (ok && words.size() > best) {
                    best = words.size();
                }
            }
            if (best == 0) {
                ++i;
            } else {
                counts[t] += 1.0;
                for (std::size_t j = i; j < i + best; ++j) {
                    covered[j] = true;
                }
                i += best;
            }
        }
    }
    if (misc >= 0) {
        counts[static_cast<std::size_t>(misc)] =
            static_cast<double>(std::count(covered.begin(), covered.end(), false));
    }
    return counts;
}

struct oracle_hit {
    std::string doc_id;
    double score;
};

// Exhaustive baseline scoring straight from the cases' problem descriptions.
inline std::vector<oracle_hit> brute_force_top_k(std::vector<std::string> const& query_terms,
                                                 std::vector<case_record> const& cases, std::size_t k)
{
    std::vector<std::string> distinct;
    for (auto const& t : query_terms) {
        if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) {
            distinct.push_back(t);
        }
    }
    double n = static_cast<double>(cases.size());
    std::vector<oracle_hit> hits;
    for (auto const& c : cases) {
        double sum = 0.0;
        std::size_t matched = 0;
        double norm = 1.0 / std::sqrt(static_cast<double>(c.prob_desc.size()));
        for (auto const& t : distinct) {
            std::uint32_t tf = 0;
            for (auto const& wt : c.prob_desc) {
                if (wt.term == t) {
                    tf = wt.tf;
                }
            }
            if (tf == 0) {
                continue;
            }
            double df = 0;
            for (auto const& other : cases) {
                for (auto const& wt : other.prob_desc) {
                    if (wt.term == t) {
                        df += 1;
                    }
                }
            }
            double idf = 1.0 + std::log(n / (df + 1.0));
            ++matched;
            sum += static_cast<double>(tf) * idf * idf * norm;
        }
        double score = distinct.empty() ? 0.0
                                        : static_cast<double>(matched) / static_cast<double>(distinct.size()) * sum;
        if (score > 0.0) {
            hits.push_back({c.doc_id, score});
        }
    }
    std::sort(hits.begin(), hits.end(), [](auto const& a, auto const& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    });
    if (hits.size() > k) {
        hits.resize(k);
    }
    return hits;
}

inline double naive_cosine(std::vector<double> const& a, std::vector<double> const& b)
{
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::string vocab_word(std::size_t i) { return "w" + std::to_string(i); }

// Random lexicon over vocab words w0..w(vocab-1); topic terms may overlap
// and some are two-word phrases when `phrases` is set.
inline lexicon random_lexicon(std::mt19937_64& rng, std::size_t vocab, bool phrases, bool with_misc)
{
    std::uniform_int_distribution<std::size_t> topics_dist(1, 6);
    std::uniform_int_distribution<std::size_t> terms_dist(1, 5);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::bernoulli_distribution phrase(phrases ? 0.3 : 0.0);
    std::vector<topic> topics;
    auto n = topics_dist(rng);
    for (std::size_t t = 0; t < n; ++t) {
        topic tp;
        tp.name = "T" + std::to_string(t);
        auto count = terms_dist(rng);
        for (std::size_t j = 0; j < count; ++j) {
            auto term = vocab_word(word(rng));
            if (phrase(rng)) {
                term += " " + vocab_word(word(rng));
            }
            tp.terms.push_back(term);
        }
        topics.push_back(tp);
    }
    if (with_misc) {
        std::uniform_int_distribution<std::size_t> at(0, topics.size());
        topics.insert(topics.begin() + static_cast<std::ptrdiff_t>(at(rng)), topic{"Misc", {}, true});
    }
    return lexicon(std::move(topics));
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t vocab, std::size_t max_len)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::vector<std::string> out(len(rng));
    for (auto& t : out) {
        t = vocab_word(word(rng));
    }
    return out;
}

// Random case base of up to `max_cases` cases built directly from term
// lists (no HTML), with random affordance counts.
inline case_base random_case_base(std::mt19937_64& rng, std::size_t max_cases, std::size_t vocab, std::size_t m)
{
    std::vector<topic> topics;
    for (std::size_t t = 0; t < m; ++t) {
        topics.push_back({"T" + std::to_string(t), {"topic" + std::to_string(t)}, false});
    }
    case_base cb{lexicon(std::move(topics))};
    std::uniform_int_distribution<std::size_t> n_cases(1, max_cases);
    std::uniform_int_distribution<std::size_t> n_terms(1, 8);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::uniform_int_distribution<std::uint32_t> tf(1, 4);
    std::uniform_int_distribution<int> count(0, 5);
    auto n = n_cases(rng);
    for (std::size_t c = 0; c < n; ++c) {
        case_record rec;
        char id[32];
        std::snprintf(id, sizeof id, "doc%03zu", c);
        rec.doc_id = id;
        std::map<std::string, std::uint32_t> terms;
        auto k = n_terms(rng);
        for (std::size_t j = 0; j < k; ++j) {
            terms[vocab_word(word(rng))] = tf(rng);
        }
        for (auto const& [t, f] : terms) {
            rec.prob_desc.push_back({t, static_cast<double>(f), f});
        }
        std::vector<double> av(m);
        for (auto& v : av) {
            v = count(rng);
        }
        rec.av = affordance_vector(av);
        rec.av_revised = rec.av;
        cb.cases.push_back(std::move(rec));
    }
    cb.stats.num_docs = n;
    return cb;
}

// Random, frequently malformed HTML: unclosed and misnested tags, anchors,
// entities, comments, scripts, stray '<'.
inline std::string random_html(std::mt19937_64& rng)
{
    static const std::vector<std::string> pieces = {
        "<div>", "</div>", "<p>", "</p>", "<table>", "<tr>", "<td>", "</table>", "<a href='x'>", "</a>",
        "<b>", "</i>", "<span class=\"a>b\">", "</span>", "<br>", "<h2>", "</h2>", "<!-- c <p> -->",
        "<script>if (a<b) {}</script>", "<style>p{}</style>", "beach ", "sand ", "temple ", "Goa. ",
        "hotel resorts ", "visit goa beach visit goa beach ", "&amp; ", "&#x41;", "&#1234567;", "&lt;p&gt;",
        "a < b ", "<", ">", "\n", "  ", "Hello! ", "Tiger? ", "&nbsp;", "<li>", "<ul>", "</ul>", "<img src=x/>",
        "<!DOCTYPE html>", "<p/>", "caf\xc3\xa9 ", "</p></p>", "<div><div><div>", "</a></a>",
    };
    std::uniform_int_distribution<std::size_t> len(1, 80);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string out;
    auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) {
        out += pieces[pick(rng)];
    }
    return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class temp_dir {
  public:
    temp_dir()
    {
        static std::atomic<int> counter{0};
        m_path = std::filesystem::temp_directory_path()
                 / ("acbr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    temp_dir(temp_dir const&) = delete;
    temp_dir& operator=(temp_dir const&) = delete;
    ~temp_dir()
    {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }

    [[nodiscard]] std::filesystem::path const& path() const { return m_path; }

    void write(std::string const& rel, std::string const& bytes) const
    {
        auto p = m_path / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << bytes;
    }

  private:
    std::filesystem::path m_path;
};

inline std::string read_file(std::filesystem::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace acbr::testing
