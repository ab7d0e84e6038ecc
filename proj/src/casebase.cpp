#include "acbr/casebase.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "acbr/error.hpp"
#include "parallel.hpp"

namespace acbr {

namespace {

document_blocks extract_one(source_document const& src, double tau, stop_words const& stops)
{
    document_blocks out;
    out.doc_id = src.doc_id;
    try {
        auto doc = parse_document(src.bytes, src.doc_id);
        out.blocks = block_token_lists(doc, tau, stops);
    } catch (input_error const& e) {
        out.error = e.what();
    }
    return out;
}

bool has_html_extension(std::filesystem::path const& p)
{
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return ext == ".html" || ext == ".htm";
}

}  // namespace

double corpus_stats::idf(std::string const& term) const
{
    auto it = df.find(term);
    double d = it == df.end() ? 0.0 : static_cast<double>(it->second);
    return std::log(1.0 + static_cast<double>(num_docs) / (1.0 + d));
}

void build_config::validate() const
{
    if (k_terms < 1) {
        throw input_error("k_terms must be >= 1");
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw input_error("tau must lie in [0, 1]");
    }
    if (k_retrieve < 1) {
        throw input_error("k must be >= 1");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw input_error("alpha must lie in [0, 1]");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw input_error("eta must lie in [0, 1]");
    }
}

stop_words case_base::tokenizer_stop_words() const
{
    return custom_stop_words ? stop_words(*custom_stop_words) : stop_words();
}

double round_sig12(double x)
{
    if (x == 0.0 || !std::isfinite(x)) {
        return x;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::vector<weighted_term>
select_top_k_terms(std::span<std::string const> tokens, corpus_stats const& stats, std::size_t k)
{
    std::map<std::string, std::uint32_t> tf;
    for (auto const& t : tokens) {
        ++tf[t];
    }
    std::vector<weighted_term> terms;
    terms.reserve(tf.size());
    for (auto const& [term, count] : tf) {
        terms.push_back({term, round_sig12(count * stats.idf(term)), count});
    }
    // map order is already term-ascending, so a stable sort keeps the tie-break
    std::stable_sort(terms.begin(), terms.end(), [](auto const& a, auto const& b) {
        return a.weight > b.weight;
    });
    if (terms.size() > k) {
        terms.resize(k);
    }
    return terms;
}

std::vector<std::vector<std::string>>
block_token_lists(raw_document const& doc, double tau, stop_words const& stops)
{
    std::vector<std::vector<std::string>> out;
    for (auto const& b : segment_blocks(doc)) {
        auto text = extract_block_text(b, tau);
        if (text.empty()) {
            continue;
        }
        auto tokens = tokenize(dedupe_sentences(text), stops);
        if (!tokens.empty()) {
            out.push_back(std::move(tokens));
        }
    }
    return out;
}

std::optional<case_record> build_case(document_blocks const& doc, lexicon const& lex,
                                      build_config const& config, corpus_stats const& stats)
{
    if (!doc.admitted()) {
        return std::nullopt;
    }
    std::map<std::string, weighted_term> merged;
    std::vector<affordance_vector> block_avs;
    block_avs.reserve(doc.blocks.size());
    for (auto const& tokens : doc.blocks) {
        for (auto& wt : select_top_k_terms(tokens, stats, config.k_terms)) {
            auto [it, inserted] = merged.try_emplace(wt.term, wt);
            if (!inserted && wt.weight > it->second.weight) {
                it->second = wt;
            }
        }
        block_avs.push_back(compute_block_affordance(tokens, lex));
    }

    case_record c;
    c.doc_id = doc.doc_id;
    for (auto& [term, wt] : merged) {
        c.prob_desc.push_back(std::move(wt));
    }
    c.av = compute_doc_affordance(block_avs, lex.size());
    c.av_revised = c.av;
    return c;
}

std::optional<case_record> build_case(raw_document const& doc, lexicon const& lex,
                                      build_config const& config, corpus_stats const& stats,
                                      stop_words const& stops)
{
    document_blocks blocks{doc.doc_id, block_token_lists(doc, config.tau, stops), std::nullopt};
    return build_case(blocks, lex, config, stats);
}

corpus_stats compute_corpus_stats(std::span<document_blocks const> docs)
{
    corpus_stats stats;
    for (auto const& doc : docs) {
        if (!doc.admitted()) {
            continue;
        }
        ++stats.num_docs;
        std::vector<std::string> distinct;
        for (auto const& tokens : doc.blocks) {
            distinct.insert(distinct.end(), tokens.begin(), tokens.end());
        }
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (auto const& term : distinct) {
            ++stats.df[term];
        }
    }
    return stats;
}

std::vector<document_blocks>
extract_documents(std::span<source_document const> docs, double tau, stop_words const& stops, int threads)
{
    std::vector<document_blocks> out(docs.size());
    detail::parallel_for(docs.size(), threads, [&](std::size_t i) {
        out[i] = extract_one(docs[i], tau, stops);
    });
    return out;
}

std::vector<document_blocks>
extract_documents_serial(std::span<source_document const> docs, double tau, stop_words const& stops)
{
    std::vector<document_blocks> out;
    out.reserve(docs.size());
    for (auto const& d : docs) {
        out.push_back(extract_one(d, tau, stops));
    }
    return out;
}

std::vector<std::optional<case_record>>
build_cases(std::span<document_blocks const> docs, lexicon const& lex, build_config const& config,
            corpus_stats const& stats, int threads)
{
    std::vector<std::optional<case_record>> out(docs.size());
    detail::parallel_for(docs.size(), threads, [&](std::size_t i) {
        out[i] = build_case(docs[i], lex, config, stats);
    });
    return out;
}

std::vector<std::optional<case_record>>
build_cases_serial(std::span<document_blocks const> docs, lexicon const& lex,
                   build_config const& config, corpus_stats const& stats)
{
    std::vector<std::optional<case_record>> out;
    out.reserve(docs.size());
    for (auto const& d : docs) {
        out.push_back(build_case(d, lex, config, stats));
    }
    return out;
}

std::vector<source_document> read_corpus(std::filesystem::path const& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw io_error("corpus directory not found: " + dir.string());
    }
    std::vector<source_document> docs;
    for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (!it->is_regular_file() || !has_html_extension(it->path())) {
            continue;
        }
        std::ifstream in(it->path(), std::ios::binary);
        if (!in) {
            throw io_error("cannot read " + it->path().string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        docs.push_back({fs::relative(it->path(), dir).generic_string(), buf.str()});
    }
    if (ec) {
        throw io_error("cannot list " + dir.string() + ": " + ec.message());
    }
    std::sort(docs.begin(), docs.end(), [](auto const& a, auto const& b) { return a.doc_id < b.doc_id; });
    return docs;
}

case_base populate_case_base(std::span<source_document const> docs, lexicon const& lex,
                             build_config const& config, stop_words const& stops, int threads)
{
    config.validate();
    auto extracted = extract_documents(docs, config.tau, stops, threads);
    auto stats = compute_corpus_stats(extracted);
    auto built = build_cases(extracted, lex, config, stats, threads);

    case_base cb(lex);
    cb.config = config;
    cb.stats = std::move(stats);
    if (!stops.is_default()) {
        cb.custom_stop_words = stops.words();
    }
    for (std::size_t i = 0; i < built.size(); ++i) {
        if (built[i]) {
            cb.cases.push_back(std::move(*built[i]));
        } else if (extracted[i].error) {
            std::cerr << "skip " << extracted[i].doc_id << ": " << *extracted[i].error << '\n';
        } else {
            std::cerr << "skip " << extracted[i].doc_id << ": no content after filtering\n";
        }
    }
    std::sort(cb.cases.begin(), cb.cases.end(), [](auto const& a, auto const& b) { return a.doc_id < b.doc_id; });
    if (cb.cases.empty()) {
        throw build_error("no document produced a case");
    }
    return cb;
}

case_base populate_case_base(std::filesystem::path const& corpus_dir, lexicon const& lex,
                             build_config const& config, stop_words const& stops, int threads)
{
    auto docs = read_corpus(corpus_dir);
    return populate_case_base(docs, lex, config, stops, threads);
}

case_record revise_case_affordance(case_record c, affordance_vector const& query_av, double eta)
{
    if (query_av.size() != c.av_revised.size()) {
        throw dimension_error("query affordance has dimension " + std::to_string(query_av.size())
                              + ", case has " + std::to_string(c.av_revised.size()));
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0, 1]");
    }
    double len = c.av_revised.norm();
    if (eta == 0.0 || len == 0.0 || query_av.is_zero()) {
        return c;
    }
    auto direction = normalize_av(query_av);
    std::vector<double> values(c.av_revised.values());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = round_sig12(values[i] + eta * len * direction[i]);
    }
    c.av_revised = affordance_vector(std::move(values));
    return c;
}

void check_compatible(case_base const& cb, lexicon const& active)
{
    if (cb.fingerprint() != active.fingerprint()) {
        throw compatibility_error("case base was built with lexicon " + cb.fingerprint() + " (m="
                                  + std::to_string(cb.lex.size()) + "), active lexicon is "
                                  + active.fingerprint() + " (m=" + std::to_string(active.size()) + ")");
    }
}

}  // namespace acbr
