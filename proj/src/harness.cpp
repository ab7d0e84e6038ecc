#include "acbr/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "acbr/error.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace acbr {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Text after <tag> up to the next markup; empty optional when the tag is absent.
std::optional<std::string> field(std::string const& block, std::string const& lowered, std::string const& tag)
{
    auto open = lowered.find("<" + tag + ">");
    if (open == std::string::npos) {
        return std::nullopt;
    }
    auto start = open + tag.size() + 2;
    auto end = block.find('<', start);
    if (end == std::string::npos) {
        end = block.size();
    }
    return trim(html::decode_entities(std::string_view(block).substr(start, end - start)));
}

std::string strip_label(std::string text, std::string_view label)
{
    if (lower(text.substr(0, label.size())) == label) {
        text = trim(std::string_view(text).substr(label.size()));
    }
    return text;
}

std::string read_file(std::filesystem::path const& path, char const* what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error(std::string("cannot open ") + what + " " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixed6(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_file(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw io_error("write failed: " + path.string());
    }
}

double precision_at(std::vector<std::string> const& order, std::size_t cutoff, qrels const& judgments,
                    std::string const& query_id)
{
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(cutoff, order.size()); ++i) {
        hits += judgments.relevant(query_id, order[i]) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(cutoff);
}

struct query_outcome {
    ranked_result ranking;
};

}  // namespace

std::vector<query> parse_queries(std::string_view text, stop_words const& stops)
{
    std::string source(text);
    std::string lowered = lower(source);
    std::vector<query> queries;
    std::set<std::string> ids;

    std::size_t pos = 0;
    while ((pos = lowered.find("<top>", pos)) != std::string::npos) {
        auto end = lowered.find("</top>", pos);
        auto next = lowered.find("<top>", pos + 5);
        if (end == std::string::npos || (next != std::string::npos && next < end)) {
            end = next == std::string::npos ? source.size() : next;
        }
        auto block = source.substr(pos, end - pos);
        auto block_lower = lowered.substr(pos, end - pos);
        pos = end;

        query q;
        auto num = field(block, block_lower, "num");
        if (!num || strip_label(*num, "number:").empty()) {
            throw format_error("query file: topic without <num>");
        }
        q.id = strip_label(*num, "number:");
        if (!ids.insert(q.id).second) {
            throw format_error("query file: duplicate query " + q.id);
        }
        q.title_text = strip_label(field(block, block_lower, "title").value_or(""), "topic:");
        q.title = tokenize(q.title_text, stops);
        if (q.title.empty()) {
            throw format_error("query " + q.id + ": title has no terms after stop-word removal");
        }
        q.desc = tokenize(strip_label(field(block, block_lower, "desc").value_or(""), "description:"), stops);
        q.narr = strip_label(field(block, block_lower, "narr").value_or(""), "narrative:");
        queries.push_back(std::move(q));
    }
    if (queries.empty()) {
        throw format_error("query file: no <top> topics");
    }
    return queries;
}

std::vector<query> load_queries(std::filesystem::path const& path, stop_words const& stops)
{
    return parse_queries(read_file(path, "query file"), stops);
}

qrels qrels::parse(std::string_view text)
{
    qrels out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw format_error("qrels line " + std::to_string(line_no) + ": expected three TAB-separated fields");
        }
        auto label = trim(std::string_view(line).substr(t2 + 1));
        if (label != "0" && label != "1") {
            throw format_error("qrels line " + std::to_string(line_no) + ": label must be 0 or 1");
        }
        out.m_labels[{trim(std::string_view(line).substr(0, t1)),
                      trim(std::string_view(line).substr(t1 + 1, t2 - t1 - 1))}] = label == "1";
    }
    return out;
}

qrels qrels::load(std::filesystem::path const& path) { return parse(read_file(path, "qrels")); }

bool qrels::relevant(std::string const& query_id, std::string const& doc_id) const
{
    auto it = m_labels.find({query_id, doc_id});
    return it != m_labels.end() && it->second;
}

double compare_rankings(std::span<std::string const> first, std::span<std::string const> second)
{
    std::vector<std::string> a(first.begin(), first.end());
    std::vector<std::string> b(second.begin(), second.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end()) {
        throw input_error("rankings are not permutations of the same set");
    }
    auto n = first.size();
    if (n < 2) {
        return 1.0;
    }
    std::map<std::string, std::size_t> pos_in_second;
    for (std::size_t i = 0; i < n; ++i) {
        pos_in_second[second[i]] = i;
    }
    long long concordant = 0;
    long long discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // first ranks i above j; check the second ordering
            if (pos_in_second[first[i]] < pos_in_second[first[j]]) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    auto pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(concordant - discordant) / pairs;
}

run_report run_experiment(case_base& cb, inverted_index const& index, std::span<query const> queries,
                          run_config const& config, qrels const* judgments)
{
    if (index.num_cases() != cb.cases.size()) {
        throw input_error("index does not belong to this case base");
    }
    bool const revising = config.eta > 0.0;
    bool const use_revised = config.use_revised || revising;

    std::vector<query_outcome> outcomes(queries.size());
    auto run_one = [&](std::size_t i) {
        auto terms = queries[i].terms(config.use_desc);
        auto pool = retrieve_top_k(terms, index, cb, config.k);
        auto query_av = compute_query_affordance(terms, cb.lex);
        outcomes[i].ranking = rerank(pool, query_av, cb, config.alpha, use_revised);
        if (revising) {
            for (auto const& cand : pool) {
                cb.cases[cand.case_index] = revise_case_affordance(cb.cases[cand.case_index], query_av, config.eta);
            }
        }
    };
    if (revising) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            run_one(i);
        }
    } else {
        detail::parallel_for(queries.size(), config.threads, run_one);
    }

    run_report report;
    report.config = cb.config;
    report.run = config;
    report.lexicon_fingerprint = cb.fingerprint();
    report.with_qrels = judgments != nullptr;

    for (std::size_t i = 0; i < queries.size(); ++i) {
        auto const& q = queries[i];
        auto const& entries = outcomes[i].ranking.entries;
        std::vector<std::string> baseline_order(entries.size());
        std::vector<std::string> final_order;
        for (auto const& e : entries) {
            baseline_order[e.baseline_rank - 1] = e.doc_id;
            final_order.push_back(e.doc_id);
            report.rows.push_back({q.id, e.doc_id, e.baseline_rank, e.final_rank, e.baseline_score,
                                   e.affordance_cosine, e.final_score});
        }
        summary_row s;
        s.query_id = q.id;
        s.pool_size = entries.size();
        s.kendall_tau = compare_rankings(baseline_order, final_order);
        if (judgments != nullptr) {
            for (auto cutoff : precision_cutoffs) {
                s.baseline_precision.push_back(precision_at(baseline_order, cutoff, *judgments, q.id));
                s.final_precision.push_back(precision_at(final_order, cutoff, *judgments, q.id));
            }
        }
        report.summary.push_back(std::move(s));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](auto const& a, auto const& b) {
        if (a.query_id != b.query_id) {
            return a.query_id < b.query_id;
        }
        return a.final_rank < b.final_rank;
    });
    std::stable_sort(report.summary.begin(), report.summary.end(), [](auto const& a, auto const& b) {
        return a.query_id < b.query_id;
    });
    return report;
}

std::string rows_csv(run_report const& report)
{
    std::string out = "query_id,doc_id,baseline_rank,final_rank,baseline_score,affordance_cosine,final_score\n";
    for (auto const& r : report.rows) {
        out += csv_field(r.query_id) + ',' + csv_field(r.doc_id) + ',' + std::to_string(r.baseline_rank) + ','
            + std::to_string(r.final_rank) + ',' + fixed6(r.baseline_score) + ',' + fixed6(r.affordance_cosine)
            + ',' + fixed6(r.final_score) + '\n';
    }
    return out;
}

std::string summary_csv(run_report const& report)
{
    std::string out = "query_id,pool_size,kendall_tau";
    if (report.with_qrels) {
        for (auto cutoff : precision_cutoffs) {
            out += ",baseline_p" + std::to_string(cutoff) + ",final_p" + std::to_string(cutoff);
        }
    }
    out.push_back('\n');
    for (auto const& s : report.summary) {
        out += csv_field(s.query_id) + ',' + std::to_string(s.pool_size) + ',' + fixed6(s.kendall_tau);
        for (std::size_t i = 0; i < s.baseline_precision.size(); ++i) {
            out += ',' + fixed6(s.baseline_precision[i]) + ',' + fixed6(s.final_precision[i]);
        }
        out.push_back('\n');
    }
    return out;
}

void emit_report(run_report const& report, std::filesystem::path const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw io_error("cannot create " + dir.string() + ": " + ec.message());
    }
    write_file(dir / "rows.csv", rows_csv(report));
    write_file(dir / "summary.csv", summary_csv(report));

    nlohmann::json cfg;
    cfg["lexicon_fingerprint"] = report.lexicon_fingerprint;
    cfg["build"] = {
        {"k_terms", report.config.k_terms},
        {"tau", report.config.tau},
        {"k_retrieve", report.config.k_retrieve},
        {"alpha", report.config.alpha},
        {"eta", report.config.eta},
    };
    cfg["run"] = {
        {"k", report.run.k},
        {"alpha", report.run.alpha},
        {"use_desc", report.run.use_desc},
        {"use_revised", report.run.use_revised},
        {"eta", report.run.eta},
    };
    cfg["qrels"] = report.with_qrels;
    write_file(dir / "config.json", cfg.dump(2) + "\n");
}

}  // namespace acbr
