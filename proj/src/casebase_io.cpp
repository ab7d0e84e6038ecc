#include <fstream>
#include <sstream>

#include "json.hpp"

#include "acbr/casebase.hpp"
#include "acbr/error.hpp"

namespace acbr {

namespace {

using json = nlohmann::json;

constexpr std::string_view format_tag = "acbr-casebase/1";

std::string dump(json const& j)
{
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json av_to_json(affordance_vector const& av)
{
    return json(av.values());
}

affordance_vector av_from_json(json const& j, std::size_t m, std::string const& doc_id)
{
    auto values = j.get<std::vector<double>>();
    if (values.size() != m) {
        throw format_error("case " + doc_id + ": affordance vector has " + std::to_string(values.size())
                           + " elements, header says m=" + std::to_string(m));
    }
    try {
        return affordance_vector(std::move(values));
    } catch (std::invalid_argument const& e) {
        throw format_error("case " + doc_id + ": " + e.what());
    }
}

}  // namespace

std::string serialize_case_base(case_base const& cb)
{
    std::string out;

    json header;
    header["type"] = "header";
    header["format"] = format_tag;
    header["lexicon_fingerprint"] = cb.fingerprint();
    header["lexicon"] = cb.lex.serialize();
    header["m"] = cb.lex.size();
    header["N"] = cb.stats.num_docs;
    header["cases"] = cb.cases.size();
    header["config"] = {
        {"k_terms", cb.config.k_terms},
        {"tau", cb.config.tau},
        {"k_retrieve", cb.config.k_retrieve},
        {"alpha", cb.config.alpha},
        {"eta", cb.config.eta},
    };
    header["stop_words"] = cb.custom_stop_words ? json(*cb.custom_stop_words) : json(nullptr);
    out += dump(header);
    out.push_back('\n');

    for (auto const& c : cb.cases) {
        json line;
        line["type"] = "case";
        line["doc_id"] = c.doc_id;
        json terms = json::array();
        for (auto const& wt : c.prob_desc) {
            terms.push_back(json::array({wt.term, wt.weight, wt.tf}));
        }
        line["prob_desc"] = std::move(terms);
        line["av"] = av_to_json(c.av);
        line["av_revised"] = av_to_json(c.av_revised);
        out += dump(line);
        out.push_back('\n');
    }

    json stats;
    stats["type"] = "corpus_stats";
    stats["N"] = cb.stats.num_docs;
    json df = json::array();
    for (auto const& [term, count] : cb.stats.df) {
        df.push_back(json::array({term, count}));
    }
    stats["df"] = std::move(df);
    out += dump(stats);
    out.push_back('\n');
    return out;
}

case_base parse_case_base(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](std::string const& what) -> format_error {
        return format_error("case base line " + std::to_string(line_no) + ": " + what);
    };

    try {
        if (!std::getline(in, line)) {
            throw format_error("case base: empty file");
        }
        ++line_no;
        auto header = json::parse(line);
        if (header.at("type") != "header" || header.at("format") != format_tag) {
            throw fail("not a case base header");
        }
        case_base cb(lexicon::parse(header.at("lexicon").get<std::string>()));
        if (cb.fingerprint() != header.at("lexicon_fingerprint").get<std::string>()) {
            throw fail("embedded lexicon does not match its fingerprint");
        }
        auto m = header.at("m").get<std::size_t>();
        if (m != cb.lex.size()) {
            throw fail("m does not match the embedded lexicon");
        }
        auto const& cfg = header.at("config");
        cb.config.k_terms = cfg.at("k_terms").get<std::size_t>();
        cb.config.tau = cfg.at("tau").get<double>();
        cb.config.k_retrieve = cfg.at("k_retrieve").get<std::size_t>();
        cb.config.alpha = cfg.at("alpha").get<double>();
        cb.config.eta = cfg.at("eta").get<double>();
        if (!header.at("stop_words").is_null()) {
            cb.custom_stop_words = header.at("stop_words").get<std::vector<std::string>>();
        }
        auto expected_cases = header.at("cases").get<std::size_t>();

        bool have_stats = false;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            if (have_stats) {
                throw fail("data after corpus_stats record");
            }
            auto rec = json::parse(line);
            auto type = rec.at("type").get<std::string>();
            if (type == "case") {
                case_record c;
                c.doc_id = rec.at("doc_id").get<std::string>();
                for (auto const& entry : rec.at("prob_desc")) {
                    if (!entry.is_array() || entry.size() != 3) {
                        throw fail("prob_desc entries must be [term, weight, tf]");
                    }
                    c.prob_desc.push_back(
                        {entry[0].get<std::string>(), entry[1].get<double>(), entry[2].get<std::uint32_t>()});
                }
                c.av = av_from_json(rec.at("av"), m, c.doc_id);
                c.av_revised = av_from_json(rec.at("av_revised"), m, c.doc_id);
                cb.cases.push_back(std::move(c));
            } else if (type == "corpus_stats") {
                cb.stats.num_docs = rec.at("N").get<std::size_t>();
                for (auto const& entry : rec.at("df")) {
                    cb.stats.df.emplace(entry.at(0).get<std::string>(), entry.at(1).get<std::uint32_t>());
                }
                have_stats = true;
            } else {
                throw fail("unknown record type '" + type + "'");
            }
        }
        if (!have_stats) {
            throw format_error("case base: truncated (missing corpus_stats record)");
        }
        if (cb.cases.size() != expected_cases) {
            throw format_error("case base: header announces " + std::to_string(expected_cases)
                               + " cases, found " + std::to_string(cb.cases.size()));
        }
        for (std::size_t i = 1; i < cb.cases.size(); ++i) {
            if (cb.cases[i].doc_id <= cb.cases[i - 1].doc_id) {
                throw format_error("case base: cases not in strictly increasing doc_id order");
            }
        }
        if (cb.stats.num_docs != header.at("N").get<std::size_t>()) {
            throw format_error("case base: N in header and corpus_stats disagree");
        }
        return cb;
    } catch (json::exception const& e) {
        throw fail(e.what());
    }
}

void save_case_base(case_base const& cb, std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot write case base " + path.string());
    }
    out << serialize_case_base(cb);
    if (!out) {
        throw io_error("write failed: " + path.string());
    }
}

case_base load_case_base(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open case base " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_case_base(buf.str());
}

}  // namespace acbr
