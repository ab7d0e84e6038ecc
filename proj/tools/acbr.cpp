// acbr: build affordance case bases from HTML corpora, query them, and run
// evaluation query sets.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "acbr/casebase.hpp"
#include "acbr/error.hpp"
#include "acbr/harness.hpp"
#include "acbr/lexicon.hpp"
#include "acbr/retrieval.hpp"

namespace {

struct build_args {
    std::filesystem::path corpus;
    std::filesystem::path lexicon;
    std::filesystem::path out;
    std::optional<std::filesystem::path> stopwords;
    acbr::build_config config;
    int threads = 0;
};

struct query_args {
    std::filesystem::path cb;
    std::optional<std::filesystem::path> lexicon;
    std::string text;
    std::size_t k = 10;
    double alpha = 0.0;
    bool use_revised = false;
};

struct eval_args {
    std::filesystem::path cb;
    std::optional<std::filesystem::path> lexicon;
    std::filesystem::path queries;
    std::filesystem::path out;
    std::optional<std::filesystem::path> qrels;
    acbr::run_config run;
};

acbr::case_base open_case_base(std::filesystem::path const& path,
                               std::optional<std::filesystem::path> const& lexicon_path)
{
    auto cb = acbr::load_case_base(path);
    if (lexicon_path) {
        acbr::check_compatible(cb, acbr::lexicon::load(*lexicon_path));
    }
    return cb;
}

void validate_run(std::size_t k, double alpha, double eta)
{
    acbr::build_config probe;
    probe.k_retrieve = k;
    probe.alpha = alpha;
    probe.eta = eta;
    probe.validate();
}

int run_build(build_args const& args)
{
    auto lex = acbr::lexicon::load(args.lexicon);
    auto stops = args.stopwords ? acbr::stop_words::load(*args.stopwords) : acbr::stop_words();
    auto cb = acbr::populate_case_base(args.corpus, lex, args.config, stops, args.threads);
    acbr::save_case_base(cb, args.out);
    std::cerr << "built " << cb.cases.size() << " cases (m=" << lex.size() << ", lexicon "
              << cb.fingerprint() << ") -> " << args.out.string() << '\n';
    return 0;
}

int run_query(query_args const& args)
{
    validate_run(args.k, args.alpha, 0.0);
    auto cb = open_case_base(args.cb, args.lexicon);
    auto index = acbr::build_index(cb);
    auto terms = acbr::tokenize(args.text, cb.tokenizer_stop_words());
    if (terms.empty()) {
        throw acbr::input_error("query has no terms after stop-word removal");
    }
    auto pool = acbr::retrieve_top_k(terms, index, cb, args.k);
    auto query_av = acbr::compute_query_affordance(terms, cb.lex);
    auto ranked = acbr::rerank(pool, query_av, cb, args.alpha, args.use_revised);

    std::printf("final_rank\tdoc_id\tbaseline_rank\tbaseline_score\taffordance_cosine\tfinal_score\n");
    for (auto const& e : ranked.entries) {
        std::printf("%zu\t%s\t%zu\t%.6f\t%.6f\t%.6f\n", e.final_rank, e.doc_id.c_str(), e.baseline_rank,
                    e.baseline_score, e.affordance_cosine, e.final_score);
    }
    return 0;
}

int run_eval(eval_args const& args)
{
    validate_run(args.run.k, args.run.alpha, args.run.eta);
    auto cb = open_case_base(args.cb, args.lexicon);
    auto index = acbr::build_index(cb);
    auto queries = acbr::load_queries(args.queries, cb.tokenizer_stop_words());
    std::optional<acbr::qrels> judgments;
    if (args.qrels) {
        judgments = acbr::qrels::load(*args.qrels);
    }
    auto report = acbr::run_experiment(cb, index, queries, args.run, judgments ? &*judgments : nullptr);
    acbr::emit_report(report, args.out);
    if (args.run.eta > 0.0) {
        acbr::save_case_base(cb, args.out / "case_base.revised.jsonl");
    }
    std::cerr << "evaluated " << queries.size() << " queries -> " << args.out.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Affordance-guided case-based retrieval over HTML corpora"};
    app.require_subcommand(1);

    build_args b;
    auto* build = app.add_subcommand("build", "Segment a corpus and write a case base");
    build->add_option("--corpus", b.corpus, "Directory of .html/.htm files")->required();
    build->add_option("--lexicon", b.lexicon, "Topic lexicon (Name<TAB>term,term,...)")->required();
    build->add_option("--out", b.out, "Case base output file")->required();
    build->add_option("--k-terms", b.config.k_terms, "Top-k terms per block")->capture_default_str();
    build->add_option("--tau", b.config.tau, "Link-to-text ratio threshold")->capture_default_str();
    build->add_option("--stopwords", b.stopwords, "Stop-word file, one word per line");
    build->add_option("--threads", b.threads, "Worker threads (0 = all)")->capture_default_str();

    query_args q;
    auto* query = app.add_subcommand("query", "Rank the case base against one query");
    query->add_option("--cb", q.cb, "Case base file")->required();
    query->add_option("--text", q.text, "Query text")->required();
    query->add_option("--k", q.k, "Candidate pool size")->capture_default_str();
    query->add_option("--alpha", q.alpha, "Weight of the baseline score in the final blend")->capture_default_str();
    query->add_flag("--use-revised", q.use_revised, "Rank with revised affordance vectors");
    query->add_option("--lexicon", q.lexicon, "Check the case base against this lexicon");

    eval_args e;
    auto* eval = app.add_subcommand("eval", "Run a query file and write CSV reports");
    eval->add_option("--cb", e.cb, "Case base file")->required();
    eval->add_option("--queries", e.queries, "Topic file")->required();
    eval->add_option("--out", e.out, "Report directory")->required();
    eval->add_option("--k", e.run.k, "Candidate pool size")->capture_default_str();
    eval->add_option("--alpha", e.run.alpha, "Weight of the baseline score in the final blend")->capture_default_str();
    eval->add_flag("--use-desc", e.run.use_desc, "Append desc terms to the title");
    eval->add_option("--qrels", e.qrels, "Relevance judgments (query<TAB>doc<TAB>0|1)");
    eval->add_option("--eta", e.run.eta, "Affordance revision rate after each query")->capture_default_str();
    eval->add_option("--lexicon", e.lexicon, "Check the case base against this lexicon");
    eval->add_option("--threads", e.run.threads, "Worker threads (0 = all)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*build) {
            return run_build(b);
        }
        if (*query) {
            return run_query(q);
        }
        return run_eval(e);
    } catch (acbr::input_error const& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (std::exception const& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 2;
    }
}
