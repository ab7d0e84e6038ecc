// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "acbr/casebase.hpp"
#include "acbr/retrieval.hpp"

namespace {

std::string word(std::size_t i) { return "term" + std::to_string(i); }

struct fixture {
    acbr::lexicon lex;
    std::vector<acbr::source_document> docs;
    std::vector<acbr::document_blocks> extracted;
    acbr::corpus_stats stats;
    acbr::case_base cb;
    acbr::inverted_index index;
    std::vector<std::string> query;

    static fixture const& get()
    {
        static fixture const f = make();
        return f;
    }

  private:
    static acbr::lexicon make_lexicon()
    {
        std::string text;
        for (std::size_t t = 0; t < 17; ++t) {
            text += "Topic" + std::to_string(t) + "\t";
            for (std::size_t j = 0; j < 20; ++j) {
                text += (j ? "," : "") + word(t * 20 + j);
            }
            text += "\n";
        }
        return acbr::lexicon::parse(text + "Miscellaneous\t*\n");
    }

    static std::vector<acbr::source_document> make_docs()
    {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<std::size_t> pick(0, 1999);
        std::vector<acbr::source_document> docs;
        for (int d = 0; d < 1000; ++d) {
            std::string html = "<html><body><div><a href=/>Home</a> <a href=/x>Next</a></div>";
            for (int b = 0; b < 8; ++b) {
                html += b % 3 == 0 ? "<table><tr><td>" : "<p>";
                for (int w = 0; w < 40; ++w) {
                    html += word(pick(rng)) + (w % 9 == 8 ? ". " : " ");
                }
                html += b % 3 == 0 ? "</td></tr></table>" : "</p>";
            }
            docs.push_back({"doc" + std::to_string(d) + ".html", html + "</body></html>"});
        }
        return docs;
    }

    static fixture make()
    {
        auto lex = make_lexicon();
        auto docs = make_docs();
        acbr::stop_words stops;
        auto extracted = acbr::extract_documents_serial(docs, 0.5, stops);
        auto stats = acbr::compute_corpus_stats(extracted);
        auto cb = acbr::populate_case_base(docs, lex, acbr::build_config{}, stops);
        acbr::inverted_index index(cb);
        return {lex, docs, extracted, stats, cb, index, {word(3), word(77), word(140), word(901), word(1500)}};
    }

};

void extract_serial(benchmark::State& state)
{
    auto const& f = fixture::get();
    acbr::stop_words stops;
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::extract_documents_serial(f.docs, 0.5, stops));
    }
}

void extract_parallel(benchmark::State& state)
{
    auto const& f = fixture::get();
    acbr::stop_words stops;
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::extract_documents(f.docs, 0.5, stops, static_cast<int>(state.range(0))));
    }
}

void build_serial(benchmark::State& state)
{
    auto const& f = fixture::get();
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::build_cases_serial(f.extracted, f.lex, acbr::build_config{}, f.stats));
    }
}

void build_parallel(benchmark::State& state)
{
    auto const& f = fixture::get();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            acbr::build_cases(f.extracted, f.lex, acbr::build_config{}, f.stats, static_cast<int>(state.range(0))));
    }
}

void score_serial(benchmark::State& state)
{
    auto const& f = fixture::get();
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::score_all_cases_serial(f.query, f.index));
    }
}

void score_parallel(benchmark::State& state)
{
    auto const& f = fixture::get();
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::score_all_cases(f.query, f.index, static_cast<int>(state.range(0))));
    }
}

void retrieve(benchmark::State& state)
{
    auto const& f = fixture::get();
    for (auto _ : state) {
        benchmark::DoNotOptimize(acbr::retrieve_top_k(f.query, f.index, f.cb, 10));
    }
}

}  // namespace

BENCHMARK(extract_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(extract_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(build_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(build_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(score_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(score_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(retrieve)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
