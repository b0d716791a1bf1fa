#include <benchmark/benchmark.h>

#include <random>

#include "coverkit/json_io.hpp"
#include "coverkit/oracle.hpp"
#include "coverkit/ranking.hpp"
#include "coverkit/weights.hpp"

using namespace coverkit;

namespace {

Transducer load(const char* name) {
    return parse_transducer(read_file(std::string(COVERKIT_FIXTURE_DIR) + "/" + name));
}

void BM_SolveWeightsFig1(benchmark::State& state) {
    Transducer d = load("fig1.json");
    for (auto _ : state) benchmark::DoNotOptimize(solve_weights(d, 2));
}
BENCHMARK(BM_SolveWeightsFig1);

void BM_SolveWeightsFig3(benchmark::State& state) {
    Transducer d = load("fig3.json");
    for (auto _ : state) benchmark::DoNotOptimize(solve_weights(d, 2));
}
BENCHMARK(BM_SolveWeightsFig3);

void BM_OracleFig3(benchmark::State& state) {
    Transducer d = load("fig3.json");
    for (auto _ : state) benchmark::DoNotOptimize(oracle_tree_search(d, 2, 3));
}
BENCHMARK(BM_OracleFig3);

void BM_Determinize(benchmark::State& state) {
    std::mt19937 rng(9);
    Transducer m;
    m.directions = {"d0", "d1", "d2"};
    m.alphabet = {"a", "b", "c"};
    for (int q = 0; q < 8; ++q) {
        m.state_names.push_back("q" + std::to_string(q));
        m.labels.push_back(static_cast<int>(rng() % 3));
    }
    m.initial = 0;
    m.trans.assign(8, std::vector<int>(3, -1));
    for (int q = 0; q < 8; ++q)
        for (int d = 0; d < 3; ++d)
            if (rng() % 100 < 60) m.trans[q][d] = static_cast<int>(rng() % 8);
    for (auto _ : state) benchmark::DoNotOptimize(determinize_transducer(m));
}
BENCHMARK(BM_Determinize);

void BM_BuchiSolveExample(benchmark::State& state) {
    Transducer d = load("fig2.json");
    BuchiSpec b = parse_buchi_spec(read_file(std::string(COVERKIT_FIXTURE_DIR) +
                                             "/buchispec.json"));
    CoverProblem p = make_cover_problem(d, default_branching(2), "u0", b);
    for (auto _ : state) benchmark::DoNotOptimize(solve_weight_ranking(d, b, p, 4));
}
BENCHMARK(BM_BuchiSolveExample);

void BM_GeneratorPipelineFig1(benchmark::State& state) {
    Transducer d = load("fig1.json");
    WeightDistribution w = *solve_weights(d, 2).certificate;
    for (auto _ : state) {
        CoverGenerator g = build_cover_generator(d, default_branching(2), w);
        TreePrefix t = materialize_prefix(g, 4, 0);
        benchmark::DoNotOptimize(check_coverage(t, d));
    }
}
BENCHMARK(BM_GeneratorPipelineFig1);

} // namespace

BENCHMARK_MAIN();
