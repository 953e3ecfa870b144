#include <benchmark/benchmark.h>

#include "graphlim/generators.hpp"
#include "graphlim/graphon_ops.hpp"
#include "graphlim/profiles.hpp"
#include "graphlim/realgraphon.hpp"

using namespace graphlim;

namespace {

void BM_kprofile_exhaustive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto w = from_matrix(er_sample(0.5, n, 7));
    for (auto _ : state) benchmark::DoNotOptimize(kprofile(w, 2, SearchStrategy::exhaustive()));
}
BENCHMARK(BM_kprofile_exhaustive)->Arg(4)->Arg(6)->Arg(8);

void BM_dm_exhaustive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto w = from_matrix(er_sample(0.5, n, 11));
    const auto limit = indicator_limit(0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(dm_estimate(w, limit, 2, SearchStrategy::exhaustive()));
}
BENCHMARK(BM_dm_exhaustive)->Arg(4)->Arg(6)->Arg(8);

void BM_cut_semidistance_exhaustive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto u = from_matrix(er_sample(0.5, n, 13));
    const auto w = blowup(indicator_limit(0.5), n);
    for (auto _ : state)
        benchmark::DoNotOptimize(cut_semidistance(u, w, SearchStrategy::exhaustive()));
}
BENCHMARK(BM_cut_semidistance_exhaustive)->Arg(4)->Arg(6)->Arg(8);

void BM_cut_norm_rows(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto w = from_matrix(er_sample(0.5, n, 17));
    const auto c = contraction(w);
    for (auto _ : state) benchmark::DoNotOptimize(cut_norm(c, CutNormMode::ExhaustiveRows));
}
BENCHMARK(BM_cut_norm_rows)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_sample_matrix(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto w = indicator_limit(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(w, m, 19, true));
}
BENCHMARK(BM_sample_matrix)->Arg(64)->Arg(256);

}  // namespace
