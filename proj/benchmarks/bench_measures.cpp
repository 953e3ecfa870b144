#include <benchmark/benchmark.h>

#include <random>

#include "graphlim/measures.hpp"

using namespace graphlim;

namespace {

DiscreteMeasure make_measure(std::mt19937_64& rng, int dim, int atoms) {
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::vector<double> xs, ws;
    double total = 0.0;
    for (int i = 0; i < atoms; ++i) {
        for (int c = 0; c < dim; ++c) xs.push_back(coord(rng));
        ws.push_back(0.05 + std::uniform_real_distribution<double>(0.0, 1.0)(rng));
        total += ws.back();
    }
    for (double& w : ws) w /= total;
    return DiscreteMeasure::from_flat(dim, std::move(xs), std::move(ws));
}

void BM_lp_distance(benchmark::State& state) {
    std::mt19937_64 rng(42);
    const int atoms = static_cast<int>(state.range(0));
    const auto mu = make_measure(rng, 2, atoms);
    const auto nu = make_measure(rng, 2, atoms);
    for (auto _ : state) benchmark::DoNotOptimize(lp_distance(mu, nu));
}
BENCHMARK(BM_lp_distance)->Arg(4)->Arg(16)->Arg(64)->Arg(128);

void BM_lp_oracle(benchmark::State& state) {
    std::mt19937_64 rng(43);
    const auto mu = make_measure(rng, 2, 5);
    const auto nu = make_measure(rng, 2, 5);
    for (auto _ : state) benchmark::DoNotOptimize(lp_distance_oracle(mu, nu));
}
BENCHMARK(BM_lp_oracle);

void BM_canonicalize(benchmark::State& state) {
    std::mt19937_64 rng(44);
    const int atoms = static_cast<int>(state.range(0));
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::vector<double> xs(static_cast<std::size_t>(atoms)), ws(static_cast<std::size_t>(atoms),
                                                                1.0 / atoms);
    for (auto& x : xs) x = coord(rng);
    for (auto _ : state) {
        auto copy_x = xs;
        auto copy_w = ws;
        benchmark::DoNotOptimize(DiscreteMeasure::from_flat(1, std::move(copy_x), std::move(copy_w)));
    }
}
BENCHMARK(BM_canonicalize)->Arg(16)->Arg(256);

}  // namespace
