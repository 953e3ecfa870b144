#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "graphlim/generators.hpp"
#include "graphlim/graphon_ops.hpp"
#include "graphlim/profiles.hpp"
#include "graphlim/realgraphon.hpp"

using namespace graphlim;

TEST_CASE("dm and unlabeled cut shrink together on the pinned ER sequence") {
    const std::uint64_t seed = 2025;
    const auto limit = indicator_limit(0.5);
    // Regression constants recorded on the first certified run of this seed.
    const std::vector<double> frozen_dm{0.15625, 0.125, 0.09375};
    const std::vector<double> frozen_cut{0.125, 0.18055555555555558, 0.125};
    double prev_dm = 1e9, prev_cut = 1e9;
    double last_dm = 0.0, last_cut = 0.0;
    int idx = 0;
    for (int n : {4, 6, 8}) {
        const auto sample = from_matrix(er_sample(0.5, n, seed + static_cast<std::uint64_t>(n)));
        const double dm = dm_estimate(sample, limit, 2, SearchStrategy::exhaustive()).upper;
        const double cut =
            unlabeled_cut_distance(sample, limit, SearchStrategy::exhaustive()).upper;
        CHECK(dm == doctest::Approx(frozen_dm[static_cast<std::size_t>(idx)]).epsilon(1e-12));
        CHECK(cut == doctest::Approx(frozen_cut[static_cast<std::size_t>(idx)]).epsilon(1e-12));
        ++idx;
        CHECK(dm <= prev_dm + 0.1);
        CHECK(cut <= prev_cut + 0.1);
        prev_dm = dm;
        prev_cut = cut;
        last_dm = dm;
        last_cut = cut;
    }
    CHECK(last_dm <= 0.35);
    CHECK(last_cut <= 0.35);
}

TEST_CASE("contractions of dense ER samples approach the constant kernel") {
    const std::uint64_t seed = 77;
    const RealKernel half(1, {0.5});
    double prev = 1e9;
    for (int n : {8, 16, 32}) {
        const auto sample = from_matrix(er_sample(0.5, n, seed + static_cast<std::uint64_t>(n)));
        const auto d = real_cut_distance(contraction(sample), half, SearchStrategy::random(8, seed));
        CHECK(d.upper <= prev + 0.05);
        prev = d.upper;
    }
}

TEST_CASE("normalized sparse ER separates dm from contraction convergence") {
    // G_n / p_n with p_n = n^{-1/2}: converges to the null P-variable in the
    // profile metric while the contraction stays near the constant 1.
    const std::uint64_t seed = 4096;
    const auto null_pv = from_matrix({{0.0}});
    const RealKernel one(1, {1.0});
    double prev_dm = 1e9;
    double last_rc = 1.0;
    for (int n : {16, 64, 256}) {
        const double pn = 1.0 / std::sqrt(static_cast<double>(n));
        auto m = er_sample(pn, n, seed + static_cast<std::uint64_t>(n));
        for (auto& row : m)
            for (double& v : row) v /= pn;
        const auto sample = from_matrix(m);
        const double dm =
            dm_estimate(sample, null_pv, 2, SearchStrategy::random(32, seed)).upper;
        CHECK(dm <= prev_dm + 0.05);
        prev_dm = dm;
        last_rc =
            real_cut_distance(contraction(sample), one, SearchStrategy::random(8, seed)).upper;
    }
    CHECK(prev_dm <= 0.2);   // d_M heads toward the null P-variable
    CHECK(last_rc <= 0.2);   // while the contraction stays near 1
}

TEST_CASE("vanishing cut distance forces matching profile measures") {
    // Pairs at cut semidistance exactly zero: every shared-partition profile
    // pair is within 1e-6 in lp.
    std::mt19937_64 rng(2222);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        std::vector<DiscreteMeasure> cells;
        for (int i = 0; i < n * n; ++i) {
            const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            cells.push_back(DiscreteMeasure::from_flat(1, {0.0, x}, {0.4, 0.6}));
        }
        const auto u = StepPVariable(n, cells);
        const auto w = StepPVariable(n, cells);
        REQUIRE(cut_semidistance(u, w, SearchStrategy::exhaustive()).upper <= 1e-9);
        const auto a = kprofile(u, 2, SearchStrategy::exhaustive());
        for (std::size_t i = 0; i < a.provenance.size(); ++i) {
            const auto p = FunctionPartition(n, 2, a.provenance[i]);
            CHECK(lp_distance(profile_measure(u, p), profile_measure(w, p)) <= 1e-6);
        }
    }
}
