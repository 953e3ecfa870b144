#include <doctest.h>

#include <cmath>
#include <random>

#include "graphlim/measures.hpp"
#include "test_util.hpp"

using namespace graphlim;
using testutil::random_probability;

namespace {

DiscreteMeasure coin(double p0, double x0, double x1) {
    return DiscreteMeasure::from_flat(1, {x0, x1}, {p0, 1.0 - p0});
}

}  // namespace

TEST_CASE("canonicalization merges duplicates and sorts atoms") {
    const auto m = DiscreteMeasure::from_flat(1, {2.0, 0.0, 2.0}, {0.25, 0.5, 0.25});
    CHECK(m.size() == 2);
    CHECK(m.coord(0, 0) == 0.0);
    CHECK(m.coord(1, 0) == 2.0);
    CHECK(m.weight(1) == doctest::Approx(0.5).epsilon(1e-15));

    const auto a = DiscreteMeasure::from_flat(1, {1.0, 0.0}, {0.5, 0.5});
    const auto b = DiscreteMeasure::from_flat(1, {0.0, 1.0}, {0.5, 0.5});
    CHECK(a == b);
    CHECK(a.canonical_key() == b.canonical_key());
}

TEST_CASE("zero-weight atoms are dropped") {
    const auto m = DiscreteMeasure::from_flat(1, {0.0, 5.0}, {1.0, 0.0});
    CHECK(m.size() == 1);
    CHECK(m.is_probability());
}

TEST_CASE("lp_distance on the named examples") {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto d1 = DiscreteMeasure::dirac(1.0);
    CHECK(lp_distance(d0, d0) == 0.0);
    CHECK(lp_distance(d0, coin(0.5, 0.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lp_distance(d0, d1) == doctest::Approx(1.0).epsilon(1e-12));
    // Diracs meet at min(|x-y|, 1).
    CHECK(lp_distance(d0, DiscreteMeasure::dirac(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(lp_distance(d0, DiscreteMeasure::dirac(7.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp_distance rejects bad input") {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto flat2 = DiscreteMeasure::dirac(std::vector<double>{0.0, 0.0});
    CHECK_THROWS(lp_distance(d0, flat2));
    CHECK_THROWS(lp_distance(d0, DiscreteMeasure::from_flat(1, {0.0}, {0.5})));
    CHECK_THROWS(lp_distance(d0, DiscreteMeasure(1)));
}

TEST_CASE("lp_distance_oracle on the named examples") {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    CHECK(lp_distance_oracle(d0, d0) == 0.0);
    CHECK(lp_distance_oracle(coin(0.5, 0.0, 2.0), d0) == doctest::Approx(0.5).epsilon(1e-12));
    const auto unif = coin(0.5, 0.0, 1.0);
    CHECK(lp_distance_oracle(unif, unif) == 0.0);

    // Guard against exponential blowup.
    std::vector<double> atoms(13), weights(13, 1.0 / 13);
    for (int i = 0; i < 13; ++i) atoms[static_cast<std::size_t>(i)] = i;
    const auto big = DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights));
    CHECK_THROWS(lp_distance_oracle(big, d0));
}

TEST_CASE("flow solver agrees with the subset oracle on random pairs") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 120; ++trial) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const auto mu = random_probability(rng, dim, 5);
        const auto nu = random_probability(rng, dim, 5);
        const double fast = lp_distance(mu, nu);
        const double slow = lp_distance_oracle(mu, nu);
        CHECK(std::abs(fast - slow) <= 1e-9);
    }
}

TEST_CASE("lp_distance is a metric on probability measures") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const auto a = random_probability(rng, dim, 4);
        const auto b = random_probability(rng, dim, 4);
        const auto c = random_probability(rng, dim, 4);
        CHECK(lp_distance(a, a) == 0.0);
        // Bit-exact symmetry via canonical argument ordering.
        CHECK(lp_distance(a, b) == lp_distance(b, a));
        CHECK(lp_distance(a, c) <= lp_distance(a, b) + lp_distance(b, c) + 1e-9);
    }
}

TEST_CASE("scaling inequality") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto mu = random_probability(rng, 2, 4);
        const auto nu = random_probability(rng, 2, 4);
        const double base = lp_distance(mu, nu);
        for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
            const auto amu = scale_mix({mu}, {alpha});
            const auto anu = scale_mix({nu}, {alpha});
            const double scaled = lp_mass_distance(amu, anu);
            CHECK(base <= scaled + 1e-9);
            CHECK(scaled <= alpha * base + 1e-9);
        }
    }
}

TEST_CASE("quasi-convexity") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const auto mu1 = random_probability(rng, 1, 4);
        const auto mu2 = random_probability(rng, 1, 4);
        const auto nu1 = random_probability(rng, 1, 4);
        const auto nu2 = random_probability(rng, 1, 4);
        const double bound = std::max(lp_distance(mu1, nu1), lp_distance(mu2, nu2));
        for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
            const auto mixm = scale_mix({mu1, mu2}, {alpha, 1.0 - alpha});
            const auto mixn = scale_mix({nu1, nu2}, {alpha, 1.0 - alpha});
            CHECK(lp_distance(mixm, mixn) <= bound + 1e-9);
        }
    }
}

TEST_CASE("marginal bound") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 2);
        const auto mu = random_probability(rng, dim, 4);
        const auto nu = random_probability(rng, dim, 4);
        const double full = lp_distance(mu, nu);
        for (int c = 0; c < dim; ++c)
            CHECK(lp_distance(marginal(mu, {c}), marginal(nu, {c})) <= full + 1e-9);
        if (dim == 3)
            CHECK(lp_distance(marginal(mu, {0, 2}), marginal(nu, {0, 2})) <= full + 1e-9);
    }
}

TEST_CASE("marginal on the named examples") {
    const auto pair01 = DiscreteMeasure::dirac(std::vector<double>{0.0, 1.0});
    CHECK(marginal(pair01, {0}) == DiscreteMeasure::dirac(0.0));

    const auto two = DiscreteMeasure(2, {{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5});
    CHECK(marginal(two, {1}) == DiscreteMeasure::dirac(0.0));

    const auto spread = DiscreteMeasure(2, {{0.0, 3.0}, {1.0, 4.0}}, {0.5, 0.5});
    CHECK(marginal(spread, {1}) == coin(0.5, 3.0, 4.0));

    CHECK_THROWS(marginal(two, {2}));
    CHECK_THROWS(marginal(two, {0, 0}));
}

TEST_CASE("restrict on the named examples") {
    const auto m = coin(0.5, 0.0, 2.0);
    const auto inside = restrict(m, Box{{-1.0}, {1.0}});
    CHECK(inside.size() == 1);
    CHECK(inside.total_mass() == doctest::Approx(0.5).epsilon(1e-15));

    const auto d5 = DiscreteMeasure::dirac(5.0);
    CHECK(restrict(d5, Box{{0.0}, {10.0}}) == d5);

    CHECK(restrict(m, Box{{3.0}, {4.0}}).is_zero());
}

TEST_CASE("scale_mix on the named examples") {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto d1 = DiscreteMeasure::dirac(1.0);
    CHECK(scale_mix({d0}, {2.0}).total_mass() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(scale_mix({d0, d1}, {0.5, 0.5}) == coin(0.5, 0.0, 1.0));
    CHECK(scale_mix({d0}, {0.0}).is_zero());
    CHECK_THROWS(scale_mix({d0, d1}, {1.0}));
}

TEST_CASE("tau on the named examples") {
    CHECK(tau(DiscreteMeasure::dirac(std::vector<double>{0.0, 0.0})) == 0.0);
    CHECK(tau(DiscreteMeasure::dirac(std::vector<double>{3.0, -4.0})) == 4.0);
    const auto half = DiscreteMeasure(2, {{2.0, 0.0}, {0.0, 2.0}}, {0.5, 0.5});
    CHECK(tau(half) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("coupling bounds") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int points = 2 + static_cast<int>(rng() % 5);
        const int k = 1 + static_cast<int>(rng() % 3);
        std::vector<double> prob(static_cast<std::size_t>(points));
        double total = 0.0;
        for (auto& p : prob) {
            p = 0.05 + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            total += p;
        }
        for (auto& p : prob) p /= total;

        std::vector<double> xs, ys, diffs;
        for (int i = 0; i < points; ++i)
            for (int c = 0; c < k; ++c) {
                const double x = coord(rng), y = coord(rng);
                xs.push_back(x);
                ys.push_back(y);
                diffs.push_back(x - y);
            }
        const auto lx = DiscreteMeasure::from_flat(k, xs, prob);
        const auto ly = DiscreteMeasure::from_flat(k, ys, prob);
        const auto ld = DiscreteMeasure::from_flat(k, diffs, prob);

        const double lhs = lp_distance(lx, ly);
        CHECK(lhs <= std::sqrt(tau(ld)) * std::pow(k, 0.75) + 1e-9);

        // L1 phrasing: m = max_i ||x_i - y_i||_1.
        double m = 0.0;
        for (int c = 0; c < k; ++c) {
            double s = 0.0;
            for (int i = 0; i < points; ++i)
                s += prob[static_cast<std::size_t>(i)] *
                     std::abs(diffs[static_cast<std::size_t>(i * k + c)]);
            m = std::max(m, s);
        }
        CHECK(lhs <= std::sqrt(m) * std::pow(k, 0.75) + 1e-9);
    }
}

TEST_CASE("hausdorff_distance on the named examples") {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto d1 = DiscreteMeasure::dirac(1.0);
    CHECK(hausdorff_distance(MeasureSet({d0}), MeasureSet({d0})) == 0.0);
    CHECK(hausdorff_distance(MeasureSet({d0}), MeasureSet({d0, d1})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hausdorff_distance(MeasureSet({d0, d1}), MeasureSet({d1, d0})) == 0.0);
    CHECK_THROWS(MeasureSet({}));
}

TEST_CASE("hausdorff_distance is a pseudometric") {
    std::mt19937_64 rng(23);
    auto random_set = [&](int count) {
        std::vector<DiscreteMeasure> members;
        for (int i = 0; i < count; ++i) members.push_back(random_probability(rng, 1, 3));
        return MeasureSet(std::move(members));
    };
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_set(1 + static_cast<int>(rng() % 3));
        const auto b = random_set(1 + static_cast<int>(rng() % 3));
        const auto c = random_set(1 + static_cast<int>(rng() % 3));
        CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
        CHECK(hausdorff_distance(a, a) == 0.0);
        CHECK(hausdorff_distance(a, c) <=
              hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-9);
    }
}
