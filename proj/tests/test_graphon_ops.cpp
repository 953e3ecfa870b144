#include <doctest.h>

#include <cmath>
#include <random>

#include "graphlim/graphon_ops.hpp"
#include "test_util.hpp"

using namespace graphlim;
using testutil::random_permutation;
using testutil::random_pvariable;

TEST_CASE("block_measure on named examples") {
    const auto w1 = from_matrix({{1.0}});
    CHECK(block_measure(w1, {0}, {0}) == DiscreteMeasure::dirac(1.0));

    const auto k2 = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    const auto b = block_measure(k2, {0}, {1});
    CHECK(b.size() == 1);
    CHECK(b.coord(0, 0) == 1.0);
    CHECK(b.weight(0) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(block_measure(k2, {}, {0, 1}).is_zero());
}

TEST_CASE("cut_semidistance on named examples") {
    std::mt19937_64 rng(103);
    const auto w = random_pvariable(rng, 3, 2);
    const auto self = cut_semidistance(w, w, SearchStrategy::exhaustive());
    CHECK(self.lower == 0.0);
    CHECK(self.upper == 0.0);

    const auto zero = from_matrix({{0.0}});
    const auto one = from_matrix({{1.0}});
    const auto d = cut_semidistance(zero, one, SearchStrategy::exhaustive());
    CHECK(d.lower == doctest::Approx(1.0).epsilon(1e-12));

    // The full rectangle is one candidate pair.
    const auto u = random_pvariable(rng, 3, 2);
    const double full = lp_distance(global_law(u), global_law(w));
    CHECK(cut_semidistance(u, w, SearchStrategy::exhaustive()).lower >= full - 1e-12);

    CHECK_THROWS(cut_semidistance(zero, from_matrix({{0.0, 1.0}, {1.0, 0.0}}),
                                  SearchStrategy::exhaustive()));
}

TEST_CASE("cut_semidistance is a pseudometric in exhaustive mode") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const auto a = random_pvariable(rng, n, 2);
        const auto b = random_pvariable(rng, n, 2);
        const auto c = random_pvariable(rng, n, 2);
        const double ab = cut_semidistance(a, b, SearchStrategy::exhaustive()).lower;
        const double ba = cut_semidistance(b, a, SearchStrategy::exhaustive()).lower;
        const double ac = cut_semidistance(a, c, SearchStrategy::exhaustive()).lower;
        const double bc = cut_semidistance(b, c, SearchStrategy::exhaustive()).lower;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("heuristic cut_semidistance lower-bounds the exhaustive value") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const auto a = random_pvariable(rng, n, 2);
        const auto b = random_pvariable(rng, n, 2);
        const double exact = cut_semidistance(a, b, SearchStrategy::exhaustive()).lower;
        const auto est = cut_semidistance(a, b, SearchStrategy::random(8, 5 + trial));
        CHECK(est.lower <= exact + 1e-9);
        CHECK(est.upper == 1.0);
    }
}

TEST_CASE("unlabeled_cut_distance on named examples") {
    std::mt19937_64 rng(113);
    const auto w = random_pvariable(rng, 3, 2);
    const auto p = random_permutation(rng, 3);
    const auto rel = unlabeled_cut_distance(w, relabel(w, p), SearchStrategy::exhaustive());
    CHECK(rel.lower == 0.0);
    CHECK(rel.upper == 0.0);

    const auto self = unlabeled_cut_distance(w, w, SearchStrategy::exhaustive());
    CHECK(self.upper == 0.0);

    // Regression constant from full enumeration over 2 permutations and 16
    // subset pairs.
    const auto a = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    const auto b = from_matrix({{1.0, 0.0}, {0.0, 1.0}});
    const auto d = unlabeled_cut_distance(a, b, SearchStrategy::exhaustive());
    CHECK(d.lower == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.upper == doctest::Approx(0.25).epsilon(1e-12));

    // Never exceeds the labeled semidistance.
    const auto u = random_pvariable(rng, 3, 2);
    CHECK(unlabeled_cut_distance(u, w, SearchStrategy::exhaustive()).lower <=
          cut_semidistance(u, w, SearchStrategy::exhaustive()).lower + 1e-12);
}

TEST_CASE("heuristic unlabeled_cut_distance brackets the exhaustive value") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const auto u = random_pvariable(rng, n, 2);
        const auto w = random_pvariable(rng, n, 2);
        const double exact = unlabeled_cut_distance(u, w, SearchStrategy::exhaustive()).lower;
        const auto est = unlabeled_cut_distance(u, w, SearchStrategy::random(8, 17 + trial));
        CHECK(est.lower <= exact + 1e-9);
        CHECK(est.lower <= est.upper + 1e-15);
    }
}

TEST_CASE("hom_density on named examples") {
    std::mt19937_64 rng(131);
    const auto w = random_pvariable(rng, 3, 3);

    const DecoratedGraph edge(2, {{0, 1}}, {EdgeDecoration::constant(1.0)});
    CHECK(hom_density(edge, w) == doctest::Approx(1.0).epsilon(1e-12));

    const auto k3 = from_matrix({{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
    const DecoratedGraph edge_id(2, {{0, 1}}, {EdgeDecoration::identity(0.0, 1.0)});
    CHECK(hom_density(edge_id, k3) == doctest::Approx(6.0 / 9.0).epsilon(1e-12));

    // Disjoint unions factorize.
    const DecoratedGraph pair(4, {{0, 1}, {2, 3}},
                              {EdgeDecoration::identity(0.0, 1.0),
                               EdgeDecoration::poly({0.0, 0.5}, -2.0, 2.0)});
    const DecoratedGraph e1(2, {{0, 1}}, {EdgeDecoration::identity(0.0, 1.0)});
    const DecoratedGraph e2(2, {{0, 1}}, {EdgeDecoration::poly({0.0, 0.5}, -2.0, 2.0)});
    CHECK(hom_density(pair, w) ==
          doctest::Approx(hom_density(e1, w) * hom_density(e2, w)).epsilon(1e-12));
}

TEST_CASE("hom_density is relabeling invariant") {
    std::mt19937_64 rng(137);
    const auto w = random_pvariable(rng, 4, 2);
    const auto p = random_permutation(rng, 4);
    const DecoratedGraph path(3, {{0, 1}, {1, 2}},
                              {EdgeDecoration::identity(-2.0, 2.0),
                               EdgeDecoration::identity(-2.0, 2.0)});
    CHECK(hom_density(path, w) == doctest::Approx(hom_density(path, relabel(w, p))).epsilon(1e-13));
}

TEST_CASE("hom_density guards") {
    std::mt19937_64 rng(139);
    const auto w = random_pvariable(rng, 3, 2);
    // Poly outside its declared domain reports the unbounded decoration.
    const DecoratedGraph bad(2, {{0, 1}}, {EdgeDecoration::poly({1.0}, 2.0, 3.0)});
    CHECK_THROWS(hom_density(bad, w));
}

TEST_CASE("overlay on named examples") {
    std::mt19937_64 rng(149);
    const auto w = random_pvariable(rng, 3, 2);

    DecoratedGraph whole(1, {{0, 0}}, {EdgeDecoration::constant(1.0)}, {1.0});
    const auto total = overlay(w, whole, SearchStrategy::exhaustive());
    CHECK(total.lower == doctest::Approx(1.0).epsilon(1e-12));

    const auto k2 = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    DecoratedGraph cross(2, {{0, 1}, {1, 0}},
                         {EdgeDecoration::identity(0.0, 1.0), EdgeDecoration::identity(0.0, 1.0)},
                         {0.5, 0.5});
    const auto half = overlay(k2, cross, SearchStrategy::exhaustive());
    CHECK(half.lower == doctest::Approx(0.5).epsilon(1e-12));

    DecoratedGraph nil(2, {{0, 1}}, {EdgeDecoration::constant(0.0)}, {0.5, 0.5});
    CHECK(overlay(k2, nil, SearchStrategy::exhaustive()).lower == doctest::Approx(0.0));

    // Rounded block sizes are reported to the caller.
    std::vector<int> sizes;
    DecoratedGraph uneven(2, {{0, 1}}, {EdgeDecoration::constant(1.0)}, {0.6, 0.4});
    overlay(w, uneven, SearchStrategy::exhaustive(), &sizes);
    CHECK(sizes == std::vector<int>{2, 1});

    // Local search stays within the certified bracket.
    const auto est = overlay(k2, cross, SearchStrategy::local_search(4, 3));
    CHECK(est.lower <= half.lower + 1e-12);
    CHECK(est.upper >= half.lower - 1e-12);
}

TEST_CASE("quotient on named examples") {
    std::mt19937_64 rng(151);
    const auto w = random_pvariable(rng, 4, 3);

    const auto one = quotient(w, FunctionPartition(4, 1, {0, 0, 0, 0}));
    CHECK(one.alpha == std::vector<double>{1.0});
    CHECK(one.at(0, 0) == global_law(w));

    const auto k2 = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    const auto q = quotient(k2, FunctionPartition(2, 2, {0, 1}));
    CHECK(q.alpha == std::vector<double>{0.5, 0.5});
    CHECK(q.at(0, 0) == DiscreteMeasure::dirac(0.0));
    CHECK(q.at(0, 1) == DiscreteMeasure::dirac(1.0));

    // Mass bookkeeping: the alpha-weighted beta mixture is the global law.
    const auto p = FunctionPartition(4, 2, {0, 1, 0, 1});
    const auto q2 = quotient(w, p);
    std::vector<DiscreteMeasure> parts;
    std::vector<double> coeffs;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            parts.push_back(q2.at(i, j));
            coeffs.push_back(q2.alpha[static_cast<std::size_t>(i)] *
                             q2.alpha[static_cast<std::size_t>(j)]);
        }
    const auto mixed = scale_mix(parts, coeffs);
    const auto law = global_law(w);
    REQUIRE(mixed.size() == law.size());
    for (std::size_t i = 0; i < law.size(); ++i) {
        CHECK(mixed.coord(i, 0) == doctest::Approx(law.coord(i, 0)).epsilon(1e-14));
        CHECK(mixed.weight(i) == doctest::Approx(law.weight(i)).epsilon(1e-12));
    }
}

TEST_CASE("d1_distance on named examples") {
    const auto q0 = QuotientGraph(1, {1.0}, {DiscreteMeasure::dirac(0.0)});
    const auto q1 = QuotientGraph(1, {1.0}, {DiscreteMeasure::dirac(1.0)});
    CHECK(d1_distance(q0, q0) == 0.0);
    CHECK(d1_distance(q0, q1) == doctest::Approx(1.0).epsilon(1e-12));

    // Weight-vector gap contributes in l1.
    const auto coin = DiscreteMeasure::from_flat(1, {0.0, 1.0}, {0.5, 0.5});
    const auto qa = QuotientGraph(2, {0.5, 0.5}, {coin, coin, coin, coin});
    const auto qb = QuotientGraph(2, {1.0, 0.0},
                                  {coin, DiscreteMeasure(1), DiscreteMeasure(1), DiscreteMeasure(1)});
    CHECK(d1_distance(qa, qb) >= 1.0 - 1e-12);
}

TEST_CASE("quotient_set_distance identities") {
    std::mt19937_64 rng(157);
    const auto w = random_pvariable(rng, 3, 2);
    const auto self = quotient_set_distance(w, w, 2, SearchStrategy::exhaustive());
    CHECK(self.lower == 0.0);
    CHECK(self.upper == 0.0);

    const auto p = random_permutation(rng, 3);
    const auto rel = quotient_set_distance(w, relabel(w, p), 2, SearchStrategy::exhaustive());
    CHECK(rel.lower == 0.0);
    CHECK(rel.upper == 0.0);

    // Constant vs fair coin at k = 1: single quotients, Dirac-vs-coin lp.
    const auto constant = from_matrix({{0.5}});
    const auto fair = quantile_from_kernel(
        1, {DiscreteMeasure::from_flat(1, {0.0, 1.0}, {0.5, 0.5})});
    const auto d = quotient_set_distance(constant, fair, 1, SearchStrategy::exhaustive());
    CHECK(d.lower == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quotient_set_distance label minimization") {
    std::mt19937_64 rng(163);
    const auto w = random_pvariable(rng, 3, 2);
    const auto p = random_permutation(rng, 3);
    const auto rel =
        quotient_set_distance(w, relabel(w, p), 2, SearchStrategy::exhaustive(), true);
    CHECK(rel.upper == 0.0);
    // Minimized distance never exceeds the labeled one.
    const auto u = random_pvariable(rng, 3, 2);
    const auto labeled = quotient_set_distance(u, w, 2, SearchStrategy::exhaustive());
    const auto minimized = quotient_set_distance(u, w, 2, SearchStrategy::exhaustive(), true);
    CHECK(minimized.upper <= labeled.upper + 1e-12);
}
