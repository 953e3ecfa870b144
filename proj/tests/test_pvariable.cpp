#include <doctest.h>

#include <cmath>
#include <random>

#include "graphlim/pvariable.hpp"
#include "test_util.hpp"

using namespace graphlim;
using testutil::random_permutation;
using testutil::random_pvariable;

namespace {

DiscreteMeasure coin1() { return DiscreteMeasure::from_flat(1, {0.0, 1.0}, {0.5, 0.5}); }

}  // namespace

TEST_CASE("from_matrix builds Dirac cells") {
    const auto w = from_matrix({{0.0}});
    CHECK(w.n() == 1);
    CHECK(w.cell(0, 0) == DiscreteMeasure::dirac(0.0));

    const auto k2 = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(k2.cell(0, 1) == DiscreteMeasure::dirac(1.0));
    CHECK(k2.cell(1, 0) == DiscreteMeasure::dirac(1.0));
    CHECK(k2.cell(0, 0) == DiscreteMeasure::dirac(0.0));

    CHECK(from_matrix({{0.5}}).cell(0, 0) == DiscreteMeasure::dirac(0.5));
    CHECK_THROWS(from_matrix({{0.0, 1.0}}));
}

TEST_CASE("quantile view follows the inverse distribution function") {
    const auto w3 = quantile_from_kernel(1, {DiscreteMeasure::dirac(3.0)});
    CHECK(w3.quantile(0, 0, 0.1) == 3.0);
    CHECK(w3.quantile(0, 0, 0.9) == 3.0);

    const auto wc = quantile_from_kernel(1, {coin1()});
    CHECK(wc.quantile(0, 0, 0.25) == 0.0);
    CHECK(wc.quantile(0, 0, 0.5) == 0.0);
    CHECK(wc.quantile(0, 0, 0.75) == 1.0);

    const auto w3l = quantile_from_kernel(
        1, {DiscreteMeasure::from_flat(1, {-1.0, 0.0, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3})});
    CHECK(w3l.quantile(0, 0, 0.2) == -1.0);
    CHECK(w3l.quantile(0, 0, 0.5) == 0.0);
    CHECK(w3l.quantile(0, 0, 0.9) == 2.0);

    CHECK_THROWS(quantile_from_kernel(1, {DiscreteMeasure::from_flat(1, {0.0}, {0.5})}));
}

TEST_CASE("quantile round-trip is bit-exact") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const auto w = random_pvariable(rng, n, 4);
        const auto rebuilt = quantile_from_kernel(n, w.cells());
        CHECK(rebuilt == w);
    }
}

TEST_CASE("global_law on named examples") {
    CHECK(global_law(from_matrix({{1.0}})) == DiscreteMeasure::dirac(1.0));
    CHECK(global_law(from_matrix({{0.0, 1.0}, {1.0, 0.0}})) == coin1());
    CHECK(global_law(from_matrix({{2.0, 2.0}, {2.0, 2.0}})) == DiscreteMeasure::dirac(2.0));
}

TEST_CASE("contraction on named examples") {
    const auto wc = quantile_from_kernel(1, {coin1()});
    CHECK(contraction(wc).at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto a = from_matrix({{0.25, 0.5}, {1.0, -2.0}});
    const auto c = contraction(a);
    CHECK(c.at(0, 0) == 0.25);
    CHECK(c.at(1, 1) == -2.0);

    const auto w3 = quantile_from_kernel(
        1, {DiscreteMeasure::from_flat(1, {0.0, 3.0, 6.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3})});
    CHECK(contraction(w3).at(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sample_matrix constants and symmetry") {
    const auto wc = from_matrix({{0.7}});
    const auto m = sample_matrix(wc, 3, 12345, false);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                                          (i == j ? 0.0 : 0.7));

    std::mt19937_64 rng(37);
    const auto w = random_pvariable(rng, 3, 3);
    const auto s = sample_matrix(w, 9, 999, true);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            CHECK(s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  s[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);

    // Deterministic given the seed.
    CHECK(sample_matrix(w, 5, 42, true) == sample_matrix(w, 5, 42, true));
    CHECK(sample_matrix(w, 5, 42, true) != sample_matrix(w, 5, 43, true));
}

TEST_CASE("sample_matrix draws ground indices uniformly") {
    // Dirac cells valued 2i + j identify the sampled ground pair.
    const auto w = from_matrix({{0.0, 1.0}, {2.0, 3.0}});
    const int m = 400;
    const auto s = sample_matrix(w, m, 777, false);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) ++counts[static_cast<std::size_t>(s[static_cast<std::size_t>(i)]
                                                            [static_cast<std::size_t>(j)])];
    const double total = static_cast<double>(m) * m - m;
    for (int v = 0; v < 4; ++v) {
        const double freq = counts[static_cast<std::size_t>(v)] / total;
        // X_i are shared across the row/column, so allow a loose band.
        CHECK(freq == doctest::Approx(0.25).epsilon(0.4));
    }
}

TEST_CASE("tail_mass on named examples") {
    CHECK(tail_mass(from_matrix({{0.0, 1.0}, {1.0, 0.0}}), 2.0) == 0.0);
    CHECK(tail_mass(from_matrix({{5.0}}), 2.0) == 1.0);
    const auto w = quantile_from_kernel(1, {DiscreteMeasure::from_flat(1, {0.0, 10.0}, {0.5, 0.5})});
    CHECK(tail_mass(w, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS(tail_mass(w, 0.0));
}

TEST_CASE("relabel on named examples") {
    std::mt19937_64 rng(41);
    const auto w = random_pvariable(rng, 4, 3);
    CHECK(relabel(w, {0, 1, 2, 3}) == w);

    const auto a = from_matrix({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(relabel(a, {1, 0}) == from_matrix({{3.0, 2.0}, {1.0, 0.0}}));

    CHECK_THROWS(relabel(a, {0, 0}));
    CHECK_THROWS(relabel(a, {0}));
}

TEST_CASE("relabel preserves global law bit-exactly") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const auto w = random_pvariable(rng, n, 3);
        const auto p = random_permutation(rng, n);
        CHECK(global_law(relabel(w, p)) == global_law(w));
    }
}

TEST_CASE("contraction commutes with relabeling") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const auto w = random_pvariable(rng, n, 3);
        const auto p = random_permutation(rng, n);
        const auto lhs = contraction(relabel(w, p));
        const auto rhs = contraction(w);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(lhs.at(i, j) ==
                      rhs.at(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("stepping on named examples") {
    std::mt19937_64 rng(53);
    const auto w = random_pvariable(rng, 4, 3);

    // Singleton partition refines nothing.
    CHECK(stepping(w, {0, 1, 2, 3}, 4) == w);

    // One class averages the four Dirac cells.
    const auto k2 = from_matrix({{0.0, 1.0}, {1.0, 0.0}});
    const auto one = stepping(k2, {0, 0}, 1);
    const auto expected = DiscreteMeasure::from_flat(1, {0.0, 1.0}, {0.5, 0.5});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(one.cell(i, j) == expected);
}

TEST_CASE("stepping is idempotent") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const int k = 1 + static_cast<int>(rng() % 3);
        const auto w = random_pvariable(rng, n, 3);
        std::vector<int> assign(static_cast<std::size_t>(n));
        for (auto& a : assign) a = static_cast<int>(rng() % static_cast<unsigned>(k));
        const auto once = stepping(w, assign, k);
        const auto twice = stepping(once, assign, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& u = once.cell(i, j);
                const auto& v = twice.cell(i, j);
                REQUIRE(u.size() == v.size());
                for (std::size_t a = 0; a < u.size(); ++a) {
                    CHECK(u.coord(a, 0) == doctest::Approx(v.coord(a, 0)).epsilon(1e-14));
                    CHECK(u.weight(a) == doctest::Approx(v.weight(a)).epsilon(1e-12));
                }
            }
    }
}

TEST_CASE("stepping preserves global law on equal blocks") {
    std::mt19937_64 rng(61);
    const auto w = random_pvariable(rng, 4, 3);
    const auto stepped = stepping(w, {0, 0, 1, 1}, 2);
    const auto a = global_law(w);
    const auto b = global_law(stepped);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.coord(i, 0) == doctest::Approx(b.coord(i, 0)).epsilon(1e-14));
        CHECK(a.weight(i) == doctest::Approx(b.weight(i)).epsilon(1e-12));
    }
}

TEST_CASE("blowup repeats cells and common_blowup aligns sizes") {
    const auto w = from_matrix({{0.0, 1.0}, {2.0, 3.0}});
    const auto b = blowup(w, 2);
    CHECK(b.n() == 4);
    CHECK(b.cell(0, 1) == DiscreteMeasure::dirac(0.0));
    CHECK(b.cell(0, 2) == DiscreteMeasure::dirac(1.0));
    CHECK(b.cell(3, 3) == DiscreteMeasure::dirac(3.0));

    const auto u = from_matrix({{0.5}});
    const auto [bu, bw] = common_blowup(u, w);
    CHECK(bu.n() == 2);
    CHECK(bw.n() == 2);
}
