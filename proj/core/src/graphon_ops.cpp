#include "graphlim/graphon_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "graphlim/rng.hpp"

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b);
}

std::uint64_t pow_saturating(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        v *= base;
    }
    return v;
}

void validate_subset(const std::vector<int>& s, int n, const char* name) {
    for (int v : s)
        if (v < 0 || v >= n) fail(std::string(name) + ": ground index out of range");
}

// Unnormalized accumulation of scale * sum of cells over s x t.
DiscreteMeasure scaled_block(const StepPVariable& w, const std::vector<int>& s,
                             const std::vector<int>& t, double scale) {
    std::vector<double> atoms;
    std::vector<double> weights;
    for (int i : s) {
        for (int j : t) {
            const DiscreteMeasure& c = w.cell(i, j);
            for (std::size_t a = 0; a < c.size(); ++a) {
                atoms.push_back(c.coord(a, 0));
                weights.push_back(c.weight(a) * scale);
            }
        }
    }
    return DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights));
}

std::vector<int> mask_to_indices(std::uint32_t mask, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1u) out.push_back(i);
    return out;
}

// Exhaustive sup over subset pairs; returns early once the running max
// reaches abort_above (callers minimizing over relabelings discard such
// values anyway).
double exhaustive_cut(const StepPVariable& u, const StepPVariable& w, double abort_above) {
    const int n = u.n();
    const double inv = 1.0 / (static_cast<double>(n) * n);
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    double sup = 0.0;
    for (std::uint32_t smask = 1; smask <= full; ++smask) {
        const auto s = mask_to_indices(smask, n);
        // Row aggregates over the fixed S, merged once per column.
        std::vector<DiscreteMeasure> agg_u(static_cast<std::size_t>(n)),
            agg_w(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            std::vector<int> col{j};
            agg_u[static_cast<std::size_t>(j)] = scaled_block(u, s, col, inv);
            agg_w[static_cast<std::size_t>(j)] = scaled_block(w, s, col, inv);
        }
        for (std::uint32_t tmask = 1; tmask <= full; ++tmask) {
            std::vector<double> atoms_u, weights_u, atoms_w, weights_w;
            for (int j = 0; j < n; ++j) {
                if (!(tmask >> j & 1u)) continue;
                const auto& mu = agg_u[static_cast<std::size_t>(j)];
                for (std::size_t a = 0; a < mu.size(); ++a) {
                    atoms_u.push_back(mu.coord(a, 0));
                    weights_u.push_back(mu.weight(a));
                }
                const auto& mw = agg_w[static_cast<std::size_t>(j)];
                for (std::size_t a = 0; a < mw.size(); ++a) {
                    atoms_w.push_back(mw.coord(a, 0));
                    weights_w.push_back(mw.weight(a));
                }
            }
            const auto bu = DiscreteMeasure::from_flat(1, std::move(atoms_u), std::move(weights_u));
            const auto bw = DiscreteMeasure::from_flat(1, std::move(atoms_w), std::move(weights_w));
            sup = std::max(sup, lp_mass_distance(bu, bw));
            if (sup >= abort_above) return sup;
        }
    }
    return sup;
}

// Greedy toggle ascent on (S, T) from random starts; a certified lower bound
// on the cut semidistance with the found pair as witness.
double ascent_cut(const StepPVariable& u, const StepPVariable& w, int restarts,
                  std::uint64_t seed) {
    const int n = u.n();
    const double inv = 1.0 / (static_cast<double>(n) * n);
    const CounterRng rng(seed);
    auto eval = [&](const std::vector<int>& s, const std::vector<int>& t) {
        if (s.empty() || t.empty()) return 0.0;
        return lp_mass_distance(scaled_block(u, s, t, inv), scaled_block(w, s, t, inv));
    };
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<char> in_s(static_cast<std::size_t>(n)), in_t(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            in_s[static_cast<std::size_t>(i)] =
                rng.bits(static_cast<std::uint64_t>(2 * r), static_cast<std::uint64_t>(i)) & 1u;
            in_t[static_cast<std::size_t>(i)] =
                rng.bits(static_cast<std::uint64_t>(2 * r + 1), static_cast<std::uint64_t>(i)) & 1u;
        }
        auto indices = [n](const std::vector<char>& flags) {
            std::vector<int> out;
            for (int i = 0; i < n; ++i)
                if (flags[static_cast<std::size_t>(i)]) out.push_back(i);
            return out;
        };
        double cur = eval(indices(in_s), indices(in_t));
        bool improved = true;
        while (improved) {
            improved = false;
            for (int side = 0; side < 2; ++side) {
                auto& flags = side == 0 ? in_s : in_t;
                for (int i = 0; i < n; ++i) {
                    flags[static_cast<std::size_t>(i)] ^= 1;
                    const double val = eval(indices(in_s), indices(in_t));
                    if (val > cur + 1e-15) {
                        cur = val;
                        improved = true;
                    } else {
                        flags[static_cast<std::size_t>(i)] ^= 1;
                    }
                }
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

double measure_integral(const DiscreteMeasure& m, const EdgeDecoration& d) {
    double s = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a) s += m.weight(a) * d.eval(m.coord(a, 0));
    return s;
}

std::string quotient_key(const QuotientGraph& q) {
    std::string key(static_cast<std::size_t>(q.k) * sizeof(double), '\0');
    std::memcpy(key.data(), q.alpha.data(), key.size());
    for (const auto& b : q.beta) key += b.canonical_key();
    return key;
}

QuotientGraph permuted_quotient(const QuotientGraph& q, const std::vector<int>& p) {
    std::vector<double> alpha(static_cast<std::size_t>(q.k));
    std::vector<DiscreteMeasure> beta(static_cast<std::size_t>(q.k) * q.k);
    for (int i = 0; i < q.k; ++i) {
        alpha[static_cast<std::size_t>(i)] = q.alpha[static_cast<std::size_t>(p[i])];
        for (int j = 0; j < q.k; ++j)
            beta[static_cast<std::size_t>(i) * q.k + j] = q.at(p[i], p[j]);
    }
    return QuotientGraph(q.k, std::move(alpha), std::move(beta));
}

}  // namespace

EdgeDecoration EdgeDecoration::constant(double c) {
    EdgeDecoration d;
    d.kind = Kind::Const;
    d.c = c;
    return d;
}

EdgeDecoration EdgeDecoration::identity(double lo, double hi) {
    if (!(lo <= hi)) fail("identity decoration: empty range");
    EdgeDecoration d;
    d.kind = Kind::Identity;
    d.lo = lo;
    d.hi = hi;
    return d;
}

EdgeDecoration EdgeDecoration::poly(std::vector<double> coeffs, double lo, double hi) {
    if (!(lo <= hi)) fail("poly decoration: empty range");
    EdgeDecoration d;
    d.kind = Kind::Poly;
    d.coeffs = std::move(coeffs);
    d.lo = lo;
    d.hi = hi;
    return d;
}

EdgeDecoration EdgeDecoration::indicator(double value, double tol) {
    if (tol < 0.0) fail("indicator decoration: negative tolerance");
    EdgeDecoration d;
    d.kind = Kind::Indicator;
    d.value = value;
    d.tol = tol;
    return d;
}

EdgeDecoration EdgeDecoration::bounded_lipschitz(std::vector<std::pair<double, double>> table) {
    if (table.empty()) fail("bounded_lipschitz decoration: empty table");
    if (!std::is_sorted(table.begin(), table.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        fail("bounded_lipschitz decoration: table must be sorted by x");
    EdgeDecoration d;
    d.kind = Kind::BoundedLipschitz;
    d.table = std::move(table);
    return d;
}

double EdgeDecoration::eval(double z) const {
    switch (kind) {
        case Kind::Const:
            return c;
        case Kind::Identity:
            return std::clamp(z, lo, hi);
        case Kind::Poly: {
            if (z < lo || z > hi)
                throw std::domain_error("graphlim: poly decoration evaluated outside its range");
            double acc = 0.0;
            for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
            return acc;
        }
        case Kind::Indicator:
            return std::abs(z - value) <= tol ? 1.0 : 0.0;
        case Kind::BoundedLipschitz: {
            if (z <= table.front().first) return table.front().second;
            if (z >= table.back().first) return table.back().second;
            auto it = std::lower_bound(
                table.begin(), table.end(), z,
                [](const auto& row, double x) { return row.first < x; });
            const auto [x1, y1] = *it;
            const auto [x0, y0] = *std::prev(it);
            if (x1 == x0) return y1;
            return y0 + (y1 - y0) * (z - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

DecoratedGraph::DecoratedGraph(int vertices_, std::vector<std::pair<int, int>> edges_,
                               std::vector<EdgeDecoration> beta_, std::vector<double> alpha_)
    : vertices(vertices_), edges(std::move(edges_)), beta(std::move(beta_)),
      alpha(std::move(alpha_)) {
    if (vertices < 1) fail("DecoratedGraph needs at least one vertex");
    if (edges.size() != beta.size()) fail("DecoratedGraph: one decoration per edge required");
    for (const auto& [a, b] : edges)
        if (a < 0 || a >= vertices || b < 0 || b >= vertices)
            fail("DecoratedGraph: edge endpoint out of range");
    if (!alpha.empty()) {
        if (static_cast<int>(alpha.size()) != vertices)
            fail("DecoratedGraph: vertex weight count mismatch");
        double sum = 0.0;
        for (double a : alpha) {
            if (a < 0.0) fail("DecoratedGraph: negative vertex weight");
            sum += a;
        }
        if (std::abs(sum - 1.0) > kMassTol) fail("DecoratedGraph: vertex weights must sum to 1");
    }
}

QuotientGraph::QuotientGraph(int k_, std::vector<double> alpha_,
                             std::vector<DiscreteMeasure> beta_)
    : k(k_), alpha(std::move(alpha_)), beta(std::move(beta_)) {
    if (k < 1) fail("QuotientGraph size must be positive");
    if (static_cast<int>(alpha.size()) != k) fail("QuotientGraph weight count mismatch");
    if (beta.size() != static_cast<std::size_t>(k) * k) fail("QuotientGraph decoration mismatch");
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0.0) fail("QuotientGraph: negative vertex weight");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) fail("QuotientGraph: vertex weights must sum to 1");
}

DiscreteMeasure block_measure(const StepPVariable& w, const std::vector<int>& s,
                              const std::vector<int>& t) {
    validate_subset(s, w.n(), "block_measure");
    validate_subset(t, w.n(), "block_measure");
    const double inv = 1.0 / (static_cast<double>(w.n()) * w.n());
    return scaled_block(w, s, t, inv);
}

Interval cut_semidistance(const StepPVariable& u, const StepPVariable& w,
                          const SearchStrategy& strategy) {
    if (u.n() != w.n())
        fail("cut_semidistance: ground sizes differ (use unlabeled_cut_distance)");
    const int n = u.n();
    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        if (n > 14) fail("cut_semidistance: exhaustive mode limited to n <= 14");
        const std::uint64_t budget = enumeration_budget(std::uint64_t{1} << 28);
        if (pow_saturating(4, n, budget) > budget)
            throw std::runtime_error("graphlim: cut_semidistance exhaustive budget exceeded");
        const double v = exhaustive_cut(u, w, std::numeric_limits<double>::infinity());
        return {v, v};
    }
    const int restarts = std::max(1, strategy.samples);
    return {ascent_cut(u, w, restarts, strategy.seed), 1.0};
}

Interval unlabeled_cut_distance(const StepPVariable& u0, const StepPVariable& w0,
                                const SearchStrategy& strategy) {
    auto [u, w] = common_blowup(u0, w0);
    const int n = u.n();

    auto cells_match = [&](const std::vector<int>& p) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(u.cell(i, j) == w.cell(p[i], p[j]))) return false;
        return true;
    };

    auto cell_constant = [](const StepPVariable& x) {
        for (const auto& c : x.cells())
            if (!(c == x.cell(0, 0))) return false;
        return true;
    };

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        if (n > 14 || ((n > 8) && !(cell_constant(u) || cell_constant(w))))
            fail("unlabeled_cut_distance: exhaustive mode limited to n <= 8");
        // Relabeling a cell-constant side changes nothing, so one labeled
        // enumeration is the exact unlabeled value.
        if (cell_constant(u) || cell_constant(w)) {
            const double v = exhaustive_cut(u, w, std::numeric_limits<double>::infinity());
            return {v, v};
        }
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            if (cells_match(p)) return {0.0, 0.0};
            const double v = exhaustive_cut(u, relabel(w, p), best);
            best = std::min(best, v);
        } while (std::next_permutation(p.begin(), p.end()));
        return {best, best};
    }

    // Certified lower bound from permutation-invariant statistics.
    double lower = lp_distance(global_law(u), global_law(w));
    {
        const RealKernel cu = contraction(u), cw = contraction(w);
        const double inv2 = 1.0 / (static_cast<double>(n) * n);
        std::vector<double> ru(static_cast<std::size_t>(n), 0.0),
            rw(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ru[static_cast<std::size_t>(i)] += cu.at(i, j) * inv2;
                rw[static_cast<std::size_t>(i)] += cw.at(i, j) * inv2;
            }
        std::sort(ru.begin(), ru.end());
        std::sort(rw.begin(), rw.end());
        double gap = 0.0;
        for (int i = 0; i < n; ++i)
            gap = std::max(gap, std::abs(ru[static_cast<std::size_t>(i)] -
                                         rw[static_cast<std::size_t>(i)]));
        double bound = 0.0;
        for (const auto& c : u.cells())
            for (std::size_t a = 0; a < c.size(); ++a) bound = std::max(bound, std::abs(c.coord(a, 0)));
        for (const auto& c : w.cells())
            for (std::size_t a = 0; a < c.size(); ++a) bound = std::max(bound, std::abs(c.coord(a, 0)));
        // For mass-m measures supported in [-B, B], means differ by at most
        // (m + 2B) times the lp distance; rows are mass-1/n blocks.
        lower = std::max(lower, gap / (1.0 / n + 2.0 * bound));
    }

    // Relabelings cannot matter when either side is cell-constant.
    if (cell_constant(u) || cell_constant(w)) {
        const double est =
            ascent_cut(u, w, std::max(1, strategy.samples), mix_seed(strategy.seed, 7, 0));
        return {std::max(lower, 0.0), std::max(est, lower)};
    }

    // Candidate relabelings: identity plus random permutations, improved by
    // transposition descent on the contraction alignment cost.
    const CounterRng rng(strategy.seed);
    const RealKernel cu = contraction(u), cw = contraction(w);
    auto align_cost = [&](const std::vector<int>& p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += std::abs(cu.at(i, j) - cw.at(p[i], p[j]));
        return s;
    };
    auto descend = [&](std::vector<int> p) {
        double cost = align_cost(p);
        bool improved = true;
        int sweeps = 0;
        while (improved && n <= 64 && sweeps++ < 4) {
            improved = false;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
                    const double c2 = align_cost(p);
                    if (c2 < cost - 1e-15) {
                        cost = c2;
                        improved = true;
                    } else {
                        std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
                    }
                }
            }
        }
        return std::pair<double, std::vector<int>>(cost, std::move(p));
    };

    const int restarts = std::max(1, strategy.samples);
    std::vector<std::pair<double, std::vector<int>>> candidates;
    {
        std::vector<int> ident(static_cast<std::size_t>(n));
        std::iota(ident.begin(), ident.end(), 0);
        candidates.push_back(descend(ident));
        for (int r = 0; r < restarts; ++r) {
            std::vector<int> p(static_cast<std::size_t>(n));
            std::iota(p.begin(), p.end(), 0);
            for (int i = n - 1; i > 0; --i) {
                const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(r),
                                                         static_cast<std::uint64_t>(i),
                                                         static_cast<std::uint64_t>(i + 1)));
                std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
            }
            candidates.push_back(descend(std::move(p)));
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double upper = std::numeric_limits<double>::infinity();
    const int evals = std::min<std::size_t>(3, candidates.size());
    for (int c = 0; c < evals; ++c) {
        const auto& p = candidates[static_cast<std::size_t>(c)].second;
        if (cells_match(p)) return {0.0, 0.0};
        const StepPVariable wp = relabel(w, p);
        upper = std::min(upper, ascent_cut(u, wp, std::min(restarts, 6),
                                           mix_seed(strategy.seed, 7, static_cast<std::uint64_t>(c))));
    }
    return {lower, std::max(upper, lower)};
}

double hom_density(const DecoratedGraph& g, const StepPVariable& w) {
    const int n = w.n();
    const int v = g.vertices;
    const std::uint64_t budget = enumeration_budget(100'000'000);
    if (pow_saturating(static_cast<std::uint64_t>(n), v, budget) > budget)
        throw std::runtime_error("graphlim: hom_density budget exceeded");

    // Per-edge decoration integrals against every cell.
    std::vector<std::vector<double>> edge_vals(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        edge_vals[e].resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                edge_vals[e][static_cast<std::size_t>(i) * n + j] =
                    measure_integral(w.cell(i, j), g.beta[e]);
    }

    std::vector<int> map(static_cast<std::size_t>(v), 0);
    double total = 0.0;
    while (true) {
        double prod = 1.0;
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const auto [a, b] = g.edges[e];
            prod *= edge_vals[e][static_cast<std::size_t>(map[static_cast<std::size_t>(a)]) * n +
                                 map[static_cast<std::size_t>(b)]];
            if (prod == 0.0) break;
        }
        total += prod;
        int pos = 0;
        while (pos < v) {
            if (++map[static_cast<std::size_t>(pos)] < n) break;
            map[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == v) break;
    }
    return total / std::pow(static_cast<double>(n), v);
}

Interval overlay(const StepPVariable& w, const DecoratedGraph& g, const SearchStrategy& strategy,
                 std::vector<int>* rounded_sizes) {
    const int n = w.n();
    const int k = g.vertices;
    if (g.alpha.empty()) fail("overlay: vertex weights required");

    // Round alpha to block sizes by largest remainder.
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    {
        std::vector<std::pair<double, int>> rema;
        int assigned = 0;
        for (int i = 0; i < k; ++i) {
            const double exact = g.alpha[static_cast<std::size_t>(i)] * n;
            sizes[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(exact));
            assigned += sizes[static_cast<std::size_t>(i)];
            rema.emplace_back(exact - std::floor(exact), i);
        }
        std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (int r = 0; r < n - assigned; ++r)
            ++sizes[static_cast<std::size_t>(rema[static_cast<std::size_t>(r)].second)];
    }
    if (rounded_sizes != nullptr) *rounded_sizes = sizes;

    // E[i][j][a*n+b] = <cell(a,b), beta_ij> / n^2, zero when (i,j) is a non-edge.
    const double inv = 1.0 / (static_cast<double>(n) * n);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(k) * k);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [i, j] = g.edges[e];
        auto& tab = table[static_cast<std::size_t>(i) * k + j];
        if (tab.empty()) tab.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                tab[static_cast<std::size_t>(a) * n + b] +=
                    measure_integral(w.cell(a, b), g.beta[e]) * inv;
    }

    auto value_of = [&](const std::vector<int>& assign) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const auto& tab = table[static_cast<std::size_t>(assign[static_cast<std::size_t>(a)]) *
                                            k +
                                        assign[static_cast<std::size_t>(b)]];
                if (!tab.empty()) s += tab[static_cast<std::size_t>(a) * n + b];
            }
        }
        return s;
    };

    std::vector<int> base;
    for (int i = 0; i < k; ++i)
        base.insert(base.end(), static_cast<std::size_t>(sizes[static_cast<std::size_t>(i)]), i);

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        const std::uint64_t budget = enumeration_budget(2'000'000);
        double count = 1.0;
        {
            // multinomial(n; sizes)
            double lg = std::lgamma(n + 1.0);
            for (int i = 0; i < k; ++i) lg -= std::lgamma(sizes[static_cast<std::size_t>(i)] + 1.0);
            count = std::exp(lg);
        }
        if (count > static_cast<double>(budget))
            throw std::runtime_error("graphlim: overlay exhaustive budget exceeded");
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> assign = base;
        do {
            best = std::max(best, value_of(assign));
        } while (std::next_permutation(assign.begin(), assign.end()));
        return {best, best};
    }

    // Size-preserving swap ascent from random shuffles.
    const CounterRng rng(strategy.seed);
    const int restarts = std::max(1, strategy.samples);
    double best = value_of(base);
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> assign = base;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(r),
                                                     static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(i + 1)));
            std::swap(assign[static_cast<std::size_t>(i)], assign[static_cast<std::size_t>(j)]);
        }
        double cur = value_of(assign);
        const int budget_moves = 200 * n;
        for (int trial = 0; trial < budget_moves; ++trial) {
            const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(restarts + r),
                                                     2 * static_cast<std::uint64_t>(trial),
                                                     static_cast<std::uint64_t>(n)));
            const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(restarts + r),
                                                     2 * static_cast<std::uint64_t>(trial) + 1,
                                                     static_cast<std::uint64_t>(n)));
            if (assign[static_cast<std::size_t>(a)] == assign[static_cast<std::size_t>(b)]) continue;
            std::swap(assign[static_cast<std::size_t>(a)], assign[static_cast<std::size_t>(b)]);
            const double val = value_of(assign);
            if (val > cur + 1e-15)
                cur = val;
            else
                std::swap(assign[static_cast<std::size_t>(a)], assign[static_cast<std::size_t>(b)]);
        }
        best = std::max(best, cur);
    }

    // Separable upper bound: each ground pair contributes at most its best
    // table entry.
    double upper = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double m = 0.0;  // empty table entries contribute zero
            for (const auto& tab : table)
                if (!tab.empty()) m = std::max(m, tab[static_cast<std::size_t>(a) * n + b]);
            upper += m;
        }
    }
    return {best, std::max(upper, best)};
}

QuotientGraph quotient(const StepPVariable& w, const FunctionPartition& p) {
    if (p.n != w.n()) fail("quotient: partition size mismatch");
    const int n = w.n();
    const int k = p.k;
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
    for (int x = 0; x < n; ++x)
        blocks[static_cast<std::size_t>(p.assign[static_cast<std::size_t>(x)])].push_back(x);

    std::vector<double> alpha(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        alpha[static_cast<std::size_t>(i)] =
            static_cast<double>(blocks[static_cast<std::size_t>(i)].size()) / n;

    std::vector<DiscreteMeasure> beta(static_cast<std::size_t>(k) * k, DiscreteMeasure(1));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const auto& si = blocks[static_cast<std::size_t>(i)];
            const auto& sj = blocks[static_cast<std::size_t>(j)];
            if (si.empty() || sj.empty()) continue;
            const double scale = 1.0 / (static_cast<double>(si.size()) * sj.size());
            beta[static_cast<std::size_t>(i) * k + j] = scaled_block(w, si, sj, scale);
        }
    }
    return QuotientGraph(k, std::move(alpha), std::move(beta));
}

double d1_distance(const QuotientGraph& a, const QuotientGraph& b) {
    if (a.k != b.k) fail("d1_distance: quotient sizes differ");
    const int k = a.k;
    double total = 0.0;
    for (int i = 0; i < k; ++i)
        total += std::abs(a.alpha[static_cast<std::size_t>(i)] - b.alpha[static_cast<std::size_t>(i)]);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double ma = a.alpha[static_cast<std::size_t>(i)] * a.alpha[static_cast<std::size_t>(j)];
            const double mb = b.alpha[static_cast<std::size_t>(i)] * b.alpha[static_cast<std::size_t>(j)];
            const DiscreteMeasure sa = scale_mix({a.at(i, j)}, {ma});
            const DiscreteMeasure sb = scale_mix({b.at(i, j)}, {mb});
            const double gap = std::abs(sa.total_mass() - sb.total_mass());
            if (gap <= kMassTol) {
                total += lp_mass_distance(sa, sb);
            } else {
                // Unequal block masses: compare at the common mass and add
                // the gap as an additive term.
                const double cm = std::min(sa.total_mass(), sb.total_mass());
                if (cm > 0.0) {
                    const DiscreteMeasure ra = scale_mix({sa}, {cm / sa.total_mass()});
                    const DiscreteMeasure rb = scale_mix({sb}, {cm / sb.total_mass()});
                    total += lp_mass_distance(ra, rb) + gap;
                } else {
                    total += gap;
                }
            }
        }
    }
    return total;
}

Interval quotient_set_distance(const StepPVariable& u0, const StepPVariable& w0, int k,
                               const SearchStrategy& strategy, bool label_minimized) {
    if (k < 1) fail("quotient_set_distance: order must be positive");
    if (label_minimized && k > 6) fail("quotient_set_distance: label minimization limited to k <= 6");
    auto [u, w] = common_blowup(u0, w0);
    const int n = u.n();

    auto pair_distance = [&](const QuotientGraph& a, const QuotientGraph& b) {
        if (!label_minimized) return d1_distance(a, b);
        std::vector<int> p(static_cast<std::size_t>(k));
        std::iota(p.begin(), p.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, d1_distance(a, permuted_quotient(b, p)));
        } while (std::next_permutation(p.begin(), p.end()));
        return best;
    };

    struct Side {
        std::vector<QuotientGraph> members;
        std::vector<std::vector<int>> provenance;
        std::unordered_set<std::string> keys;
    };
    auto collect = [&](const StepPVariable& x, const SearchStrategy& strat) {
        Side side;
        auto push = [&](const std::vector<int>& assign) {
            QuotientGraph q = quotient(x, FunctionPartition(n, k, assign));
            if (side.keys.insert(quotient_key(q)).second) {
                side.members.push_back(std::move(q));
                side.provenance.push_back(assign);
            }
        };
        if (strat.kind == SearchStrategy::Kind::Exhaustive) {
            const std::uint64_t budget = enumeration_budget(2'000'000);
            if (pow_saturating(static_cast<std::uint64_t>(k), n, budget) > budget)
                throw std::runtime_error("graphlim: quotient_set_distance budget exceeded");
            std::vector<int> assign(static_cast<std::size_t>(n), 0);
            while (true) {
                push(assign);
                int pos = 0;
                while (pos < n) {
                    if (++assign[static_cast<std::size_t>(pos)] < k) break;
                    assign[static_cast<std::size_t>(pos)] = 0;
                    ++pos;
                }
                if (pos == n) break;
            }
        } else {
            const CounterRng rng(strat.seed);
            for (int s = 0; s < std::max(1, strat.samples); ++s) {
                std::vector<int> assign(static_cast<std::size_t>(n));
                for (int x2 = 0; x2 < n; ++x2)
                    assign[static_cast<std::size_t>(x2)] = static_cast<int>(
                        rng.below(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(x2),
                                  static_cast<std::uint64_t>(k)));
                push(assign);
            }
        }
        return side;
    };

    const Side a = collect(u, strategy.kind == SearchStrategy::Kind::Exhaustive
                                  ? strategy
                                  : SearchStrategy::random(strategy.samples,
                                                           mix_seed(strategy.seed, 11, 0)));
    const Side b = collect(w, strategy.kind == SearchStrategy::Kind::Exhaustive
                                  ? strategy
                                  : SearchStrategy::random(strategy.samples,
                                                           mix_seed(strategy.seed, 11, 1)));

    auto directed = [&](const Side& from, const Side& to) {
        double sup = 0.0;
        for (std::size_t i = 0; i < from.members.size(); ++i) {
            if (to.keys.count(quotient_key(from.members[i]))) continue;
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& q : to.members) {
                inf = std::min(inf, pair_distance(from.members[i], q));
                if (inf <= sup) break;
            }
            sup = std::max(sup, inf);
        }
        return sup;
    };
    const double dist = std::max(directed(a, b), directed(b, a));

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) return {dist, dist};

    double lower = 0.0;
    if (strategy.kind == SearchStrategy::Kind::LocalSearch) {
        // Best-response refinement of the per-member minima.
        const CounterRng rng(mix_seed(strategy.seed, 13, 0));
        auto refine_dir = [&](const Side& base, const Side& other, const StepPVariable& x,
                              std::uint64_t stream) {
            double acc = 0.0;
            for (std::size_t i = 0; i < base.members.size(); ++i) {
                double cur = std::numeric_limits<double>::infinity();
                std::size_t argmin = 0;
                for (std::size_t j = 0; j < other.members.size(); ++j) {
                    const double d = pair_distance(base.members[i], other.members[j]);
                    if (d < cur) {
                        cur = d;
                        argmin = j;
                    }
                }
                if (cur <= acc) continue;
                std::vector<int> assign = other.provenance[argmin];
                const int budget_moves = 200 * n;
                for (int trial = 0; trial < budget_moves && cur > acc; ++trial) {
                    const int xx = static_cast<int>(
                        rng.below(stream + 2 * i, 2 * static_cast<std::uint64_t>(trial),
                                  static_cast<std::uint64_t>(n)));
                    int cc = static_cast<int>(
                        rng.below(stream + 2 * i, 2 * static_cast<std::uint64_t>(trial) + 1,
                                  static_cast<std::uint64_t>(k)));
                    const int old = assign[static_cast<std::size_t>(xx)];
                    if (cc == old) cc = (cc + 1) % k;
                    if (cc == old) continue;
                    assign[static_cast<std::size_t>(xx)] = cc;
                    const double d =
                        pair_distance(base.members[i], quotient(x, FunctionPartition(n, k, assign)));
                    if (d < cur - 1e-15)
                        cur = d;
                    else
                        assign[static_cast<std::size_t>(xx)] = old;
                }
                acc = std::max(acc, cur);
            }
            return acc;
        };
        lower = std::max(refine_dir(a, b, w, 101), refine_dir(b, a, u, 202));
    }
    return {std::min(lower, dist), dist};
}

}  // namespace graphlim
