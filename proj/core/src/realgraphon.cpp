#include "graphlim/realgraphon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
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

RealKernel difference(const RealKernel& a, const RealKernel& b, const std::vector<int>& p) {
    const int n = a.n;
    std::vector<double> vals(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            vals[static_cast<std::size_t>(i) * n + j] = a.at(i, j) - b.at(p[i], p[j]);
    return RealKernel(n, std::move(vals));
}

// Exact given S: the inner optimum over T is separable per column sign.
double rows_value(const std::vector<double>& colsum) {
    double pos = 0.0, neg = 0.0;
    for (double c : colsum) {
        if (c > 0.0)
            pos += c;
        else
            neg += c;
    }
    return std::max(pos, -neg);
}

double cut_norm_rows(const RealKernel& a) {
    const int n = a.n;
    std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const int bit = std::countr_zero(idx);  // Gray-code neighbor flip
        const double sign = in_s[static_cast<std::size_t>(bit)] ? -1.0 : 1.0;
        in_s[static_cast<std::size_t>(bit)] ^= 1;
        for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += sign * a.at(bit, j);
        best = std::max(best, rows_value(colsum));
    }
    return best / (static_cast<double>(n) * n);
}

double cut_norm_brute(const RealKernel& a) {
    const int n = a.n;
    std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const int bit = std::countr_zero(idx);
        const double sign = in_s[static_cast<std::size_t>(bit)] ? -1.0 : 1.0;
        in_s[static_cast<std::size_t>(bit)] ^= 1;
        for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += sign * a.at(bit, j);

        double acc = 0.0;
        std::vector<char> in_t(static_cast<std::size_t>(n), 0);
        for (std::uint64_t tdx = 1; tdx < total; ++tdx) {
            const int tb = std::countr_zero(tdx);
            const double tsign = in_t[static_cast<std::size_t>(tb)] ? -1.0 : 1.0;
            in_t[static_cast<std::size_t>(tb)] ^= 1;
            acc += tsign * colsum[static_cast<std::size_t>(tb)];
            best = std::max(best, std::abs(acc));
        }
    }
    return best / (static_cast<double>(n) * n);
}

// Alternating maximization: optimal S given T is separable and vice versa.
double cut_norm_ascent(const RealKernel& a, int restarts, std::uint64_t seed) {
    const int n = a.n;
    const CounterRng rng(seed);
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        for (int target = 0; target < 2; ++target) {  // maximize +sum and -sum
            std::vector<char> in_t(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                in_t[static_cast<std::size_t>(j)] = rng.bits(static_cast<std::uint64_t>(r),
                                                             static_cast<std::uint64_t>(j)) &
                                                    1u;
            double prev = -1.0;
            for (int sweep = 0; sweep < 32; ++sweep) {
                std::vector<char> in_s(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    double rowsum = 0.0;
                    for (int j = 0; j < n; ++j)
                        if (in_t[static_cast<std::size_t>(j)]) rowsum += a.at(i, j);
                    in_s[static_cast<std::size_t>(i)] =
                        target == 0 ? (rowsum > 0.0) : (rowsum < 0.0);
                }
                double val = 0.0;
                for (int j = 0; j < n; ++j) {
                    double colsum = 0.0;
                    for (int i = 0; i < n; ++i)
                        if (in_s[static_cast<std::size_t>(i)]) colsum += a.at(i, j);
                    in_t[static_cast<std::size_t>(j)] =
                        target == 0 ? (colsum > 0.0) : (colsum < 0.0);
                    if (in_t[static_cast<std::size_t>(j)]) val += colsum;
                }
                val = std::abs(val);
                if (val <= prev + 1e-15) break;
                prev = val;
            }
            best = std::max(best, prev);
        }
    }
    return best / (static_cast<double>(n) * n);
}

std::string matrix_key(const std::vector<std::vector<double>>& m) {
    std::string key;
    for (const auto& row : m) {
        const std::size_t prev = key.size();
        key.resize(prev + row.size() * sizeof(double));
        std::memcpy(key.data() + prev, row.data(), row.size() * sizeof(double));
    }
    return key;
}

double entrywise_l1(const std::vector<std::vector<double>>& a,
                    const std::vector<std::vector<double>>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) s += std::abs(a[i][j] - b[i][j]);
    return s;
}

}  // namespace

FractionalPartition::FractionalPartition(int n_, std::vector<std::vector<double>> weights_)
    : n(n_), k(static_cast<int>(weights_.size())), weights(std::move(weights_)) {
    if (n < 1 || k < 1) fail("FractionalPartition sizes must be positive");
    for (const auto& row : weights) {
        if (static_cast<int>(row.size()) != n) fail("FractionalPartition row length mismatch");
        for (double v : row)
            if (v < 0.0 || v > 1.0) fail("FractionalPartition entries must lie in [0, 1]");
    }
    for (int x = 0; x < n; ++x) {
        double col = 0.0;
        for (int i = 0; i < k; ++i) col += weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
        if (std::abs(col - 1.0) > 1e-12) fail("FractionalPartition columns must sum to 1");
    }
}

bool FractionalPartition::balanced() const {
    const double target = static_cast<double>(n) / k;
    for (const auto& row : weights) {
        const double s = std::accumulate(row.begin(), row.end(), 0.0);
        if (std::abs(s - target) > 1e-9 * n) return false;
    }
    return true;
}

FractionalPartition FractionalPartition::uniform(int n, int k) {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(n), 1.0 / k));
    return FractionalPartition(n, std::move(w));
}

FractionalPartition FractionalPartition::hard(const std::vector<int>& assign, int k) {
    const int n = static_cast<int>(assign.size());
    std::vector<std::vector<double>> w(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int x = 0; x < n; ++x) {
        if (assign[static_cast<std::size_t>(x)] < 0 || assign[static_cast<std::size_t>(x)] >= k)
            fail("FractionalPartition: label out of range");
        w[static_cast<std::size_t>(assign[static_cast<std::size_t>(x)])][static_cast<std::size_t>(x)] =
            1.0;
    }
    return FractionalPartition(n, std::move(w));
}

double cut_norm(const RealKernel& a, CutNormMode mode) {
    if (mode == CutNormMode::ExhaustiveRows) {
        if (a.n > 22) fail("cut_norm: exhaustive_rows limited to n <= 22");
        const std::uint64_t budget = enumeration_budget(std::uint64_t{1} << 22);
        if ((std::uint64_t{1} << a.n) > budget)
            throw std::runtime_error("graphlim: cut_norm budget exceeded");
        return cut_norm_rows(a);
    }
    if (a.n > 12) fail("cut_norm: bruteforce limited to n <= 12");
    const std::uint64_t budget = enumeration_budget(std::uint64_t{1} << 24);
    if ((std::uint64_t{1} << (2 * a.n)) > budget)
        throw std::runtime_error("graphlim: cut_norm budget exceeded");
    return cut_norm_brute(a);
}

RealKernel blowup(const RealKernel& a, int factor) {
    if (factor < 1) fail("blowup: factor must be positive");
    if (factor == 1) return a;
    const long long big = static_cast<long long>(a.n) * factor;
    if (big > 4096) fail("blowup: resulting kernel too large");
    const int m = static_cast<int>(big);
    std::vector<double> vals(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            vals[static_cast<std::size_t>(i) * m + j] = a.at(i / factor, j / factor);
    return RealKernel(m, std::move(vals));
}

Interval real_cut_distance(const RealKernel& a0, const RealKernel& b0,
                           const SearchStrategy& strategy) {
    const long long l = std::lcm(static_cast<long long>(a0.n), static_cast<long long>(b0.n));
    const RealKernel a = blowup(a0, static_cast<int>(l / a0.n));
    const RealKernel b = blowup(b0, static_cast<int>(l / b0.n));
    const int n = a.n;

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        if (n > 8) fail("real_cut_distance: exhaustive mode limited to n <= 8");
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, cut_norm_rows(difference(a, b, p)));
        } while (std::next_permutation(p.begin(), p.end()));
        return {best, best};
    }

    // Certified lower bound from permutation-invariant statistics: the full
    // rectangle gives the mean gap; singleton rows/columns give sorted
    // row/column sum gaps.
    double lower = std::abs(a.mean() - b.mean());
    {
        const double inv2 = 1.0 / (static_cast<double>(n) * n);
        auto sorted_sums = [&](const RealKernel& x, bool rows) {
            std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sums[static_cast<std::size_t>(rows ? i : j)] += x.at(i, j) * inv2;
            std::sort(sums.begin(), sums.end());
            return sums;
        };
        for (bool rows : {true, false}) {
            const auto sa = sorted_sums(a, rows);
            const auto sb = sorted_sums(b, rows);
            for (int i = 0; i < n; ++i)
                lower = std::max(lower, std::abs(sa[static_cast<std::size_t>(i)] -
                                                 sb[static_cast<std::size_t>(i)]));
        }
    }

    auto constant_kernel = [](const RealKernel& x) {
        for (double v : x.values)
            if (v != x.values.front()) return false;
        return true;
    };
    // Relabelings cannot matter when either kernel is constant.
    if (constant_kernel(a) || constant_kernel(b)) {
        std::vector<int> ident(static_cast<std::size_t>(n));
        std::iota(ident.begin(), ident.end(), 0);
        const RealKernel diff = difference(a, b, ident);
        const double est = (n <= 22) ? cut_norm_rows(diff)
                                     : cut_norm_ascent(diff, std::max(1, strategy.samples),
                                                       mix_seed(strategy.seed, 5, 0));
        return {lower, std::max(est, lower)};
    }

    // Candidate relabelings: identity plus random permutations improved by
    // transposition descent on the entrywise l1 alignment cost.
    const CounterRng rng(strategy.seed);
    auto align_cost = [&](const std::vector<int>& p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += std::abs(a.at(i, j) - b.at(p[i], p[j]));
        return s;
    };
    auto descend = [&](std::vector<int> p) {
        double cost = align_cost(p);
        bool improved = true;
        int sweeps = 0;
        while (improved && n <= 64 && sweeps++ < 4) {
            improved = false;
            for (int x = 0; x < n; ++x) {
                for (int y = x + 1; y < n; ++y) {
                    std::swap(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]);
                    const double c2 = align_cost(p);
                    if (c2 < cost - 1e-15) {
                        cost = c2;
                        improved = true;
                    } else {
                        std::swap(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]);
                    }
                }
            }
        }
        return std::pair<double, std::vector<int>>(cost, std::move(p));
    };

    const int restarts = std::max(1, strategy.samples);
    std::vector<std::pair<double, std::vector<int>>> candidates;
    std::vector<int> ident(static_cast<std::size_t>(n));
    std::iota(ident.begin(), ident.end(), 0);
    candidates.push_back(descend(ident));
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> p = ident;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(r),
                                                     static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(i + 1)));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        candidates.push_back(descend(std::move(p)));
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    double upper = std::numeric_limits<double>::infinity();
    const int evals = static_cast<int>(std::min<std::size_t>(3, candidates.size()));
    for (int c = 0; c < evals; ++c) {
        const RealKernel diff = difference(a, b, candidates[static_cast<std::size_t>(c)].second);
        const double est = (n <= 22)
                               ? cut_norm_rows(diff)
                               : cut_norm_ascent(diff, std::min(restarts, 8),
                                                 mix_seed(strategy.seed, 5,
                                                          static_cast<std::uint64_t>(c)));
        upper = std::min(upper, est);
    }
    return {lower, std::max(upper, lower)};
}

std::vector<std::vector<double>> averaged_quotient(const StepPVariable& w,
                                                   const FractionalPartition& f) {
    if (f.n != w.n()) fail("averaged_quotient: size mismatch");
    const int n = w.n();
    const int k = f.k;
    const RealKernel c = contraction(w);
    // y[i][b] = sum_a f_i(a) c[a][b]
    std::vector<std::vector<double>> y(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < k; ++i)
        for (int a = 0; a < n; ++a) {
            const double fa = f.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
            if (fa == 0.0) continue;
            for (int b = 0; b < n; ++b) y[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] += fa * c.at(a, b);
        }
    const double inv = 1.0 / (static_cast<double>(n) * n);
    std::vector<std::vector<double>> m(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int b = 0; b < n; ++b)
                s += y[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] *
                     f.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s * inv;
        }
    return m;
}

namespace {

// Balanced block sizes by largest-remainder rounding of n/k.
std::vector<int> balanced_sizes(int n, int k) {
    std::vector<int> sizes(static_cast<std::size_t>(k), n / k);
    const int rem = n % k;
    for (int i = 0; i < rem; ++i) ++sizes[static_cast<std::size_t>(i)];
    return sizes;
}

std::vector<std::vector<std::vector<double>>> avq_members(const StepPVariable& w, int k,
                                                          const SearchStrategy& strategy,
                                                          std::uint64_t salt) {
    const int n = w.n();
    std::vector<std::vector<std::vector<double>>> out;
    std::unordered_set<std::string> seen;
    auto push = [&](const FractionalPartition& f) {
        auto m = averaged_quotient(w, f);
        if (seen.insert(matrix_key(m)).second) out.push_back(std::move(m));
    };

    push(FractionalPartition::uniform(n, k));

    const auto sizes = balanced_sizes(n, k);
    std::vector<int> base;
    for (int i = 0; i < k; ++i)
        base.insert(base.end(), static_cast<std::size_t>(sizes[static_cast<std::size_t>(i)]), i);

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        const std::uint64_t budget = enumeration_budget(2'000'000);
        double lg = std::lgamma(n + 1.0);
        for (int i = 0; i < k; ++i) lg -= std::lgamma(sizes[static_cast<std::size_t>(i)] + 1.0);
        if (std::exp(lg) > static_cast<double>(budget))
            throw std::runtime_error("graphlim: avq_set_distance budget exceeded");
        std::vector<int> assign = base;
        do {
            push(FractionalPartition::hard(assign, k));
        } while (std::next_permutation(assign.begin(), assign.end()));
        return out;
    }

    const CounterRng rng(mix_seed(strategy.seed, 17, salt));
    const int samples = std::max(1, strategy.samples);
    for (int s = 0; s < samples; ++s) {
        std::vector<int> assign = base;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(s),
                                                     static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(i + 1)));
            std::swap(assign[static_cast<std::size_t>(i)], assign[static_cast<std::size_t>(j)]);
        }
        push(FractionalPartition::hard(assign, k));
        if (strategy.kind == SearchStrategy::Kind::LocalSearch && k >= 2 && n >= 2) {
            // Balanced fractional interior points: paired mass transfers of
            // step 1/(4n) between two rows at two columns.
            auto fw = FractionalPartition::hard(assign, k).weights;
            const double step = 1.0 / (4.0 * n);
            const int walk = 8 * n;
            for (int t = 0; t < walk; ++t) {
                const std::uint64_t st = static_cast<std::uint64_t>(samples + s);
                const auto ct = static_cast<std::uint64_t>(t);
                const int i = static_cast<int>(rng.below(st, 4 * ct, static_cast<std::uint64_t>(k)));
                int j = static_cast<int>(rng.below(st, 4 * ct + 1, static_cast<std::uint64_t>(k)));
                if (j == i) j = (j + 1) % k;
                const int ca = static_cast<int>(rng.below(st, 4 * ct + 2, static_cast<std::uint64_t>(n)));
                int cb = static_cast<int>(rng.below(st, 4 * ct + 3, static_cast<std::uint64_t>(n)));
                if (cb == ca) cb = (cb + 1) % n;
                auto& fi = fw[static_cast<std::size_t>(i)];
                auto& fj = fw[static_cast<std::size_t>(j)];
                if (fi[static_cast<std::size_t>(ca)] < step || fj[static_cast<std::size_t>(cb)] < step)
                    continue;
                fi[static_cast<std::size_t>(ca)] -= step;
                fj[static_cast<std::size_t>(ca)] += step;
                fj[static_cast<std::size_t>(cb)] -= step;
                fi[static_cast<std::size_t>(cb)] += step;
                push(FractionalPartition(n, fw));
            }
        }
    }
    return out;
}

}  // namespace

Interval avq_set_distance(const StepPVariable& u0, const StepPVariable& w0, int k,
                          const SearchStrategy& strategy) {
    if (k < 1) fail("avq_set_distance: order must be positive");
    auto [u, w] = common_blowup(u0, w0);

    const auto au = avq_members(u, k, strategy, 0);
    const auto aw = avq_members(w, k, strategy, 1);

    auto directed = [&](const auto& from, const auto& to) {
        double sup = 0.0;
        for (const auto& x : from) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& y : to) {
                inf = std::min(inf, entrywise_l1(x, y));
                if (inf <= sup) break;
            }
            sup = std::max(sup, inf);
        }
        return sup;
    };
    const double dist = std::max(directed(au, aw), directed(aw, au));
    if (strategy.kind == SearchStrategy::Kind::Exhaustive) return {dist, dist};

    // Every averaged quotient's entry sum equals the mean of the
    // contraction, so the mean gap is a certified lower bound.
    const double lower = std::abs(contraction(u).mean() - contraction(w).mean());
    return {std::min(lower, dist), dist};
}

double lp_norm(const StepPVariable& w, double p) {
    if (p < 1.0) fail("lp_norm: p must be at least 1");
    const int n = w.n();
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& c : w.cells())
            for (std::size_t a = 0; a < c.size(); ++a) m = std::max(m, std::abs(c.coord(a, 0)));
        return m;
    }
    double s = 0.0;
    for (const auto& c : w.cells())
        for (std::size_t a = 0; a < c.size(); ++a)
            s += c.weight(a) * std::pow(std::abs(c.coord(a, 0)), p);
    return std::pow(s / (static_cast<double>(n) * n), 1.0 / p);
}

StepPVariable normalized(const std::vector<std::vector<double>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    if (n == 0) fail("normalized: empty matrix");
    double l1 = 0.0;
    for (const auto& row : adjacency) {
        if (static_cast<int>(row.size()) != n) fail("normalized: matrix must be square");
        for (double v : row) l1 += std::abs(v);
    }
    l1 /= static_cast<double>(n) * n;
    if (l1 == 0.0) fail("normalized: empty graph has no density normalization");
    std::vector<std::vector<double>> scaled(adjacency);
    for (auto& row : scaled)
        for (double& v : row) v /= l1;
    return from_matrix(scaled);
}

}  // namespace graphlim
