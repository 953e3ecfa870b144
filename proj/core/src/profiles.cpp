#include "graphlim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "graphlim/rng.hpp"

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b);
}

// Number of labeled k-partitions of [n], saturating at cap.
std::uint64_t pow_saturating(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        v *= base;
    }
    return v;
}

std::string atom_key(const double* coords, int dim) {
    std::string key(static_cast<std::size_t>(dim) * sizeof(double), '\0');
    std::memcpy(key.data(), coords, key.size());
    return key;
}

// Profile measure of a partition with incremental single-element moves.
// Weights in the accumulator drift by ~1 ulp per update, which is fine for
// search; results that become part of a ProfileSet are rebuilt canonically.
class PartitionProfile {
public:
    PartitionProfile(const StepPVariable& w, int k) : w_(&w), k_(k), n_(w.n()) {}

    void reset(std::vector<int> assign) {
        assign_ = std::move(assign);
        map_.clear();
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) pair_contrib(i, j, +1.0);
    }

    const std::vector<int>& assign() const { return assign_; }

    void move_point(int x, int c) {
        if (assign_[static_cast<std::size_t>(x)] == c) return;
        touch_point(x, -1.0);
        assign_[static_cast<std::size_t>(x)] = c;
        touch_point(x, +1.0);
    }

    DiscreteMeasure measure() const {
        const int dim = 2 * k_ + 1;
        std::vector<double> atoms;
        std::vector<double> weights;
        atoms.reserve(map_.size() * static_cast<std::size_t>(dim));
        weights.reserve(map_.size());
        for (const auto& [key, wgt] : map_) {
            if (wgt <= 1e-15) continue;
            const std::size_t prev = atoms.size();
            atoms.resize(prev + static_cast<std::size_t>(dim));
            std::memcpy(atoms.data() + prev, key.data(), key.size());
            weights.push_back(wgt);
        }
        return DiscreteMeasure::from_flat(dim, std::move(atoms), std::move(weights));
    }

private:
    void touch_point(int x, double sign) {
        for (int j = 0; j < n_; ++j) {
            if (j == x) continue;
            pair_contrib(x, j, sign);
            pair_contrib(j, x, sign);
        }
        pair_contrib(x, x, sign);
    }

    void pair_contrib(int i, int j, double sign) {
        const DiscreteMeasure& c = w_->cell(i, j);
        const double scale = sign / (static_cast<double>(n_) * n_);
        const int dim = 2 * k_ + 1;
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (int l = 0; l < k_; ++l) {
            coords[static_cast<std::size_t>(2 * l)] =
                assign_[static_cast<std::size_t>(i)] == l ? 1.0 : 0.0;
            coords[static_cast<std::size_t>(2 * l + 1)] =
                assign_[static_cast<std::size_t>(j)] == l ? 1.0 : 0.0;
        }
        for (std::size_t a = 0; a < c.size(); ++a) {
            coords[static_cast<std::size_t>(dim - 1)] = c.coord(a, 0);
            auto [it, inserted] = map_.try_emplace(atom_key(coords.data(), dim), 0.0);
            it->second += scale * c.weight(a);
            if (std::abs(it->second) <= 1e-15 && sign < 0) map_.erase(it);
        }
    }

    const StepPVariable* w_;
    int k_;
    int n_;
    std::vector<int> assign_;
    std::unordered_map<std::string, double> map_;
};

std::vector<int> random_assignment(const CounterRng& rng, std::uint64_t stream, int n, int k) {
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x)
        assign[static_cast<std::size_t>(x)] = static_cast<int>(
            rng.below(stream, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(k)));
    return assign;
}

// First-improvement hill climbing over single-element reassignments.
// Returns the best objective value seen; leaves the profile at its argmin.
double climb(PartitionProfile& prof, int n, int k,
             const std::function<double(const DiscreteMeasure&)>& objective,
             const CounterRng& rng, std::uint64_t stream) {
    double best = objective(prof.measure());
    const int budget = 200 * n;
    for (int trial = 0; trial < budget; ++trial) {
        const int x = static_cast<int>(rng.below(stream, 2 * static_cast<std::uint64_t>(trial),
                                                 static_cast<std::uint64_t>(n)));
        int c = static_cast<int>(rng.below(stream, 2 * static_cast<std::uint64_t>(trial) + 1,
                                           static_cast<std::uint64_t>(k)));
        const int old = prof.assign()[static_cast<std::size_t>(x)];
        if (c == old) c = (c + 1) % k;
        if (c == old) continue;
        prof.move_point(x, c);
        const double val = objective(prof.measure());
        if (val < best - 1e-15) {
            best = val;
        } else {
            prof.move_point(x, old);
        }
    }
    return best;
}

void insert_member(ProfileSet& out, std::unordered_set<std::string>& seen,
                   DiscreteMeasure measure, const std::vector<int>& assign) {
    std::string key = measure.canonical_key();
    if (seen.insert(std::move(key)).second) {
        out.measures.push_back(std::move(measure));
        out.provenance.push_back(assign);
    }
}

}  // namespace

FunctionPartition::FunctionPartition(int n_, int k_, std::vector<int> assign_)
    : n(n_), k(k_), assign(std::move(assign_)) {
    if (n < 1 || k < 1) fail("FunctionPartition sizes must be positive");
    if (static_cast<int>(assign.size()) != n) fail("FunctionPartition assignment size mismatch");
    for (int v : assign)
        if (v < 0 || v >= k) fail("FunctionPartition label out of range");
}

TestVector::TestVector(int n_, std::vector<std::vector<double>> funcs_)
    : n(n_), k(static_cast<int>(funcs_.size())), funcs(std::move(funcs_)) {
    if (n < 1 || k < 1) fail("TestVector sizes must be positive");
    for (auto& f : funcs) {
        if (static_cast<int>(f.size()) != n) fail("TestVector function length mismatch");
        for (double& v : f) v = std::clamp(v, -1.0, 1.0);
    }
}

TestVector TestVector::from_partition(const FunctionPartition& p) {
    std::vector<std::vector<double>> funcs(static_cast<std::size_t>(p.k),
                                           std::vector<double>(static_cast<std::size_t>(p.n), 0.0));
    for (int x = 0; x < p.n; ++x)
        funcs[static_cast<std::size_t>(p.assign[static_cast<std::size_t>(x)])]
             [static_cast<std::size_t>(x)] = 1.0;
    return TestVector(p.n, std::move(funcs));
}

DiscreteMeasure profile_measure(const StepPVariable& w, const TestVector& t) {
    if (t.n != w.n()) fail("profile_measure: ground size mismatch");
    const int n = w.n();
    const int k = t.k;
    const int dim = 2 * k + 1;
    const double scale = 1.0 / (static_cast<double>(n) * n);
    std::vector<double> atoms;
    std::vector<double> weights;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const DiscreteMeasure& c = w.cell(i, j);
            if (c.is_zero()) fail("profile_measure: degenerate zero-measure cell");
            for (std::size_t a = 0; a < c.size(); ++a) {
                for (int l = 0; l < k; ++l) {
                    atoms.push_back(t.funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)]);
                    atoms.push_back(t.funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]);
                }
                atoms.push_back(c.coord(a, 0));
                weights.push_back(c.weight(a) * scale);
            }
        }
    }
    return DiscreteMeasure::from_flat(dim, std::move(atoms), std::move(weights));
}

DiscreteMeasure profile_measure(const StepPVariable& w, const FunctionPartition& p) {
    return profile_measure(w, TestVector::from_partition(p));
}

ProfileSet kprofile(const StepPVariable& w, int k, const SearchStrategy& strategy,
                    const std::function<double(const DiscreteMeasure&)>* objective) {
    if (k < 1) fail("kprofile: order must be positive");
    if (strategy.kind != SearchStrategy::Kind::Exhaustive && strategy.samples < 1)
        fail("kprofile: sampled strategies need at least one sample");
    const int n = w.n();
    ProfileSet out;
    out.k = k;
    std::unordered_set<std::string> seen;

    switch (strategy.kind) {
        case SearchStrategy::Kind::Exhaustive: {
            const std::uint64_t budget = enumeration_budget(2'000'000);
            if (pow_saturating(static_cast<std::uint64_t>(k), n, budget) > budget)
                throw std::runtime_error("graphlim: kprofile exhaustive budget exceeded");
            std::vector<int> assign(static_cast<std::size_t>(n), 0);
            while (true) {
                insert_member(out, seen, profile_measure(w, FunctionPartition(n, k, assign)),
                              assign);
                int pos = 0;
                while (pos < n) {
                    if (++assign[static_cast<std::size_t>(pos)] < k) break;
                    assign[static_cast<std::size_t>(pos)] = 0;
                    ++pos;
                }
                if (pos == n) break;
            }
            break;
        }
        case SearchStrategy::Kind::Random: {
            const CounterRng rng(strategy.seed);
            for (int s = 0; s < strategy.samples; ++s) {
                auto assign = random_assignment(rng, static_cast<std::uint64_t>(s), n, k);
                insert_member(out, seen, profile_measure(w, FunctionPartition(n, k, assign)),
                              assign);
            }
            break;
        }
        case SearchStrategy::Kind::LocalSearch: {
            if (objective == nullptr || !*objective)
                fail("kprofile: local_search requires a caller-supplied objective");
            const CounterRng rng(strategy.seed);
            PartitionProfile prof(w, k);
            for (int s = 0; s < strategy.samples; ++s) {
                prof.reset(random_assignment(rng, 2 * static_cast<std::uint64_t>(s), n, k));
                climb(prof, n, k, *objective, rng, 2 * static_cast<std::uint64_t>(s) + 1);
                auto assign = prof.assign();
                insert_member(out, seen, profile_measure(w, FunctionPartition(n, k, assign)),
                              assign);
            }
            break;
        }
    }
    return out;
}

double profile_hausdorff(const ProfileSet& a, const ProfileSet& b) {
    if (a.k != b.k) fail("profile_hausdorff: profile orders differ");
    auto directed = [](const ProfileSet& from, const ProfileSet& to) {
        std::unordered_set<std::string> keys;
        keys.reserve(to.measures.size());
        for (const auto& m : to.measures) keys.insert(m.canonical_key());
        double sup = 0.0;
        for (const auto& x : from.measures) {
            if (keys.count(x.canonical_key())) continue;
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& y : to.measures) {
                inf = std::min(inf, lp_distance(x, y));
                if (inf <= sup) break;  // cannot raise the sup
            }
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(a, b), directed(b, a));
}

namespace {

// Largest per-member distance after best-response refinement: members are
// visited in decreasing order of their sampled minima and skipped once they
// cannot exceed the current maximum.
double refined_directed_lower(const StepPVariable& other, const ProfileSet& base,
                              const ProfileSet& sampled_other, std::uint64_t seed) {
    const int k = base.k;
    const int n = other.n();
    std::vector<std::pair<double, std::size_t>> order;
    std::vector<std::size_t> argmin(base.measures.size(), 0);
    for (std::size_t i = 0; i < base.measures.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < sampled_other.measures.size(); ++j) {
            const double d = base.measures[i] == sampled_other.measures[j]
                                 ? 0.0
                                 : lp_distance(base.measures[i], sampled_other.measures[j]);
            if (d < best) {
                best = d;
                argmin[i] = j;
            }
        }
        order.emplace_back(best, i);
    }
    std::sort(order.begin(), order.end(), std::greater<>());

    const CounterRng rng(seed);
    PartitionProfile prof(other, k);
    double lower = 0.0;
    for (const auto& [sampled_min, idx] : order) {
        if (sampled_min <= lower) break;  // refinement only decreases minima
        const DiscreteMeasure& target = base.measures[idx];
        std::function<double(const DiscreteMeasure&)> objective =
            [&target](const DiscreteMeasure& m) { return lp_mass_distance(target, m); };
        double refined = sampled_min;
        for (int restart = 0; restart < 8; ++restart) {
            // Restart 0 is seeded with the sampled argmin's partition.
            const std::uint64_t stream = 16 * idx + 2 * static_cast<std::uint64_t>(restart);
            if (restart == 0)
                prof.reset(sampled_other.provenance[argmin[idx]]);
            else
                prof.reset(random_assignment(rng, stream, n, k));
            refined = std::min(refined, climb(prof, n, k, objective, rng, stream + 1));
            if (refined <= lower) break;  // cannot change the maximum any more
        }
        lower = std::max(lower, refined);
    }
    return lower;
}

}  // namespace

DmResult dm_estimate(const StepPVariable& u0, const StepPVariable& w0, int k_max,
                     const SearchStrategy& strategy) {
    if (k_max < 1) fail("dm_estimate: k_max must be positive");
    auto [u, w] = common_blowup(u0, w0);
    DmResult r;
    r.truncation_bound = std::pow(2.0, -k_max);

    // Every profile measure's last-coordinate marginal is the global law, so
    // the lp distance of the global laws lower-bounds every Hausdorff term.
    const double global_gap = lp_distance(global_law(u), global_law(w));

    for (int k = 1; k <= k_max; ++k) {
        const double weight = std::pow(2.0, -k);
        if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
            const ProfileSet a = kprofile(u, k, SearchStrategy::exhaustive());
            const ProfileSet b = kprofile(w, k, SearchStrategy::exhaustive());
            const double d = profile_hausdorff(a, b);
            r.lower += weight * d;
            r.upper += weight * d;
        } else {
            const int m = strategy.samples;
            const ProfileSet a =
                kprofile(u, k, SearchStrategy::random(m, mix_seed(strategy.seed, k, 0)));
            const ProfileSet b =
                kprofile(w, k, SearchStrategy::random(m, mix_seed(strategy.seed, k, 1)));
            const double upper_k = profile_hausdorff(a, b);
            double lower_k = global_gap;
            if (strategy.kind == SearchStrategy::Kind::LocalSearch) {
                const double ab = refined_directed_lower(w, a, b, mix_seed(strategy.seed, k, 2));
                const double ba = refined_directed_lower(u, b, a, mix_seed(strategy.seed, k, 3));
                lower_k = std::max(lower_k, std::max(ab, ba));
            }
            r.lower += weight * std::min(lower_k, upper_k);
            r.upper += weight * upper_k;
        }
    }
    return r;
}

FunctionPartition round_to_partition(const TestVector& t, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) fail("round_to_partition: delta must be in (0, 1)");
    const int n = t.n;
    const int k = t.k;

    // Precondition: the law of (f_1, ..., f_k) must be within delta of the
    // simplex-vertex measures; checked against the nearest-vertex projection.
    {
        const double wgt = 1.0 / n;
        std::vector<double> atoms, proj_atoms;
        std::vector<double> weights(static_cast<std::size_t>(n), wgt);
        for (int x = 0; x < n; ++x) {
            int arg = 0;
            for (int l = 0; l < k; ++l) {
                const double v = t.funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(x)];
                atoms.push_back(v);
                if (v > t.funcs[static_cast<std::size_t>(arg)][static_cast<std::size_t>(x)]) arg = l;
            }
            for (int l = 0; l < k; ++l) proj_atoms.push_back(l == arg ? 1.0 : 0.0);
        }
        const auto mu = DiscreteMeasure::from_flat(k, std::move(atoms), weights);
        const auto nearest = DiscreteMeasure::from_flat(k, std::move(proj_atoms), weights);
        const double measured = lp_distance(mu, nearest);
        if (measured > delta + 1e-12)
            fail("round_to_partition: law is " + std::to_string(measured) +
                 " from the partition measures, beyond delta=" + std::to_string(delta));
    }

    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x) {
        int hits = 0;
        int cell = -1;
        for (int l = 0; l < k; ++l) {
            if (t.funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(x)] > 1.0 - delta) {
                ++hits;
                cell = l;
            }
        }
        assign[static_cast<std::size_t>(x)] = (hits == 1) ? cell : 0;
    }
    return FunctionPartition(n, k, std::move(assign));
}

std::vector<double> quantize_function(const std::vector<double>& f, int levels) {
    if (levels < 1) fail("quantize_function: levels must be positive");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = f[i] * levels;
        const double r = std::round(t);
        const double q = (std::abs(t - r) < 1e-9) ? r : std::ceil(t);
        out[i] = q / levels;
    }
    return out;
}

double symmetry_defect(const StepPVariable& w, int k, const SearchStrategy& strategy) {
    if (k < 1) fail("symmetry_defect: order must be positive");
    const int n = w.n();

    auto swapped = [k](const DiscreteMeasure& m) {
        const int dim = m.dim();
        std::vector<double> atoms(m.flat_atoms());
        for (std::size_t i = 0; i < m.size(); ++i) {
            double* a = atoms.data() + i * static_cast<std::size_t>(dim);
            for (int l = 0; l < k; ++l) std::swap(a[2 * l], a[2 * l + 1]);
        }
        return DiscreteMeasure::from_flat(dim, std::move(atoms), m.weights());
    };

    double defect = 0.0;
    auto consider = [&](const TestVector& t) {
        const DiscreteMeasure m = profile_measure(w, t);
        const DiscreteMeasure s = swapped(m);
        if (!(m == s)) defect = std::max(defect, lp_distance(m, s));
    };

    if (strategy.kind == SearchStrategy::Kind::Exhaustive) {
        const std::uint64_t budget = enumeration_budget(2'000'000);
        if (pow_saturating(2, k * n, budget) > budget)
            throw std::runtime_error("graphlim: symmetry_defect exhaustive budget exceeded");
        const std::uint64_t total = std::uint64_t{1} << static_cast<unsigned>(k * n);
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::vector<std::vector<double>> funcs(
                static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n)));
            for (int l = 0; l < k; ++l)
                for (int x = 0; x < n; ++x)
                    funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(x)] =
                        (mask >> (static_cast<unsigned>(l * n + x)) & 1u) ? 1.0 : 0.0;
            consider(TestVector(n, std::move(funcs)));
        }
    } else {
        const CounterRng rng(strategy.seed);
        for (int s = 0; s < strategy.samples; ++s) {
            std::vector<std::vector<double>> funcs(
                static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n)));
            for (int l = 0; l < k; ++l)
                for (int x = 0; x < n; ++x)
                    funcs[static_cast<std::size_t>(l)][static_cast<std::size_t>(x)] =
                        2.0 * rng.uniform(static_cast<std::uint64_t>(s),
                                          static_cast<std::uint64_t>(l * n + x)) -
                        1.0;
            consider(TestVector(n, std::move(funcs)));
        }
    }
    return defect;
}

}  // namespace graphlim
