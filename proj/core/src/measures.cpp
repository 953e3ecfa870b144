#include "graphlim/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

// Lexicographic order on (atom, weight) with exact double comparisons.
struct AtomRef {
    const double* a;
    double w;
};

bool lex_less(const double* x, const double* y, int dim) {
    for (int c = 0; c < dim; ++c) {
        if (x[c] < y[c]) return true;
        if (x[c] > y[c]) return false;
    }
    return false;
}

double sup_dist(const double* x, const double* y, int dim) {
    double d = 0.0;
    for (int c = 0; c < dim; ++c) d = std::max(d, std::abs(x[c] - y[c]));
    return d;
}

double euclid(const double* x, const double* y, int dim) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
        const double d = x[c] - y[c];
        s += d * d;
    }
    return std::sqrt(s);
}

// Incremental bipartite max flow (Dinic). Edges may be added between calls
// to augment(); residual state persists, which is valid because capacity is
// only ever added.
class CouplingFlow {
public:
    CouplingFlow(const std::vector<double>& supply, const std::vector<double>& demand)
        : na_(supply.size()), nb_(demand.size()) {
        const int n = static_cast<int>(na_ + nb_) + 2;
        head_.assign(n, -1);
        level_.assign(n, -1);
        iter_.assign(n, -1);
        src_ = n - 2;
        dst_ = n - 1;
        for (std::size_t i = 0; i < na_; ++i) add_edge(src_, static_cast<int>(i), supply[i]);
        for (std::size_t j = 0; j < nb_; ++j)
            add_edge(static_cast<int>(na_ + j), dst_, demand[j]);
    }

    void connect(std::size_t i, std::size_t j) {
        add_edge(static_cast<int>(i), static_cast<int>(na_ + j),
                 std::numeric_limits<double>::infinity());
    }

    // Pushes as much additional flow as possible; returns the new total.
    double augment() {
        while (bfs()) {
            std::copy(head_.begin(), head_.end(), iter_.begin());
            while (true) {
                const double f = dfs(src_, std::numeric_limits<double>::infinity());
                if (f <= kEps) break;
                total_ += f;
            }
        }
        return total_;
    }

private:
    static constexpr double kEps = 1e-15;

    struct Edge {
        int to;
        int next;
        double cap;
    };

    void add_edge(int a, int b, double cap) {
        edges_.push_back({b, head_[a], cap});
        head_[a] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({a, head_[b], 0.0});
        head_[b] = static_cast<int>(edges_.size()) - 1;
    }

    bool bfs() {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(src_);
        level_[src_] = 0;
        for (std::size_t q = 0; q < queue_.size(); ++q) {
            const int v = queue_[q];
            for (int e = head_[v]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap > kEps && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[v] + 1;
                    queue_.push_back(edges_[e].to);
                }
            }
        }
        return level_[dst_] >= 0;
    }

    double dfs(int v, double limit) {
        if (v == dst_) return limit;
        for (int& e = iter_[v]; e >= 0; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > kEps && level_[ed.to] == level_[v] + 1) {
                const double f = dfs(ed.to, std::min(limit, ed.cap));
                if (f > kEps) {
                    ed.cap -= f;
                    edges_[e ^ 1].cap += f;
                    return f;
                }
            }
        }
        return 0.0;
    }

    std::size_t na_, nb_;
    int src_ = 0, dst_ = 0;
    double total_ = 0.0;
    std::vector<Edge> edges_;
    std::vector<int> head_, level_, iter_;
    std::vector<int> queue_;
};

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim) : dim_(dim) {
    if (dim < 1) fail("DiscreteMeasure dim must be positive");
}

DiscreteMeasure::DiscreteMeasure(int dim, const std::vector<std::vector<double>>& atoms,
                                 const std::vector<double>& weights)
    : dim_(dim) {
    if (dim < 1) fail("DiscreteMeasure dim must be positive");
    if (atoms.size() != weights.size()) fail("atoms/weights length mismatch");
    atoms_.reserve(atoms.size() * static_cast<std::size_t>(dim));
    for (const auto& a : atoms) {
        if (static_cast<int>(a.size()) != dim) fail("atom dimension mismatch");
        atoms_.insert(atoms_.end(), a.begin(), a.end());
    }
    weights_ = weights;
    canonicalize();
}

DiscreteMeasure DiscreteMeasure::from_flat(int dim, std::vector<double> atoms,
                                           std::vector<double> weights) {
    DiscreteMeasure m(dim);
    if (atoms.size() != weights.size() * static_cast<std::size_t>(dim))
        fail("flat atom storage size mismatch");
    m.atoms_ = std::move(atoms);
    m.weights_ = std::move(weights);
    m.canonicalize();
    return m;
}

DiscreteMeasure DiscreteMeasure::dirac(double x) { return from_flat(1, {x}, {1.0}); }

DiscreteMeasure DiscreteMeasure::dirac(const std::vector<double>& point) {
    return from_flat(static_cast<int>(point.size()), point, {1.0});
}

void DiscreteMeasure::canonicalize() {
    const std::size_t n = weights_.size();
    for (std::size_t i = 0; i < n * static_cast<std::size_t>(dim_); ++i)
        if (!std::isfinite(atoms_[i])) fail("non-finite atom coordinate");
    for (double w : weights_) {
        if (!std::isfinite(w)) fail("non-finite weight");
        if (w < 0.0) fail("negative weight");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double* x = atoms_.data() + i * static_cast<std::size_t>(dim_);
        const double* y = atoms_.data() + j * static_cast<std::size_t>(dim_);
        if (lex_less(x, y, dim_)) return true;
        if (lex_less(y, x, dim_)) return false;
        return weights_[i] < weights_[j];
    });

    std::vector<double> out_atoms;
    std::vector<double> out_weights;
    out_atoms.reserve(atoms_.size());
    out_weights.reserve(n);
    for (std::size_t idx : order) {
        const double* a = atoms_.data() + idx * static_cast<std::size_t>(dim_);
        const double w = weights_[idx];
        if (!out_weights.empty()) {
            const double* rep = out_atoms.data() + (out_weights.size() - 1) * dim_;
            if (sup_dist(rep, a, dim_) <= kAtomMergeTol) {
                out_weights.back() += w;
                continue;
            }
        }
        out_atoms.insert(out_atoms.end(), a, a + dim_);
        out_weights.push_back(w);
    }

    // Drop atoms whose merged weight is exactly zero.
    atoms_.clear();
    weights_.clear();
    for (std::size_t i = 0; i < out_weights.size(); ++i) {
        if (out_weights[i] == 0.0) continue;
        const double* a = out_atoms.data() + i * static_cast<std::size_t>(dim_);
        atoms_.insert(atoms_.end(), a, a + dim_);
        weights_.push_back(out_weights[i]);
    }
}

double DiscreteMeasure::total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool DiscreteMeasure::is_probability(double tol) const {
    return std::abs(total_mass() - 1.0) <= tol;
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
    return dim_ == other.dim_ && atoms_ == other.atoms_ && weights_ == other.weights_;
}

bool DiscreteMeasure::canonical_less(const DiscreteMeasure& other) const {
    if (dim_ != other.dim_) return dim_ < other.dim_;
    if (atoms_ != other.atoms_)
        return std::lexicographical_compare(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                                            other.atoms_.end());
    return std::lexicographical_compare(weights_.begin(), weights_.end(), other.weights_.begin(),
                                        other.weights_.end());
}

std::string DiscreteMeasure::canonical_key() const {
    std::string key;
    key.resize(sizeof(int) + (atoms_.size() + weights_.size()) * sizeof(double));
    char* p = key.data();
    std::memcpy(p, &dim_, sizeof(int));
    p += sizeof(int);
    std::memcpy(p, atoms_.data(), atoms_.size() * sizeof(double));
    p += atoms_.size() * sizeof(double);
    std::memcpy(p, weights_.data(), weights_.size() * sizeof(double));
    return key;
}

MeasureSet::MeasureSet(std::vector<DiscreteMeasure> ms) : members(std::move(ms)) {
    if (members.empty()) fail("MeasureSet must be non-empty");
    for (const auto& m : members)
        if (m.dim() != members.front().dim()) fail("MeasureSet dim mismatch");
}

double lp_mass_distance(const DiscreteMeasure& mu_in, const DiscreteMeasure& nu_in) {
    if (mu_in.dim() != nu_in.dim()) fail("lp distance: dimension mismatch");
    if (mu_in == nu_in) return 0.0;

    const double m1 = mu_in.total_mass();
    const double m2 = nu_in.total_mass();
    if (std::abs(m1 - m2) > kMassTol) fail("lp distance: total masses differ");
    const double m = 0.5 * (m1 + m2);
    if (mu_in.is_zero() || nu_in.is_zero()) return std::max(m1, m2);

    // Canonical argument order makes the computation symmetric bit-exactly.
    const bool swap = nu_in.canonical_less(mu_in);
    const DiscreteMeasure& mu = swap ? nu_in : mu_in;
    const DiscreteMeasure& nu = swap ? mu_in : nu_in;

    const std::size_t na = mu.size(), nb = nu.size();
    const int dim = mu.dim();

    struct Pair {
        double d;
        std::uint32_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        const double* x = mu.flat_atoms().data() + i * static_cast<std::size_t>(dim);
        for (std::size_t j = 0; j < nb; ++j) {
            const double* y = nu.flat_atoms().data() + j * static_cast<std::size_t>(dim);
            pairs.push_back({euclid(x, y, dim), static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    CouplingFlow flow(mu.weights(), nu.weights());
    double best = m;  // no-edge segment: F = 0
    std::size_t k = 0;
    while (k < pairs.size()) {
        const double t = pairs[k].d;
        if (t >= best) break;
        while (k < pairs.size() && pairs[k].d == t) {
            flow.connect(pairs[k].i, pairs[k].j);
            ++k;
        }
        const double f = flow.augment();
        best = std::min(best, std::max(t, m - f));
        if (m - f <= t) break;
    }
    return best;
}

double lp_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != nu.dim()) fail("lp_distance: dimension mismatch");
    if (mu.is_zero() || nu.is_zero()) fail("lp_distance: empty support");
    if (!mu.is_probability() || !nu.is_probability())
        fail("lp_distance: inputs must be probability measures");
    return lp_mass_distance(mu, nu);
}

double lp_distance_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != nu.dim()) fail("lp_distance_oracle: dimension mismatch");
    if (mu.is_zero() || nu.is_zero()) fail("lp_distance_oracle: empty support");
    if (!mu.is_probability() || !nu.is_probability())
        fail("lp_distance_oracle: inputs must be probability measures");
    const std::size_t na = mu.size(), nb = nu.size();
    if (na + nb > 12) fail("lp_distance_oracle: combined support exceeds 12 atoms");
    if (mu == nu) return 0.0;

    const int dim = mu.dim();
    std::vector<double> d(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            d[i * nb + j] = euclid(mu.flat_atoms().data() + i * dim,
                                   nu.flat_atoms().data() + j * dim, dim);

    std::vector<double> thresholds(d);
    thresholds.push_back(0.0);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    // mass(U^t) on the other side, for a subset mask of one side.
    auto enlarged_mass = [&](std::uint32_t mask, bool mu_side, double eps) {
        double s = 0.0;
        if (mu_side) {  // U subset of supp(mu): measure nu(U^eps)
            for (std::size_t j = 0; j < nb; ++j) {
                for (std::size_t i = 0; i < na; ++i) {
                    if ((mask >> i & 1u) && d[i * nb + j] <= eps) {
                        s += nu.weight(j);
                        break;
                    }
                }
            }
        } else {
            for (std::size_t i = 0; i < na; ++i) {
                for (std::size_t j = 0; j < nb; ++j) {
                    if ((mask >> j & 1u) && d[i * nb + j] <= eps) {
                        s += mu.weight(i);
                        break;
                    }
                }
            }
        }
        return s;
    };

    std::vector<double> mu_mass(std::size_t{1} << na, 0.0);
    for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
        const std::uint32_t low = mask & (mask - 1);
        const int bit = std::countr_zero(mask);
        mu_mass[mask] = mu_mass[low] + mu.weight(static_cast<std::size_t>(bit));
    }
    std::vector<double> nu_mass(std::size_t{1} << nb, 0.0);
    for (std::uint32_t mask = 1; mask < (1u << nb); ++mask) {
        const std::uint32_t low = mask & (mask - 1);
        const int bit = std::countr_zero(mask);
        nu_mass[mask] = nu_mass[low] + nu.weight(static_cast<std::size_t>(bit));
    }

    std::vector<double> candidates(thresholds);
    candidates.push_back(1.0);
    for (double t : thresholds) {
        for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
            const double gap = mu_mass[mask] - enlarged_mass(mask, true, t);
            if (gap > 0.0) candidates.push_back(gap);
        }
        for (std::uint32_t mask = 1; mask < (1u << nb); ++mask) {
            const double gap = nu_mass[mask] - enlarged_mass(mask, false, t);
            if (gap > 0.0) candidates.push_back(gap);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    auto feasible = [&](double eps) {
        for (std::uint32_t mask = 1; mask < (1u << na); ++mask)
            if (mu_mass[mask] > enlarged_mass(mask, true, eps) + eps + 1e-12) return false;
        for (std::uint32_t mask = 1; mask < (1u << nb); ++mask)
            if (nu_mass[mask] > enlarged_mass(mask, false, eps) + eps + 1e-12) return false;
        return true;
    };

    // Feasibility is monotone in eps, so binary search the candidate list.
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

double hausdorff_distance(const MeasureSet& a, const MeasureSet& b) {
    if (a.dim() != b.dim()) fail("hausdorff_distance: dimension mismatch");
    auto directed = [](const MeasureSet& from, const MeasureSet& to) {
        double sup = 0.0;
        for (const auto& x : from.members) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& y : to.members) {
                if (x == y) {
                    inf = 0.0;
                    break;
                }
                inf = std::min(inf, lp_distance(x, y));
                if (inf == 0.0) break;
            }
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(a, b), directed(b, a));
}

DiscreteMeasure marginal(const DiscreteMeasure& mu, const std::vector<int>& coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < 0 || coords[i] >= mu.dim()) fail("marginal: coordinate out of range");
        for (std::size_t j = i + 1; j < coords.size(); ++j)
            if (coords[i] == coords[j]) fail("marginal: duplicate coordinate");
    }
    if (coords.empty()) fail("marginal: empty coordinate list");
    const int dout = static_cast<int>(coords.size());
    std::vector<double> atoms;
    atoms.reserve(mu.size() * coords.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (int c : coords) atoms.push_back(mu.coord(i, c));
    return DiscreteMeasure::from_flat(dout, std::move(atoms), mu.weights());
}

DiscreteMeasure restrict(const DiscreteMeasure& mu, const Box& box) {
    if (static_cast<int>(box.lo.size()) != mu.dim() || static_cast<int>(box.hi.size()) != mu.dim())
        fail("restrict: box dimension mismatch");
    std::vector<double> atoms;
    std::vector<double> weights;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        bool inside = true;
        for (int c = 0; c < mu.dim(); ++c) {
            const double x = mu.coord(i, c);
            if (x < box.lo[static_cast<std::size_t>(c)] || x > box.hi[static_cast<std::size_t>(c)]) {
                inside = false;
                break;
            }
        }
        if (inside) {
            const auto a = mu.atom(i);
            atoms.insert(atoms.end(), a.begin(), a.end());
            weights.push_back(mu.weight(i));
        }
    }
    return DiscreteMeasure::from_flat(mu.dim(), std::move(atoms), std::move(weights));
}

DiscreteMeasure scale_mix(const std::vector<DiscreteMeasure>& measures,
                          const std::vector<double>& coefficients) {
    if (measures.size() != coefficients.size()) fail("scale_mix: length mismatch");
    if (measures.empty()) fail("scale_mix: empty input");
    const int dim = measures.front().dim();
    std::vector<double> atoms;
    std::vector<double> weights;
    for (std::size_t k = 0; k < measures.size(); ++k) {
        if (measures[k].dim() != dim) fail("scale_mix: dimension mismatch");
        if (coefficients[k] < 0.0) fail("scale_mix: negative coefficient");
        for (std::size_t i = 0; i < measures[k].size(); ++i) {
            const auto a = measures[k].atom(i);
            atoms.insert(atoms.end(), a.begin(), a.end());
            weights.push_back(coefficients[k] * measures[k].weight(i));
        }
    }
    return DiscreteMeasure::from_flat(dim, std::move(atoms), std::move(weights));
}

double tau(const DiscreteMeasure& mu) {
    double best = 0.0;
    for (int c = 0; c < mu.dim(); ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * std::abs(mu.coord(i, c));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace graphlim
