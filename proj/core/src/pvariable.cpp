#include "graphlim/pvariable.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphlim/rng.hpp"

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

constexpr double kCellMassTol = 1e-12;

}  // namespace

RealKernel::RealKernel(int n_, std::vector<double> values_) : n(n_), values(std::move(values_)) {
    if (n < 1) fail("RealKernel size must be positive");
    if (values.size() != static_cast<std::size_t>(n) * n) fail("RealKernel storage size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) fail("RealKernel entries must be finite");
}

double RealKernel::mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

StepPVariable::StepPVariable(int n, std::vector<DiscreteMeasure> cells)
    : n_(n), cells_(std::move(cells)) {
    if (n < 1) fail("StepPVariable ground size must be positive");
    if (cells_.size() != static_cast<std::size_t>(n) * n) fail("StepPVariable cell count mismatch");
    for (const auto& c : cells_) {
        if (c.dim() != 1) fail("StepPVariable cells must be measures on R");
        if (!c.is_zero() && std::abs(c.total_mass() - 1.0) > kCellMassTol)
            fail("StepPVariable cell is neither a probability law nor the zero measure");
    }
}

double StepPVariable::quantile(int i, int j, double p) const {
    const DiscreteMeasure& c = cell(i, j);
    if (c.is_zero()) fail("quantile of a degenerate zero-measure cell");
    double cum = 0.0;
    for (std::size_t a = 0; a + 1 < c.size(); ++a) {
        cum += c.weight(a);
        if (cum >= p) return c.coord(a, 0);
    }
    return c.coord(c.size() - 1, 0);
}

StepPVariable from_matrix(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) fail("from_matrix: empty matrix");
    std::vector<DiscreteMeasure> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != n) fail("from_matrix: matrix must be square");
        for (double v : row) cells.push_back(DiscreteMeasure::dirac(v));
    }
    return StepPVariable(n, std::move(cells));
}

StepPVariable quantile_from_kernel(int n, std::vector<DiscreteMeasure> kernel) {
    for (const auto& c : kernel)
        if (!c.is_probability(kCellMassTol))
            fail("quantile_from_kernel: every entry must be a probability measure");
    return StepPVariable(n, std::move(kernel));
}

DiscreteMeasure global_law(const StepPVariable& w) {
    const double scale = 1.0 / (static_cast<double>(w.n()) * w.n());
    std::vector<double> atoms;
    std::vector<double> weights;
    for (const auto& c : w.cells()) {
        for (std::size_t a = 0; a < c.size(); ++a) {
            atoms.push_back(c.coord(a, 0));
            weights.push_back(c.weight(a) * scale);
        }
    }
    return DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights));
}

RealKernel contraction(const StepPVariable& w) {
    const int n = w.n();
    std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const DiscreteMeasure& c = w.cell(i, j);
            double s = 0.0;
            for (std::size_t a = 0; a < c.size(); ++a) s += c.weight(a) * c.coord(a, 0);
            values[static_cast<std::size_t>(i) * n + j] = s;
        }
    }
    return RealKernel(n, std::move(values));
}

std::vector<std::vector<double>> sample_matrix(const StepPVariable& w, int m, std::uint64_t seed,
                                               bool symmetrize) {
    if (m < 1) fail("sample_matrix: m must be positive");
    const CounterRng rng(seed);
    const int n = w.n();
    std::vector<int> ground(m);
    for (int i = 0; i < m; ++i)
        ground[i] = static_cast<int>(rng.below(0, static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(n)));
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double y = rng.uniform(1, static_cast<std::uint64_t>(i) * m + j);
            out[i][j] = w.quantile(ground[i], ground[j], y);
        }
    }
    if (symmetrize) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < i; ++j) out[i][j] = out[j][i];
    }
    return out;
}

double tail_mass(const StepPVariable& w, double threshold) {
    if (threshold <= 0.0) fail("tail_mass: threshold must be positive");
    const DiscreteMeasure law = global_law(w);
    double s = 0.0;
    for (std::size_t a = 0; a < law.size(); ++a)
        if (std::abs(law.coord(a, 0)) > threshold) s += law.weight(a);
    return s;
}

StepPVariable relabel(const StepPVariable& w, const std::vector<int>& p) {
    const int n = w.n();
    if (static_cast<int>(p.size()) != n) fail("relabel: permutation size mismatch");
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            fail("relabel: not a permutation of the ground set");
        seen[static_cast<std::size_t>(v)] = true;
    }
    std::vector<DiscreteMeasure> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cells.push_back(w.cell(p[i], p[j]));
    return StepPVariable(n, std::move(cells));
}

StepPVariable stepping(const StepPVariable& w, const std::vector<int>& assign, int k) {
    const int n = w.n();
    if (static_cast<int>(assign.size()) != n) fail("stepping: assignment size mismatch");
    if (k < 1) fail("stepping: class count must be positive");
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
    for (int x = 0; x < n; ++x) {
        if (assign[x] < 0 || assign[x] >= k) fail("stepping: class label out of range");
        blocks[static_cast<std::size_t>(assign[x])].push_back(x);
    }

    std::vector<DiscreteMeasure> block_cells(static_cast<std::size_t>(k) * k, DiscreteMeasure(1));
    for (int bi = 0; bi < k; ++bi) {
        for (int bj = 0; bj < k; ++bj) {
            const auto& si = blocks[static_cast<std::size_t>(bi)];
            const auto& sj = blocks[static_cast<std::size_t>(bj)];
            if (si.empty() || sj.empty()) continue;  // zero measure
            const double scale = 1.0 / (static_cast<double>(si.size()) * sj.size());
            std::vector<double> atoms;
            std::vector<double> weights;
            for (int a : si) {
                for (int b : sj) {
                    const DiscreteMeasure& c = w.cell(a, b);
                    for (std::size_t t = 0; t < c.size(); ++t) {
                        atoms.push_back(c.coord(t, 0));
                        weights.push_back(c.weight(t) * scale);
                    }
                }
            }
            block_cells[static_cast<std::size_t>(bi) * k + bj] =
                DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights));
        }
    }

    std::vector<DiscreteMeasure> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            cells.push_back(
                block_cells[static_cast<std::size_t>(assign[x]) * k + assign[y]]);
    return StepPVariable(n, std::move(cells));
}

StepPVariable blowup(const StepPVariable& w, int factor) {
    if (factor < 1) fail("blowup: factor must be positive");
    if (factor == 1) return w;
    const int n = w.n();
    const long long big = static_cast<long long>(n) * factor;
    if (big > 4096) fail("blowup: resulting ground size too large");
    const int m = static_cast<int>(big);
    std::vector<DiscreteMeasure> cells;
    cells.reserve(static_cast<std::size_t>(m) * m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) cells.push_back(w.cell(x / factor, y / factor));
    return StepPVariable(m, std::move(cells));
}

std::pair<StepPVariable, StepPVariable> common_blowup(const StepPVariable& u,
                                                      const StepPVariable& w) {
    const long long l = std::lcm(static_cast<long long>(u.n()), static_cast<long long>(w.n()));
    return {blowup(u, static_cast<int>(l / u.n())), blowup(w, static_cast<int>(l / w.n()))};
}

}  // namespace graphlim
