#pragma once

#include <cstdint>
#include <vector>

#include "graphlim/measures.hpp"

namespace graphlim {

/// Block-constant real-valued kernel on the uniform n-point grid.
struct RealKernel {
    int n = 0;
    std::vector<double> values;  // n*n row-major

    RealKernel() = default;
    RealKernel(int n_, std::vector<double> values_);
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double mean() const;
};

/// Step P-variable on a uniform n-point ground space. Cell (i,j) holds the
/// law of the third coordinate; the quantile view of a cell is its
/// generalized inverse distribution function. One object, two views.
///
/// Every cell is a probability measure to within 1e-12; the zero measure is
/// tolerated as the degenerate decoration of an empty stepping block, and
/// operations that need a law reject it.
class StepPVariable {
public:
    StepPVariable(int n, std::vector<DiscreteMeasure> cells);

    int n() const { return n_; }
    const DiscreteMeasure& cell(int i, int j) const {
        return cells_[static_cast<std::size_t>(i) * n_ + j];
    }
    const std::vector<DiscreteMeasure>& cells() const { return cells_; }

    /// Quantile view of cell (i,j): inf{x : F(x) >= p}.
    double quantile(int i, int j, double p) const;

    bool operator==(const StepPVariable& other) const {
        return n_ == other.n_ && cells_ == other.cells_;
    }

private:
    int n_;
    std::vector<DiscreteMeasure> cells_;
};

/// Dirac-cell step representation of a square matrix.
StepPVariable from_matrix(const std::vector<std::vector<double>>& a);

/// Wraps an n x n array of laws; the quantile view is implied.
StepPVariable quantile_from_kernel(int n, std::vector<DiscreteMeasure> kernel);

/// Law of the P-variable as a random variable on the whole product space:
/// the uniform mixture of all cells.
DiscreteMeasure global_law(const StepPVariable& w);

/// Cell means: integrates out the third coordinate.
RealKernel contraction(const StepPVariable& w);

/// Samples an m x m matrix: ground indices X_1..X_m i.i.d. uniform, latent
/// coordinates Y_ij i.i.d. uniform, entry (i,j) = quantile of cell
/// (X_i, X_j) at Y_ij. Diagonal entries are 0. With symmetrize, entries
/// below the diagonal are overwritten by their transposes.
std::vector<std::vector<double>> sample_matrix(const StepPVariable& w, int m,
                                               std::uint64_t seed, bool symmetrize);

/// global_law mass of {|z| > threshold}; the tightness statistic.
double tail_mass(const StepPVariable& w, double threshold);

/// cell'(i,j) = cell(p[i], p[j]) for a permutation p of [n].
StepPVariable relabel(const StepPVariable& w, const std::vector<int>& p);

/// Averages cells over partition blocks; output keeps ground size n with
/// block-constant cells. Cells of empty blocks would be the zero measure
/// (unreachable for total assignments of a finite ground set).
StepPVariable stepping(const StepPVariable& w, const std::vector<int>& assign, int k);

/// Repeats every cell into factor x factor sub-blocks (ground size n*factor).
StepPVariable blowup(const StepPVariable& w, int factor);

/// Blows both arguments up to the least common multiple of their sizes.
std::pair<StepPVariable, StepPVariable> common_blowup(const StepPVariable& u,
                                                      const StepPVariable& w);

}  // namespace graphlim
