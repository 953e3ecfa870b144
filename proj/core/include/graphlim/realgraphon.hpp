#pragma once

#include <cstdint>
#include <vector>

#include "graphlim/graphon_ops.hpp"
#include "graphlim/pvariable.hpp"
#include "graphlim/strategy.hpp"

namespace graphlim {

/// k x n array of nonnegative row functions with unit column sums.
struct FractionalPartition {
    int n = 0;
    int k = 0;
    std::vector<std::vector<double>> weights;  // k rows of length n

    FractionalPartition() = default;
    FractionalPartition(int n_, std::vector<std::vector<double>> weights_);

    /// Every row sums to n/k within 1e-9 * n.
    bool balanced() const;

    static FractionalPartition uniform(int n, int k);
    static FractionalPartition hard(const std::vector<int>& assign, int k);
};

enum class CutNormMode { ExhaustiveRows, BruteForce };

/// sup over S,T of |sum over S x T| / n^2. ExhaustiveRows enumerates S and
/// picks T per column sign (exact, n <= 22); BruteForce enumerates both
/// (oracle, n <= 12).
double cut_norm(const RealKernel& a, CutNormMode mode);

/// min over relabelings of cut_norm(a - b o phi), after blowing both kernels
/// up to a common size. Exhaustive enumerates permutations (n <= 8);
/// heuristic brackets with invariant statistics and descended relabelings.
Interval real_cut_distance(const RealKernel& a, const RealKernel& b,
                           const SearchStrategy& strategy);

/// Blows a block-constant kernel up by an integer factor.
RealKernel blowup(const RealKernel& a, int factor);

/// M[i][j] = (1/n^2) sum_{a,b} f_i(a) f_j(b) contraction(w)[a][b].
/// The entry sum equals the mean of the contraction.
std::vector<std::vector<double>> averaged_quotient(const StepPVariable& w,
                                                   const FractionalPartition& f);

/// Hausdorff distance under the entrywise l1 metric between averaged
/// quotient sets explored over balanced hard partitions, the uniform
/// fractional partition, and (local strategy) fractional mass-transfer walks.
Interval avq_set_distance(const StepPVariable& u, const StepPVariable& w, int k,
                          const SearchStrategy& strategy);

/// ((1/n^2) sum of weight * |atom|^p)^(1/p); max |atom| for p = infinity.
double lp_norm(const StepPVariable& w, double p);

/// Step representation of adjacency / ||adjacency||_1; rejects empty graphs.
StepPVariable normalized(const std::vector<std::vector<double>>& adjacency);

}  // namespace graphlim
