#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "graphlim/measures.hpp"
#include "graphlim/pvariable.hpp"
#include "graphlim/strategy.hpp"

namespace graphlim {

/// Assignment of the n ground points to k labeled cells (cells may be empty).
struct FunctionPartition {
    int n = 0;
    int k = 0;
    std::vector<int> assign;  // values in [0, k)

    FunctionPartition() = default;
    FunctionPartition(int n_, int k_, std::vector<int> assign_);
};

/// k test functions on the ground set with values clamped into [-1, 1].
struct TestVector {
    int n = 0;
    int k = 0;
    std::vector<std::vector<double>> funcs;

    TestVector() = default;
    TestVector(int n_, std::vector<std::vector<double>> funcs_);

    static TestVector from_partition(const FunctionPartition& p);
};

/// A finite set of profile measures on R^{2k+1}, deduplicated by canonical
/// measure equality, with the generating partitions kept as provenance.
struct ProfileSet {
    int k = 0;
    std::vector<DiscreteMeasure> measures;
    std::vector<std::vector<int>> provenance;  // one generating assignment per member
};

struct DmResult {
    double lower = 0.0;
    double upper = 0.0;
    double truncation_bound = 0.0;
};

/// Exact law of (f_1(x1), f_1(x2), ..., f_k(x1), f_k(x2), W).
DiscreteMeasure profile_measure(const StepPVariable& w, const TestVector& t);

/// profile_measure for the indicator functions of a partition.
DiscreteMeasure profile_measure(const StepPVariable& w, const FunctionPartition& p);

/// The finite partition profile S'_k over the chosen partition family:
/// all k^n labeled partitions (exhaustive), m random ones, or hill-climbing
/// local optima of a caller-supplied objective (minimized).
ProfileSet kprofile(const StepPVariable& w, int k, const SearchStrategy& strategy,
                    const std::function<double(const DiscreteMeasure&)>* objective = nullptr);

/// Hausdorff distance between two profile sets under lp_distance, with an
/// exact-equality shortcut on canonical forms.
double profile_hausdorff(const ProfileSet& a, const ProfileSet& b);

/// Truncated P-variables metric: sum over k <= k_max of 2^-k times the
/// Hausdorff distance between the k-profiles. Arguments of different ground
/// sizes are first blown up to a common refinement. Exhaustive strategy
/// collapses the interval; sampled strategies report upper from directed
/// distances over the sampled sets and lower from best-response local search.
DmResult dm_estimate(const StepPVariable& u, const StepPVariable& w, int k_max,
                     const SearchStrategy& strategy);

/// Rounds k near-indicator functions to a genuine partition by thresholding
/// at 1 - delta and repairing violations into cell 0. The L^p gap to the
/// returned partition is bounded by (k^3 + 3k^2 + 5k + 1) * delta.
FunctionPartition round_to_partition(const TestVector& t, double delta);

/// Composition with x -> ceil(levels*x)/levels; sup-gap at most 1/levels.
std::vector<double> quantize_function(const std::vector<double>& f, int levels);

/// Max over explored test vectors of the lp distance between the generated
/// measure and its odd/even coordinate-swapped counterpart. Zero for
/// symmetric P-variables under exhaustive exploration ({0,1}-valued tuples).
double symmetry_defect(const StepPVariable& w, int k, const SearchStrategy& strategy);

}  // namespace graphlim
