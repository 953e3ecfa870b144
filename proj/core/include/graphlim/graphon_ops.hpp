#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "graphlim/measures.hpp"
#include "graphlim/profiles.hpp"
#include "graphlim/pvariable.hpp"
#include "graphlim/strategy.hpp"

namespace graphlim {

/// Certified-side bounds: heuristic modes report a bracket, exhaustive modes
/// collapse it (lower == upper).
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounded evaluable edge decoration, one of a few named builtins.
struct EdgeDecoration {
    enum class Kind { Const, Identity, Poly, Indicator, BoundedLipschitz };

    Kind kind = Kind::Const;
    double c = 0.0;                                // Const
    double lo = 0.0, hi = 1.0;                     // Identity clamp / Poly domain
    std::vector<double> coeffs;                    // Poly, ascending powers
    double value = 0.0, tol = 0.0;                 // Indicator
    std::vector<std::pair<double, double>> table;  // BoundedLipschitz, sorted by x

    static EdgeDecoration constant(double c);
    static EdgeDecoration identity(double lo, double hi);
    static EdgeDecoration poly(std::vector<double> coeffs, double lo, double hi);
    static EdgeDecoration indicator(double value, double tol);
    static EdgeDecoration bounded_lipschitz(std::vector<std::pair<double, double>> table);

    /// Evaluates at z; Poly throws when z is outside its declared domain.
    double eval(double z) const;
};

/// Finite simple graph with an edge decoration per (ordered) edge and
/// optional vertex weights for the overlay functional.
struct DecoratedGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<EdgeDecoration> beta;  // one per edge
    std::vector<double> alpha;         // empty, or `vertices` weights summing to 1

    DecoratedGraph() = default;
    DecoratedGraph(int vertices_, std::vector<std::pair<int, int>> edges_,
                   std::vector<EdgeDecoration> beta_, std::vector<double> alpha_ = {});
};

/// Vertex-weighted graph with measure decorations: the quotient W/P.
struct QuotientGraph {
    int k = 0;
    std::vector<double> alpha;          // k weights, sum 1
    std::vector<DiscreteMeasure> beta;  // k*k row-major laws (zero measure on empty blocks)

    QuotientGraph() = default;
    QuotientGraph(int k_, std::vector<double> alpha_, std::vector<DiscreteMeasure> beta_);
    const DiscreteMeasure& at(int i, int j) const {
        return beta[static_cast<std::size_t>(i) * k + j];
    }
};

/// (1/n^2) sum of cells over s x t; total mass |s||t|/n^2.
DiscreteMeasure block_measure(const StepPVariable& w, const std::vector<int>& s,
                              const std::vector<int>& t);

/// sup over subset pairs S,T of the lp distance between block measures.
/// Exhaustive enumerates all 2^n x 2^n pairs (n <= 14); heuristic runs a
/// greedy toggle ascent from random starts (certified lower, trivial upper 1).
Interval cut_semidistance(const StepPVariable& u, const StepPVariable& w,
                          const SearchStrategy& strategy);

/// min over vertex relabelings of the cut semidistance, after blowing both
/// arguments up to a common ground size. Exhaustive enumerates all n!
/// permutations (n <= 8). Heuristic: the lower endpoint is a certified bound
/// from permutation-invariant statistics; the upper endpoint is the greedy
/// ascent estimate at the best explored relabeling.
Interval unlabeled_cut_distance(const StepPVariable& u, const StepPVariable& w,
                                const SearchStrategy& strategy);

/// Exact homomorphism density: mean over vertex maps of the product of
/// decoration integrals along edges. Requires n^|V| within budget.
double hom_density(const DecoratedGraph& g, const StepPVariable& w);

/// sup over partitions with prescribed block sizes (alpha rounded to
/// multiples of 1/n) of the decorated block-mass sum. Exhaustive enumerates
/// the constrained partitions; local reports [best found, separable upper].
/// When rounded_sizes is non-null it receives the realized block sizes.
Interval overlay(const StepPVariable& w, const DecoratedGraph& g, const SearchStrategy& strategy,
                 std::vector<int>* rounded_sizes = nullptr);

/// Quotient graph of w by a partition: alpha_i = |P_i|/n, beta_ij the
/// normalized block measure (zero measure on empty blocks).
QuotientGraph quotient(const StepPVariable& w, const FunctionPartition& p);

/// Sum of vertex-weight gaps plus pairwise lp distances of the mass-scaled
/// decorations. Unequal block masses contribute their gap additively.
double d1_distance(const QuotientGraph& a, const QuotientGraph& b);

/// Hausdorff distance under d1 between the quotient sets Q_k. Exhaustive is
/// exact over all k^n partitions. With label_minimized, d1 is minimized over
/// the k! relabelings of one side (k <= 6); the default compares labeled
/// quotients.
Interval quotient_set_distance(const StepPVariable& u, const StepPVariable& w, int k,
                               const SearchStrategy& strategy, bool label_minimized = false);

}  // namespace graphlim
