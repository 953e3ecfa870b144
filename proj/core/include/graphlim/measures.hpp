#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace graphlim {

/// Atoms closer than this in sup-norm are merged during canonicalization.
inline constexpr double kAtomMergeTol = 1e-12;
/// Tolerance for "total mass equals 1" checks on probability measures.
inline constexpr double kMassTol = 1e-9;

/// Finitely supported nonnegative measure on R^dim.
///
/// Atoms are stored in lexicographic order and duplicates are merged, so
/// equality of canonical forms is decidable bit-exactly and independent of
/// construction order. Immutable after construction.
class DiscreteMeasure {
public:
    DiscreteMeasure() : dim_(1) {}
    explicit DiscreteMeasure(int dim);

    DiscreteMeasure(int dim, const std::vector<std::vector<double>>& atoms,
                    const std::vector<double>& weights);

    /// Flat row-major atom storage (size = weights.size() * dim).
    static DiscreteMeasure from_flat(int dim, std::vector<double> atoms,
                                     std::vector<double> weights);

    static DiscreteMeasure dirac(double x);
    static DiscreteMeasure dirac(const std::vector<double>& point);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    bool is_zero() const { return weights_.empty(); }

    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> atom(std::size_t i) const {
        return {atoms_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double coord(std::size_t i, int c) const {
        return atoms_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)];
    }
    const std::vector<double>& flat_atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;
    bool is_probability(double tol = kMassTol) const;

    /// Bit-exact equality of canonical forms.
    bool operator==(const DiscreteMeasure& other) const;
    /// Deterministic total order on canonical forms (dim, atoms, weights).
    bool canonical_less(const DiscreteMeasure& other) const;
    /// Stable key usable for hashing / dedup of canonical forms.
    std::string canonical_key() const;

private:
    void canonicalize();

    int dim_;
    std::vector<double> atoms_;    // row-major, lexicographically sorted
    std::vector<double> weights_;  // same length as atom count, all > 0
};

/// Non-empty, dim-homogeneous collection of measures.
struct MeasureSet {
    std::vector<DiscreteMeasure> members;

    explicit MeasureSet(std::vector<DiscreteMeasure> ms);
    int dim() const { return members.front().dim(); }
};

/// Axis-aligned closed box in R^d.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Exact Levy-Prokhorov distance between two probability measures of equal
/// dimension. Computed over the finite candidate set {pairwise distances}
/// u {mass gaps} with coupled mass obtained from a max-flow feasibility
/// problem per distance threshold. Symmetric bit-exactly.
double lp_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Extension of lp_distance to equal-total-mass finite measures: the flow
/// condition becomes F >= m - eps with m the common mass. Coincides with
/// lp_distance on probability measures. This is a test-support extension,
/// not a claim about the underlying definition.
double lp_mass_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Independent brute-force validator: checks the two-sided enlargement
/// condition over all support subsets for each candidate epsilon.
/// Requires combined support <= 12 atoms. Probability measures only.
double lp_distance_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Hausdorff distance between two measure sets under lp_distance.
double hausdorff_distance(const MeasureSet& a, const MeasureSet& b);

/// Pushforward under coordinate projection; coords must be distinct and
/// within range. Total mass is preserved.
DiscreteMeasure marginal(const DiscreteMeasure& mu, const std::vector<int>& coords);

/// Restriction to a closed box: keeps atoms inside with their weights.
DiscreteMeasure restrict(const DiscreteMeasure& mu, const Box& box);

/// Sum of coefficients[i] * measures[i] with atom merging.
DiscreteMeasure scale_mix(const std::vector<DiscreteMeasure>& measures,
                          const std::vector<double>& coefficients);

/// max over coordinates i of the integral of |x_i|.
double tau(const DiscreteMeasure& mu);

}  // namespace graphlim
