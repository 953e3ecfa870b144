#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphlim/pvariable.hpp"

namespace graphlim {

/// Deterministic limit objects (ground size 1).
StepPVariable constant_limit(double c);
StepPVariable indicator_limit(double p);
StepPVariable colored_limit(const std::vector<double>& probs);
StepPVariable pm_limit(double p);
/// Standard normal discretized to `levels` quantile levels.
StepPVariable probit_limit(int levels);

/// Seeded samples of the classic random graph families (zero diagonal).
std::vector<std::vector<double>> er_sample(double p, int n, std::uint64_t seed);
std::vector<std::vector<double>> onoff_sample(double p, int n, std::uint64_t seed);
std::vector<std::vector<double>> colored_sample(const std::vector<double>& probs, int n,
                                                std::uint64_t seed);
std::vector<std::vector<double>> pm_one_sample(double p, int n, std::uint64_t seed);

/// Inverse standard normal CDF (Acklam's rational approximation with one
/// Halley refinement).
double inverse_normal_cdf(double p);

struct Generated {
    bool is_limit = false;
    StepPVariable pvar;                       // always populated
    std::vector<std::vector<double>> matrix;  // populated for sampled families

    Generated() : pvar(from_matrix({{0.0}})) {}
};

/// Dispatch by generator name: er, onoff, colored, pm_one, gauss_probit,
/// indicator, constant, colored_limit, pm_limit, probit_limit.
Generated generate(const std::string& name, const std::vector<double>& params, int n,
                   std::uint64_t seed);

}  // namespace graphlim
