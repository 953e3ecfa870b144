#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphlim/pvariable.hpp"
#include "graphlim/strategy.hpp"

namespace graphlim {

/// Declarative convergence experiment: a generator family swept over sizes,
/// compared against a fixed reference under a set of metrics.
struct ExperimentSpec {
    std::string generator;
    std::vector<double> params;
    std::vector<int> sizes;  // strictly increasing

    std::string reference_generator;  // used when `reference` is not set
    std::vector<double> reference_params;
    std::optional<StepPVariable> reference;

    std::vector<std::string> metrics;  // dm, cut, quotient, avq, real_cut_of_contraction
    int k_max = 2;
    SearchStrategy strategy = SearchStrategy::exhaustive();
    std::uint64_t seed = 0;  // mandatory reproducibility contract
    int repeats = 1;         // rows per size with derived seeds

    double dm_slack = 0.1;
    double real_cut_slack = 0.05;
    int threads = 0;      // 0 = hardware concurrency
    bool timings = false;  // wall time column off by default to keep CSV byte-identical
};

struct ExperimentRow {
    int n = 0;
    int repeat = 0;
    std::string metric;
    double lower = 0.0;
    double upper = 0.0;
    double seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;                    // sorted by (n, repeat, metric)
    std::vector<std::pair<std::string, bool>> verdicts;  // per-metric trend flags
    bool passed = false;

    std::string csv(bool with_timings) const;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace graphlim
