#pragma once

#include <string>
#include <vector>

#include "graphlim/experiment.hpp"
#include "graphlim/graphon_ops.hpp"
#include "graphlim/measures.hpp"
#include "graphlim/pvariable.hpp"

namespace graphlim {

/// JSON forms. Measures serialize as {"dim", "atoms", "weights"} with atoms
/// in canonical lexicographic order; kernels as {"n", "cells"}.
std::string measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const std::string& text);

std::string kernel_to_json(const StepPVariable& w);
StepPVariable kernel_from_json(const std::string& text);

std::string matrix_to_csv(const std::vector<std::vector<double>>& m);
std::vector<std::vector<double>> matrix_from_csv(const std::string& text);

DecoratedGraph decorated_graph_from_json(const std::string& text);

ExperimentSpec experiment_spec_from_json(const std::string& text);

/// Loads a P-variable from a file: .csv (matrix rows), a JSON 2-D array, or
/// a JSON kernel object.
StepPVariable load_pvariable(const std::string& path);

DiscreteMeasure load_measure(const std::string& path);
RealKernel load_kernel_matrix(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Parses "exhaustive", "random:M", or "local:M".
SearchStrategy parse_strategy(const std::string& text, std::uint64_t seed);

}  // namespace graphlim
