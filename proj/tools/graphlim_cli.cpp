// Command-line front door for the graph-limit toolkit: metrics between
// measures / P-variables, generators for the random-graph families, and
// CSV convergence experiments.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphlim/experiment.hpp"
#include "graphlim/generators.hpp"
#include "graphlim/graphon_ops.hpp"
#include "graphlim/io.hpp"
#include "graphlim/measures.hpp"
#include "graphlim/profiles.hpp"
#include "graphlim/realgraphon.hpp"

using namespace graphlim;
using nlohmann::json;

namespace {

void emit(const json& value, bool as_json) {
    if (as_json) {
        std::printf("%s\n", value.dump().c_str());
    } else if (value.is_object()) {
        for (const auto& [key, v] : value.items())
            std::printf("%s: %s\n", key.c_str(), v.dump().c_str());
    } else {
        std::printf("%s\n", value.dump().c_str());
    }
}

std::vector<int> sorted_sizes(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t next = csv.find(',', pos);
        out.push_back(std::stoi(csv.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphlim: metrics, constructions and experiments for step P-variables"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags parse after the subcommand too

    std::uint64_t seed = 0;
    int threads = 0;
    bool as_json = false;
    app.add_option("--seed", seed, "global seed (all randomness derives from it)");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_flag("--json", as_json, "emit JSON instead of plain text");

    std::string file_a, file_b, strategy_text = "exhaustive", out_path;

    auto* lp_cmd = app.add_subcommand("lp", "Levy-Prokhorov distance between two measures");
    lp_cmd->add_option("a", file_a, "measure JSON")->required();
    lp_cmd->add_option("b", file_b, "measure JSON")->required();
    bool lp_oracle = false;
    lp_cmd->add_flag("--oracle", lp_oracle, "use the subset-enumeration oracle");

    auto* haus_cmd = app.add_subcommand("hausdorff", "Hausdorff distance between measure sets");
    haus_cmd->add_option("a", file_a, "JSON array of measures")->required();
    haus_cmd->add_option("b", file_b, "JSON array of measures")->required();

    auto* dm_cmd = app.add_subcommand("dm", "truncated P-variables metric");
    int k_max = 4;
    dm_cmd->add_option("a", file_a, "P-variable (csv matrix / json matrix / kernel)")->required();
    dm_cmd->add_option("b", file_b, "P-variable")->required();
    dm_cmd->add_option("--k-max", k_max, "profile order cutoff (default 4)");
    dm_cmd->add_option("--strategy", strategy_text, "exhaustive | random:M | local:M");

    auto* cut_cmd = app.add_subcommand("cutdist", "cut semidistance / unlabeled cut distance");
    bool unlabeled = false;
    cut_cmd->add_option("a", file_a, "P-variable")->required();
    cut_cmd->add_option("b", file_b, "P-variable")->required();
    cut_cmd->add_flag("--unlabeled", unlabeled, "minimize over relabelings (after blow-up)");
    cut_cmd->add_option("--mode", strategy_text, "exhaustive | heuristic:R");

    auto* cutnorm_cmd = app.add_subcommand("cutnorm", "real cut norm of a kernel matrix");
    std::string cutnorm_mode = "rows";
    cutnorm_cmd->add_option("a", file_a, "kernel matrix (csv or json)")->required();
    cutnorm_cmd->add_option("--mode", cutnorm_mode, "rows | bruteforce");

    auto* hom_cmd = app.add_subcommand("homdensity", "homomorphism density of a decorated graph");
    hom_cmd->add_option("graph", file_a, "decorated graph JSON")->required();
    hom_cmd->add_option("w", file_b, "P-variable")->required();

    auto* quot_cmd = app.add_subcommand("quotients", "quotient-set distance");
    int order = 2;
    bool label_min = false;
    quot_cmd->add_option("a", file_a, "P-variable")->required();
    quot_cmd->add_option("b", file_b, "P-variable")->required();
    quot_cmd->add_option("--k", order, "quotient order");
    quot_cmd->add_option("--strategy", strategy_text, "exhaustive | random:M | local:M");
    quot_cmd->add_flag("--label-min", label_min,
                       "minimize d1 over quotient relabelings (default: labeled)");

    auto* avq_cmd = app.add_subcommand("avq", "averaged-quotient set distance");
    avq_cmd->add_option("a", file_a, "P-variable")->required();
    avq_cmd->add_option("b", file_b, "P-variable")->required();
    avq_cmd->add_option("--k", order, "quotient order");
    avq_cmd->add_option("--strategy", strategy_text, "exhaustive | random:M | local:M");

    auto* lpnorm_cmd = app.add_subcommand("lpnorm", "L^p norm of a P-variable");
    double pexp = 1.0;
    bool p_inf = false;
    lpnorm_cmd->add_option("w", file_a, "P-variable")->required();
    lpnorm_cmd->add_option("--p", pexp, "exponent (>= 1)");
    lpnorm_cmd->add_flag("--inf", p_inf, "use the sup norm");

    auto* sample_cmd = app.add_subcommand("sample", "sample an m x m matrix from a P-variable");
    int sample_m = 8;
    bool symmetrize = false;
    sample_cmd->add_option("w", file_a, "P-variable")->required();
    sample_cmd->add_option("--m", sample_m, "sample size")->required();
    sample_cmd->add_flag("--symmetrize", symmetrize, "mirror the upper triangle");
    sample_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* gen_cmd = app.add_subcommand("generate", "run a named generator");
    std::string gen_name;
    std::vector<double> gen_params;
    int gen_n = 8;
    gen_cmd->add_option("name", gen_name,
                        "er | onoff | colored | pm_one | gauss_probit | indicator | "
                        "colored_limit | pm_limit | probit_limit")
        ->required();
    gen_cmd->add_option("--params", gen_params, "generator parameters");
    gen_cmd->add_option("--n", gen_n, "sample size (ignored by limits)");
    gen_cmd->add_option("--out", out_path, "output path (csv for samples, json for limits)");

    auto* exp_cmd = app.add_subcommand("experiment", "run a convergence experiment spec");
    bool timings = false;
    exp_cmd->add_option("spec", file_a, "experiment spec JSON")->required();
    exp_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    exp_cmd->add_flag("--timings", timings, "include wall times (breaks byte-identity)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lp_cmd->parsed()) {
            const auto a = load_measure(file_a);
            const auto b = load_measure(file_b);
            const double d = lp_oracle ? lp_distance_oracle(a, b) : lp_distance(a, b);
            emit(json{{"distance", d}}, as_json);
        } else if (haus_cmd->parsed()) {
            auto parse_set = [](const std::string& path) {
                const json v = json::parse(read_file(path));
                std::vector<DiscreteMeasure> members;
                for (const auto& m : v) members.push_back(measure_from_json(m.dump()));
                return MeasureSet(std::move(members));
            };
            emit(json{{"distance", hausdorff_distance(parse_set(file_a), parse_set(file_b))}},
                 as_json);
        } else if (dm_cmd->parsed()) {
            const auto a = load_pvariable(file_a);
            const auto b = load_pvariable(file_b);
            const DmResult r = dm_estimate(a, b, k_max, parse_strategy(strategy_text, seed));
            emit(json{{"lower", r.lower},
                      {"upper", r.upper},
                      {"truncation_bound", r.truncation_bound}},
                 as_json);
        } else if (cut_cmd->parsed()) {
            const auto a = load_pvariable(file_a);
            const auto b = load_pvariable(file_b);
            std::string text = strategy_text;
            if (text.rfind("heuristic", 0) == 0) text.replace(0, 9, "random");
            const SearchStrategy strat = parse_strategy(text, seed);
            const Interval r = unlabeled ? unlabeled_cut_distance(a, b, strat)
                                         : cut_semidistance(a, b, strat);
            emit(json{{"lower", r.lower}, {"upper", r.upper}}, as_json);
        } else if (cutnorm_cmd->parsed()) {
            const RealKernel a = load_kernel_matrix(file_a);
            const double v = cut_norm(a, cutnorm_mode == "bruteforce"
                                             ? CutNormMode::BruteForce
                                             : CutNormMode::ExhaustiveRows);
            emit(json{{"cut_norm", v}}, as_json);
        } else if (hom_cmd->parsed()) {
            const auto g = decorated_graph_from_json(read_file(file_a));
            const auto w = load_pvariable(file_b);
            emit(json{{"density", hom_density(g, w)}}, as_json);
        } else if (quot_cmd->parsed()) {
            const auto a = load_pvariable(file_a);
            const auto b = load_pvariable(file_b);
            const Interval r = quotient_set_distance(a, b, order,
                                                     parse_strategy(strategy_text, seed),
                                                     label_min);
            emit(json{{"lower", r.lower}, {"upper", r.upper}}, as_json);
        } else if (avq_cmd->parsed()) {
            const auto a = load_pvariable(file_a);
            const auto b = load_pvariable(file_b);
            const Interval r = avq_set_distance(a, b, order, parse_strategy(strategy_text, seed));
            emit(json{{"lower", r.lower}, {"upper", r.upper}}, as_json);
        } else if (lpnorm_cmd->parsed()) {
            const auto w = load_pvariable(file_a);
            const double p = p_inf ? std::numeric_limits<double>::infinity() : pexp;
            emit(json{{"norm", lp_norm(w, p)}}, as_json);
        } else if (sample_cmd->parsed()) {
            const auto w = load_pvariable(file_a);
            const auto m = sample_matrix(w, sample_m, seed, symmetrize);
            const std::string csv = matrix_to_csv(m);
            if (out_path.empty())
                std::fputs(csv.c_str(), stdout);
            else
                write_file(out_path, csv);
        } else if (gen_cmd->parsed()) {
            const Generated g = generate(gen_name, gen_params, gen_n, seed);
            const std::string payload =
                g.is_limit ? kernel_to_json(g.pvar) : matrix_to_csv(g.matrix);
            if (out_path.empty())
                std::fputs(payload.c_str(), stdout);
            else
                write_file(out_path, payload);
        } else if (exp_cmd->parsed()) {
            ExperimentSpec spec = experiment_spec_from_json(read_file(file_a));
            if (threads > 0) spec.threads = threads;
            if (timings) spec.timings = true;
            const ExperimentReport report = run_experiment(spec);
            const std::string csv = report.csv(spec.timings);
            if (out_path.empty())
                std::fputs(csv.c_str(), stdout);
            else
                write_file(out_path, csv);
            return report.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
