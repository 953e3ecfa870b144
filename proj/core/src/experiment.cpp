#include "graphlim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "graphlim/generators.hpp"
#include "graphlim/graphon_ops.hpp"
#include "graphlim/profiles.hpp"
#include "graphlim/realgraphon.hpp"
#include "graphlim/rng.hpp"

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Task {
    int n = 0;
    int repeat = 0;
    std::string metric;
    std::uint64_t seed = 0;
};

Interval eval_metric(const std::string& metric, const StepPVariable& sample,
                     const StepPVariable& reference, const ExperimentSpec& spec,
                     std::uint64_t seed) {
    SearchStrategy strat = spec.strategy;
    strat.seed = seed;
    if (metric == "dm") {
        const DmResult r = dm_estimate(sample, reference, spec.k_max, strat);
        return {r.lower, r.upper};
    }
    if (metric == "cut") {
        return unlabeled_cut_distance(sample, reference, strat);
    }
    if (metric == "quotient") {
        return quotient_set_distance(sample, reference, spec.k_max, strat);
    }
    if (metric == "avq") {
        return avq_set_distance(sample, reference, spec.k_max, strat);
    }
    if (metric == "real_cut_of_contraction") {
        SearchStrategy cs = strat;
        if (cs.kind == SearchStrategy::Kind::Exhaustive && contraction(sample).n > 8)
            cs = SearchStrategy::random(32, seed);
        return real_cut_distance(contraction(sample), contraction(reference), cs);
    }
    fail("run_experiment: unknown metric '" + metric + "'");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.sizes.empty()) fail("run_experiment: no sizes");
    for (std::size_t i = 1; i < spec.sizes.size(); ++i)
        if (spec.sizes[i] <= spec.sizes[i - 1])
            fail("run_experiment: sizes must be strictly increasing");
    if (spec.metrics.empty()) fail("run_experiment: no metrics requested");
    if (spec.repeats < 1) fail("run_experiment: repeats must be positive");

    const StepPVariable reference =
        spec.reference ? *spec.reference
                       : generate(spec.reference_generator, spec.reference_params, 1, spec.seed)
                             .pvar;

    std::vector<Task> tasks;
    for (int rep = 0; rep < spec.repeats; ++rep)
        for (int n : spec.sizes)
            for (const auto& metric : spec.metrics)
                tasks.push_back({n, rep,
                                 metric,
                                 splitmix64(splitmix64(spec.seed ^ splitmix64(
                                                           static_cast<std::uint64_t>(n))) ^
                                            static_cast<std::uint64_t>(rep))});

    std::vector<ExperimentRow> rows(tasks.size());
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            try {
                const auto& task = tasks[t];
                const auto started = std::chrono::steady_clock::now();
                const Generated g =
                    generate(spec.generator, spec.params, task.n, task.seed);
                const Interval v =
                    eval_metric(task.metric, g.pvar, reference, spec, splitmix64(task.seed));
                const auto ended = std::chrono::steady_clock::now();
                rows[t] = {task.n, task.repeat, task.metric, v.lower, v.upper,
                           std::chrono::duration<double>(ended - started).count()};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    if (threads <= 1) {
        work(0, tasks.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (tasks.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(tasks.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.repeat != b.repeat) return a.repeat < b.repeat;
        return a.metric < b.metric;
    });

    ExperimentReport report;
    report.rows = std::move(rows);

    // Trend verdict per metric: the upper endpoint must not rise by more
    // than the slack from one size to the next (averaged over repeats).
    report.passed = true;
    for (const auto& metric : spec.metrics) {
        std::map<int, std::pair<double, int>> by_size;
        for (const auto& row : report.rows)
            if (row.metric == metric) {
                auto& acc = by_size[row.n];
                acc.first += row.upper;
                acc.second += 1;
            }
        const double slack = metric == "real_cut_of_contraction" ? spec.real_cut_slack
                                                                 : spec.dm_slack;
        bool ok = true;
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (const auto& [n, acc] : by_size) {
            const double mean = acc.first / acc.second;
            if (!std::isnan(prev) && mean > prev + slack) ok = false;
            prev = mean;
        }
        report.verdicts.emplace_back(metric, ok);
        report.passed = report.passed && ok;
    }
    return report;
}

std::string ExperimentReport::csv(bool with_timings) const {
    std::string out = "n,metric,lower,upper,seconds\n";
    for (const auto& row : rows) {
        out += std::to_string(row.n);
        out += ',';
        out += row.metric;
        if (row.repeat > 0) out += "#" + std::to_string(row.repeat);
        out += ',';
        out += format_double(row.lower);
        out += ',';
        out += format_double(row.upper);
        out += ',';
        out += with_timings ? format_double(row.seconds) : std::string("0");
        out += '\n';
    }
    for (const auto& [metric, ok] : verdicts) {
        out += "trend,";
        out += metric;
        out += ',';
        out += ok ? "pass" : "fail";
        out += ",,\n";
    }
    return out;
}

}  // namespace graphlim
