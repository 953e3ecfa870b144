#include "graphlim/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "graphlim/rng.hpp"

namespace graphlim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graphlim: " + msg); }

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + ": probability outside [0, 1]");
}

void check_probability_vector(const std::vector<double>& probs, const char* name) {
    if (probs.empty()) fail(std::string(name) + ": empty probability vector");
    double s = 0.0;
    for (double p : probs) {
        if (p < 0.0) fail(std::string(name) + ": negative probability");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) fail(std::string(name) + ": probabilities must sum to 1");
}

StepPVariable single_cell(DiscreteMeasure law) {
    return quantile_from_kernel(1, {std::move(law)});
}

}  // namespace

StepPVariable constant_limit(double c) {
    return single_cell(DiscreteMeasure::dirac(c));
}

StepPVariable indicator_limit(double p) {
    check_probability(p, "indicator");
    return single_cell(DiscreteMeasure::from_flat(1, {0.0, 1.0}, {1.0 - p, p}));
}

StepPVariable colored_limit(const std::vector<double>& probs) {
    check_probability_vector(probs, "colored");
    std::vector<double> atoms, weights;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        atoms.push_back(static_cast<double>(i));
        weights.push_back(probs[i]);
    }
    return single_cell(DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights)));
}

StepPVariable pm_limit(double p) {
    check_probability(p, "pm_one");
    return single_cell(DiscreteMeasure::from_flat(1, {-1.0, 1.0}, {p, 1.0 - p}));
}

StepPVariable probit_limit(int levels) {
    if (levels < 1) fail("probit_limit: levels must be positive");
    std::vector<double> atoms(static_cast<std::size_t>(levels));
    std::vector<double> weights(static_cast<std::size_t>(levels), 1.0 / levels);
    for (int i = 0; i < levels; ++i)
        atoms[static_cast<std::size_t>(i)] = inverse_normal_cdf((i + 0.5) / levels);
    return single_cell(DiscreteMeasure::from_flat(1, std::move(atoms), std::move(weights)));
}

std::vector<std::vector<double>> er_sample(double p, int n, std::uint64_t seed) {
    return sample_matrix(indicator_limit(p), n, seed, /*symmetrize=*/true);
}

std::vector<std::vector<double>> onoff_sample(double p, int n, std::uint64_t seed) {
    check_probability(p, "onoff");
    if (n < 1) fail("onoff: n must be positive");
    const CounterRng rng(seed);
    const bool on = rng.uniform(0, 0) < p;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
    if (on) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0;
    }
    return out;
}

std::vector<std::vector<double>> colored_sample(const std::vector<double>& probs, int n,
                                                std::uint64_t seed) {
    return sample_matrix(colored_limit(probs), n, seed, /*symmetrize=*/true);
}

std::vector<std::vector<double>> pm_one_sample(double p, int n, std::uint64_t seed) {
    return sample_matrix(pm_limit(p), n, seed, /*symmetrize=*/false);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) fail("inverse_normal_cdf: p must lie in (0, 1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

Generated generate(const std::string& name, const std::vector<double>& params, int n,
                   std::uint64_t seed) {
    auto want = [&](std::size_t count) {
        if (params.size() != count)
            fail("generate: " + name + " expects " + std::to_string(count) + " parameter(s)");
    };
    Generated g;
    if (name == "constant") {
        want(1);
        g.is_limit = true;
        g.pvar = constant_limit(params[0]);
    } else if (name == "indicator") {
        want(1);
        g.is_limit = true;
        g.pvar = indicator_limit(params[0]);
    } else if (name == "colored_limit") {
        g.is_limit = true;
        g.pvar = colored_limit(params);
    } else if (name == "pm_limit") {
        want(1);
        g.is_limit = true;
        g.pvar = pm_limit(params[0]);
    } else if (name == "probit_limit" || name == "gauss_probit") {
        if (params.size() > 1) fail("generate: " + name + " expects at most one parameter");
        g.is_limit = true;
        g.pvar = probit_limit(params.empty() ? 64 : static_cast<int>(params[0]));
    } else if (name == "er") {
        want(1);
        g.matrix = er_sample(params[0], n, seed);
        g.pvar = from_matrix(g.matrix);
    } else if (name == "onoff") {
        want(1);
        g.matrix = onoff_sample(params[0], n, seed);
        g.pvar = from_matrix(g.matrix);
    } else if (name == "colored") {
        g.matrix = colored_sample(params, n, seed);
        g.pvar = from_matrix(g.matrix);
    } else if (name == "pm_one") {
        want(1);
        g.matrix = pm_one_sample(params[0], n, seed);
        g.pvar = from_matrix(g.matrix);
    } else {
        fail("generate: unknown generator '" + name + "'");
    }
    return g;
}

}  // namespace graphlim
