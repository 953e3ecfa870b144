#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace graphlim {

/// Search strategy shared by the set-valued operations (profiles, quotients,
/// averaged quotients) and the combinatorial distances.
struct SearchStrategy {
    enum class Kind { Exhaustive, Random, LocalSearch };

    Kind kind = Kind::Exhaustive;
    int samples = 64;
    std::uint64_t seed = 0;

    static SearchStrategy exhaustive() { return {Kind::Exhaustive, 0, 0}; }
    static SearchStrategy random(int m, std::uint64_t seed) {
        return {Kind::Random, m, seed};
    }
    static SearchStrategy local_search(int m, std::uint64_t seed) {
        return {Kind::LocalSearch, m, seed};
    }
};

/// Enumeration cap: the smaller of the operation default and the
/// GRAPHLIM_BUDGET environment variable (when set).
inline std::uint64_t enumeration_budget(std::uint64_t default_cap) {
    if (const char* env = std::getenv("GRAPHLIM_BUDGET")) {
        const unsigned long long v = std::strtoull(env, nullptr, 10);
        if (v > 0 && v < default_cap) return v;
    }
    return default_cap;
}

}  // namespace graphlim
