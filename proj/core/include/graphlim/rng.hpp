#pragma once

#include <cstdint>

namespace graphlim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel consumers are order-independent.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed)) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return splitmix64(splitmix64(key_ ^ splitmix64(stream)) ^ counter);
    }

    /// Uniform double in [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t stream, std::uint64_t counter, std::uint64_t n) const {
        return bits(stream, counter) % n;
    }

private:
    std::uint64_t key_;
};

}  // namespace graphlim
