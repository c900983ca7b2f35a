#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bell {

// splitmix64 finalizer (Steele, Lea, Flood / Vigna; public domain reference code)
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent seed for a named sub-stream of a run (box randomness
/// vs. input choices vs. repetition index, ...).
inline std::uint64_t subseed(std::uint64_t master, std::uint64_t domain_tag) {
    return mix64(master ^ mix64(domain_tag));
}

/// Counter-based randomness: round i of an experiment draws from a stream
/// keyed by (master seed, i) alone, so results are reproducible regardless of
/// execution order and parallel/sequential runs tally identically.
class RoundRng {
public:
    RoundRng(std::uint64_t master_seed, std::uint64_t round)
        : state_(mix64(mix64(master_seed) + 0x9e3779b97f4a7c15ULL * (round + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    /// Uniform integer in [0, n). Desk-scale n, so modulo bias is negligible
    /// only if avoided: use rejection sampling.
    int next_below(int n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return static_cast<int>(r % bound);
    }

    /// Sample an index from a cumulative distribution (last entry ~ 1).
    std::size_t sample_cdf(std::span<const double> cumulative) {
        const double u = next_unit();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
            if (u < cumulative[i]) return i;
        return cumulative.empty() ? 0 : cumulative.size() - 1;
    }

private:
    std::uint64_t state_;
};

/// Cumulative sums of a probability row, for sample_cdf.
inline std::vector<double> cumulative_of(std::span<const double> probs) {
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    return cum;
}

} // namespace bell
