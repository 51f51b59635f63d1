#pragma once

#include <cstdint>
#include <random>

namespace gridplan {

/// Deterministic random source. All sampling goes through the hand-rolled
/// helpers below instead of std::uniform_*_distribution, so that streams are
/// reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 significant bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). n must be > 0. Rejection sampling keeps the
    /// draw exactly uniform for any n.
    std::size_t uniform_index(std::size_t n);

    int uniform_int(int lo, int hi_inclusive);

private:
    std::mt19937_64 engine_;
};

/// Splits one master seed into independent per-task seeds. Stateless and
/// documented so that batch runs can be reproduced sample by sample:
/// seed_i = splitmix64(master ^ golden_gamma * (i + 1)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

}
