#pragma once

#include <cstdint>
#include <random>

namespace zcover {

/// Seed for every sampler; equal seed and parameters give bit-identical output.
struct RngSeed {
    std::uint64_t value = 0;
};

/// Reproducible random stream: mt19937_64 with hand-rolled conversions, since
/// the standard distributions are not specified bit-for-bit across vendors.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// Derive an independent sub-stream seed, e.g. for the embedding of a trial.
RngSeed derive_seed(RngSeed base, std::uint64_t stream);

}  // namespace zcover
