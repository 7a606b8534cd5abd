#pragma once

// Seedable random streams and the sampling primitives used by the
// scenario generator.

#include <cstdint>
#include <random>

namespace psq {

/// Purpose tags keep the scenario, realization and burst draws of one slot
/// on separate streams, so adding draws to one never shifts another.
enum class StreamPurpose : std::uint64_t {
    scenario = 1,
    realization = 2,
    burst = 3,
    oracle = 4,
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Sub-stream seed = mix(mix(mix(mix(master) ^ slot) ^ round) ^ purpose).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t slot, std::uint64_t round,
                          StreamPurpose purpose);

class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master, std::uint64_t slot, std::uint64_t round,
                         StreamPurpose purpose) {
        return Rng(derive_seed(master, slot, round, purpose));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double next_standard_normal() { return normal_(engine_); }

    engine_type& engine() { return engine_; }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// U(a, b) on [a, b). Throws Error{invalid_bounds} when a >= b.
double sample_uniform(Rng& rng, double a, double b);

/// N_tr(mu, sigma, lo, hi): rejection against the parent normal, switching to
/// inverse-CDF sampling when the acceptance probability is below 1%.
/// sigma == 0 returns clamp(mu, lo, hi). Throws Error{invalid_bounds} when
/// lo >= hi or sigma < 0.
double sample_truncated_normal(Rng& rng, double mu, double sigma, double lo, double hi);

}  // namespace psq
