#pragma once

// Data-parallel inner loops shared by the metrics and the oracle solvers.
//
// Every kernel has a scalar reference implementation; vector variants are
// compiled in separate translation units and selected once at runtime from
// the CPU feature set. Setting PSQ_SIMD=scalar in the environment forces the
// reference path. Variants reorder floating-point sums, so results agree
// with the reference to rounding, not bit for bit; within one variant they
// are deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace psq::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct RatioMoments {
    double sum = 0.0;         ///< sum of x_i
    double sum_squares = 0.0; ///< sum of x_i^2
    std::size_t count = 0;    ///< number of included entries
};

struct KernelTable {
    Isa isa;

    /// sum_i x_i
    double (*sum)(std::span<const double> x);

    /// Moments of x_i = q_i / (demand_i * weight_i) over the entries with
    /// demand_i * weight_i > 0.
    RatioMoments (*ratio_moments)(std::span<const double> q, std::span<const double> demand,
                                  std::span<const double> weight);

    /// sum_i clamp(area_i * (level - base_i), 0, capacity_i)
    double (*fill_volume)(double level, std::span<const double> base,
                          std::span<const double> capacity, std::span<const double> area);

    /// Writes clamp(area_i * (level - base_i), 0, capacity_i) to out.
    void (*fill_at_level)(double level, std::span<const double> base,
                          std::span<const double> capacity, std::span<const double> area,
                          std::span<double> out);

    /// out_i = weight_i * qos / (cost_i * demand_i + qos * q_i), the gradient
    /// of sum_i weight_i * log(1 + qos * q_i / (cost_i * demand_i)).
    void (*log_utility_gradient)(std::span<const double> q, std::span<const double> weight,
                                 std::span<const double> cost, std::span<const double> demand,
                                 double qos, std::span<double> out);

    /// y_i = clamp(y_i + a * x_i, 0, upper_i)
    void (*axpy_clamp)(double a, std::span<const double> x, std::span<const double> upper,
                       std::span<double> y);
};

/// The table selected for this process (cached after the first call).
const KernelTable& kernels();

/// A specific variant; returns nullptr when it is not compiled in or the CPU
/// lacks the instructions.
const KernelTable* kernels_for(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(PSQ_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace psq::simd
