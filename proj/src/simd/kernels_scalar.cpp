#include <algorithm>

#include "psq/simd/kernels.hpp"

namespace psq::simd {
namespace {

double sum_scalar(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

RatioMoments ratio_moments_scalar(std::span<const double> q, std::span<const double> demand,
                                  std::span<const double> weight) {
    RatioMoments m;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double w = demand[i] * weight[i];
        if (w > 0.0) {
            const double x = q[i] / w;
            m.sum += x;
            m.sum_squares += x * x;
            ++m.count;
        }
    }
    return m;
}

double fill_volume_scalar(double level, std::span<const double> base,
                          std::span<const double> capacity, std::span<const double> area) {
    double s = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double v = area[i] * (level - base[i]);
        s += std::min(std::max(v, 0.0), capacity[i]);
    }
    return s;
}

void fill_at_level_scalar(double level, std::span<const double> base,
                          std::span<const double> capacity, std::span<const double> area,
                          std::span<double> out) {
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double v = area[i] * (level - base[i]);
        out[i] = std::min(std::max(v, 0.0), capacity[i]);
    }
}

void log_utility_gradient_scalar(std::span<const double> q, std::span<const double> weight,
                                 std::span<const double> cost, std::span<const double> demand,
                                 double qos, std::span<double> out) {
    for (std::size_t i = 0; i < q.size(); ++i)
        out[i] = weight[i] * qos / (cost[i] * demand[i] + qos * q[i]);
}

void axpy_clamp_scalar(double a, std::span<const double> x, std::span<const double> upper,
                       std::span<double> y) {
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = std::min(std::max(y[i] + a * x[i], 0.0), upper[i]);
}

}  // namespace

namespace detail {
const KernelTable scalar_table{
    Isa::scalar,          sum_scalar,
    ratio_moments_scalar, fill_volume_scalar,
    fill_at_level_scalar, log_utility_gradient_scalar,
    axpy_clamp_scalar,
};
}  // namespace detail

}  // namespace psq::simd
