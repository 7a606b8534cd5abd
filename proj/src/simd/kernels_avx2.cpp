// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "psq/simd/kernels.hpp"

namespace psq::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d clamp_pd(__m256d v, __m256d lo, __m256d hi) {
    return _mm256_min_pd(_mm256_max_pd(v, lo), hi);
}

double sum_avx2(std::span<const double> x) {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + kLanes));
    }
    for (; i + kLanes <= n; i += kLanes) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i];
    return s;
}

RatioMoments ratio_moments_avx2(std::span<const double> q, std::span<const double> demand,
                                std::span<const double> weight) {
    const std::size_t n = q.size();
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d s1 = zero;
    __m256d s2 = zero;
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d w = _mm256_mul_pd(_mm256_loadu_pd(demand.data() + i),
                                        _mm256_loadu_pd(weight.data() + i));
        const __m256d mask = _mm256_cmp_pd(w, zero, _CMP_GT_OQ);
        // Masked-out lanes divide by one and are then zeroed.
        const __m256d safe_w = _mm256_blendv_pd(one, w, mask);
        const __m256d x = _mm256_and_pd(_mm256_div_pd(_mm256_loadu_pd(q.data() + i), safe_w), mask);
        s1 = _mm256_add_pd(s1, x);
        s2 = _mm256_fmadd_pd(x, x, s2);
        count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(mask))));
    }
    RatioMoments m{hsum(s1), hsum(s2), count};
    for (; i < n; ++i) {
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

double fill_volume_avx2(double level, std::span<const double> base,
                        std::span<const double> capacity, std::span<const double> area) {
    const std::size_t n = base.size();
    const __m256d lv = _mm256_set1_pd(level);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(area.data() + i),
                                        _mm256_sub_pd(lv, _mm256_loadu_pd(base.data() + i)));
        acc = _mm256_add_pd(acc, clamp_pd(v, zero, _mm256_loadu_pd(capacity.data() + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double v = area[i] * (level - base[i]);
        s += std::min(std::max(v, 0.0), capacity[i]);
    }
    return s;
}

void fill_at_level_avx2(double level, std::span<const double> base,
                        std::span<const double> capacity, std::span<const double> area,
                        std::span<double> out) {
    const std::size_t n = base.size();
    const __m256d lv = _mm256_set1_pd(level);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(area.data() + i),
                                        _mm256_sub_pd(lv, _mm256_loadu_pd(base.data() + i)));
        _mm256_storeu_pd(out.data() + i, clamp_pd(v, zero, _mm256_loadu_pd(capacity.data() + i)));
    }
    for (; i < n; ++i) {
        const double v = area[i] * (level - base[i]);
        out[i] = std::min(std::max(v, 0.0), capacity[i]);
    }
}

void log_utility_gradient_avx2(std::span<const double> q, std::span<const double> weight,
                               std::span<const double> cost, std::span<const double> demand,
                               double qos, std::span<double> out) {
    const std::size_t n = q.size();
    const __m256d qv = _mm256_set1_pd(qos);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d denom =
            _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(cost.data() + i), _mm256_loadu_pd(demand.data() + i)),
                          _mm256_mul_pd(qv, _mm256_loadu_pd(q.data() + i)));
        const __m256d num = _mm256_mul_pd(_mm256_loadu_pd(weight.data() + i), qv);
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(num, denom));
    }
    for (; i < n; ++i) out[i] = weight[i] * qos / (cost[i] * demand[i] + qos * q[i]);
}

void axpy_clamp_avx2(double a, std::span<const double> x, std::span<const double> upper,
                     std::span<double> y) {
    const std::size_t n = y.size();
    const __m256d av = _mm256_set1_pd(a);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_add_pd(_mm256_loadu_pd(y.data() + i),
                                        _mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i)));
        _mm256_storeu_pd(y.data() + i, clamp_pd(v, zero, _mm256_loadu_pd(upper.data() + i)));
    }
    for (; i < n; ++i) y[i] = std::min(std::max(y[i] + a * x[i], 0.0), upper[i]);
}

}  // namespace

namespace detail {
const KernelTable avx2_table{
    Isa::avx2,          sum_avx2,
    ratio_moments_avx2, fill_volume_avx2,
    fill_at_level_avx2, log_utility_gradient_avx2,
    axpy_clamp_avx2,
};
}  // namespace detail

}  // namespace psq::simd
