#include "psq/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psq/model.hpp"
#include "psq/normal.hpp"

namespace psq {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t slot, std::uint64_t round,
                          StreamPurpose purpose) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ slot);
    h = mix64(h ^ round);
    return mix64(h ^ static_cast<std::uint64_t>(purpose));
}

double sample_uniform(Rng& rng, double a, double b) {
    if (!(a < b)) {
        std::ostringstream os;
        os << "sample_uniform: need a < b, got [" << a << ", " << b << ")";
        throw Error(ErrorCode::invalid_bounds, os.str());
    }
    const double x = a + (b - a) * rng.next_unit();
    // a + (b - a) * u can round up to b when u is close to 1.
    return x < b ? x : std::nextafter(b, a);
}

namespace {

constexpr double kMinAcceptance = 0.01;
constexpr int kMaxRejections = 100000;

double inverse_cdf_truncated(Rng& rng, double mu, double sigma, double lo, double hi) {
    const double alpha = (lo - mu) / sigma;
    const double beta = (hi - mu) / sigma;
    // Work in whichever tail keeps the CDF values away from 1.
    const bool mirror = alpha > 0.0;
    const double a = mirror ? -beta : alpha;
    const double b = mirror ? -alpha : beta;
    const double fa = normal_cdf(a);
    const double fb = normal_cdf(b);
    double z;
    if (!(fb > fa)) {
        z = std::abs(a) < std::abs(b) ? a : b;
    } else {
        double u = fa + (fb - fa) * rng.next_unit();
        u = std::clamp(u, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
        z = std::clamp(probit(u), a, b);
    }
    if (mirror) z = -z;
    return std::clamp(mu + sigma * z, lo, hi);
}

}  // namespace

double sample_truncated_normal(Rng& rng, double mu, double sigma, double lo, double hi) {
    if (!(lo < hi) || !(sigma >= 0.0)) {
        std::ostringstream os;
        os << "sample_truncated_normal: need lo < hi and sigma >= 0, got lo=" << lo
           << " hi=" << hi << " sigma=" << sigma;
        throw Error(ErrorCode::invalid_bounds, os.str());
    }
    if (sigma == 0.0) return std::clamp(mu, lo, hi);

    const double accept = normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma);
    if (accept < kMinAcceptance) return inverse_cdf_truncated(rng, mu, sigma, lo, hi);

    for (int i = 0; i < kMaxRejections; ++i) {
        const double x = mu + sigma * rng.next_standard_normal();
        if (x >= lo && x <= hi) return x;
    }
    return inverse_cdf_truncated(rng, mu, sigma, lo, hi);
}

}  // namespace psq
