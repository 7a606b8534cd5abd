#include "psq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psq/simd/kernels.hpp"

namespace psq {

double utility(double quota, double demand, double cost, double qos) {
    if (!(demand > 0.0)) return 0.0;
    const double c = std::max(cost, kMinCost);
    return std::log1p(qos * quota / (c * demand));
}

UtilityVector utilities(const Allocation& allocation, const AllocationProblem& problem) {
    if (allocation.size() != problem.size())
        throw Error(ErrorCode::invalid_input, "utilities: allocation size mismatch");
    UtilityVector u;
    u.values.resize(problem.size());
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const auto& user = problem.users[i];
        u.values[i] = utility(allocation.quotas[i], user.demand, user.cost, problem.qos);
    }
    return u;
}

double welfare(const Allocation& allocation, const AllocationProblem& problem) {
    const UtilityVector u = utilities(allocation, problem);
    double s = 0.0;
    for (std::size_t i = 0; i < problem.size(); ++i) s += problem.users[i].psi * u.values[i];
    return s;
}

JainResult jain_index(const Allocation& allocation, const AllocationProblem& problem) {
    if (allocation.size() != problem.size())
        throw Error(ErrorCode::invalid_input, "jain_index: allocation size mismatch");
    const auto demand = demands_of(problem);
    const auto psi = contributions_of(problem);
    const simd::RatioMoments m = simd::kernels().ratio_moments(allocation.quotas, demand, psi);

    JainResult r;
    r.included = m.count;
    if (m.count == 0 || !(m.sum_squares > 0.0)) {
        r.undefined = true;
        r.value = 1.0;
        return r;
    }
    r.value = (m.sum * m.sum) / (static_cast<double>(m.count) * m.sum_squares);
    return r;
}

double jain_closed_form(std::size_t k, double h, std::span<const double> psi_sorted) {
    const std::size_t n = psi_sorted.size();
    if (k > n) throw Error(ErrorCode::invalid_input, "jain_closed_form: k > N");
    double inv = 0.0;
    double inv2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        inv += 1.0 / psi_sorted[j];
        inv2 += 1.0 / (psi_sorted[j] * psi_sorted[j]);
    }
    const double rest = static_cast<double>(n - k);
    const double num = inv + rest * h;
    const double den = static_cast<double>(n) * (inv2 + rest * h * h);
    return den > 0.0 ? num * num / den : 1.0;
}

OverProvision over_provision_stats(const Allocation& allocation, const RealizedDemand& realized) {
    if (allocation.size() != realized.values.size())
        throw Error(ErrorCode::invalid_input, "over_provision_stats: size mismatch");
    OverProvision op;
    op.ratios.resize(allocation.size());
    for (std::size_t i = 0; i < allocation.size(); ++i) {
        const double q = allocation.quotas[i];
        const double actual = realized.values[i];
        if (q > actual) ++op.count;
        double ratio;
        if (actual > 0.0)
            ratio = q / actual;
        else
            ratio = q > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        op.ratios[i] = ratio;
        op.max_ratio = std::max(op.max_ratio, ratio);
    }
    return op;
}

}  // namespace psq
