#include "psq/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "psq/simd/kernels.hpp"

namespace psq {

Allocation allocate_ea(const AllocationProblem& problem) {
    validate(problem);
    const double share = problem.q_total / static_cast<double>(problem.size());
    return Allocation{std::vector<double>(problem.size(), share)};
}

Allocation allocate_da(const AllocationProblem& problem) {
    validate(problem);
    const auto demand = demands_of(problem);
    const double total = simd::kernels().sum(demand);
    Allocation a;
    if (total == 0.0) {
        a.quotas.assign(problem.size(), 0.0);
        if (problem.q_total > 0.0) a.flags = AllocationFlag::degenerate_demand;
        return a;
    }
    if (total <= problem.q_total) {
        a.quotas = demand;
        return a;
    }
    a.quotas.resize(problem.size());
    const double scale = problem.q_total / total;
    for (std::size_t i = 0; i < demand.size(); ++i)
        a.quotas[i] = std::min(demand[i], scale * demand[i]);
    return a;
}

Allocation allocate_proportional_contribution(const AllocationProblem& problem) {
    validate(problem);
    const std::size_t n = problem.size();
    const auto& users = problem.users;

    auto ratio = [&](std::size_t i) {
        return users[i].psi > 0.0 ? users[i].demand / users[i].psi
                                  : std::numeric_limits<double>::infinity();
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ratio(a) < ratio(b); });

    // Suffix sums of psi and demand in sorted order.
    std::vector<double> psi_suffix(n + 1, 0.0);
    std::vector<double> demand_suffix(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;) {
        psi_suffix[j] = psi_suffix[j + 1] + users[order[j]].psi;
        demand_suffix[j] = demand_suffix[j + 1] + users[order[j]].demand;
    }

    Allocation a;
    a.quotas.assign(n, 0.0);
    double remaining = problem.q_total;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& u = users[order[j]];
        double share = 0.0;
        if (psi_suffix[j] > 0.0)
            share = u.psi / psi_suffix[j] * remaining;
        else if (demand_suffix[j] > 0.0)
            share = u.demand / demand_suffix[j] * remaining;
        const double q = std::clamp(share, 0.0, u.demand);
        a.quotas[order[j]] = q;
        remaining = std::max(0.0, remaining - q);
    }
    return a;
}

}  // namespace psq
