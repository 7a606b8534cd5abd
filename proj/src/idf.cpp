#include "psq/idf.hpp"

#include <algorithm>
#include <numeric>

namespace psq {

std::vector<std::size_t> idf_order(const AllocationProblem& problem) {
    std::vector<std::size_t> order(problem.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return problem.users[a].psi > problem.users[b].psi;
    });
    return order;
}

namespace {

Allocation idf_in_order(const AllocationProblem& problem, const std::vector<std::size_t>& order) {
    const std::size_t n = problem.size();
    const auto& users = problem.users;

    std::vector<double> weight_suffix(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;)
        weight_suffix[j] = weight_suffix[j + 1] + users[order[j]].demand * users[order[j]].psi;

    Allocation a;
    a.quotas.assign(n, 0.0);
    double remaining = problem.q_total;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(weight_suffix[j] > 0.0)) break;  // nobody left with Q * psi > 0
        const auto& u = users[order[j]];
        const double q = std::min(u.demand, remaining * (u.demand * u.psi) / weight_suffix[j]);
        a.quotas[order[j]] = std::max(0.0, q);
        remaining = std::max(0.0, remaining - a.quotas[order[j]]);
    }
    return a;
}

}  // namespace

Allocation allocate_idf(const AllocationProblem& problem) {
    validate(problem);
    if (problem.total_demand() <= problem.q_total) return Allocation{demands_of(problem)};
    return idf_in_order(problem, idf_order(problem));
}

IdfWaterLevel idf_water_level(const AllocationProblem& problem) {
    validate(problem);
    if (problem.total_demand() <= problem.q_total)
        throw Error(ErrorCode::not_in_contention, "idf_water_level: sum(Q) <= Q_tot");
    const auto order = idf_order(problem);
    const Allocation a = idf_in_order(problem, order);

    IdfWaterLevel w;
    double satisfied = 0.0;
    for (std::size_t idx : order) {
        const double demand = problem.users[idx].demand;
        if (a.quotas[idx] < demand - kFeasibilityTolerance) break;
        satisfied += demand;
        ++w.k;
    }
    double weight = 0.0;
    for (std::size_t j = w.k; j < order.size(); ++j)
        weight += problem.users[order[j]].demand * problem.users[order[j]].psi;
    w.h = weight > 0.0 ? (problem.q_total - satisfied) / weight : 0.0;
    return w;
}

}  // namespace psq
