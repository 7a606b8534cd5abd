#include "psq/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psq/metrics.hpp"

namespace psq {

GameContext game_context(const AllocationProblem& problem) {
    return GameContext{contributions_of(problem), costs_of(problem), problem.qos, problem.q_total};
}

AllocationProblem declared_problem(const GameContext& context, const StrategyProfile& profile) {
    if (profile.demands.size() != context.size() || context.cost.size() != context.size())
        throw Error(ErrorCode::invalid_input, "strategy profile size mismatch");
    AllocationProblem p;
    p.q_total = context.q_total;
    p.qos = context.qos;
    p.users.resize(context.size());
    for (std::size_t i = 0; i < context.size(); ++i) {
        p.users[i].psi = context.psi[i];
        p.users[i].cost = context.cost[i];
        p.users[i].demand = profile.demands[i];
    }
    return p;
}

StrategyProfile nash_demands(const GameContext& context) {
    if (context.cost.size() != context.size())
        throw Error(ErrorCode::invalid_input, "nash_demands: psi/cost size mismatch");
    if (!(context.qos > 0.0)) throw Error(ErrorCode::invalid_input, "nash_demands: qos must be > 0");
    std::vector<double> weight(context.size());
    double total = 0.0;
    double total_psi = 0.0;
    for (std::size_t i = 0; i < context.size(); ++i) {
        weight[i] = context.psi[i] / (context.qos + context.cost[i]);
        total += weight[i];
        total_psi += context.psi[i];
    }
    if (!(total_psi > 0.0))
        throw Error(ErrorCode::all_zero_contribution, "nash_demands: all contributions are zero");
    StrategyProfile s;
    s.demands.resize(context.size());
    for (std::size_t i = 0; i < context.size(); ++i)
        s.demands[i] = weight[i] / total * context.q_total;
    return s;
}

NeCheck check_ne_conditions(const StrategyProfile& profile, const GameContext& context, double tol) {
    if (profile.demands.size() != context.size())
        throw Error(ErrorCode::invalid_input, "check_ne_conditions: size mismatch");
    NeCheck r;
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < context.size(); ++i) {
        const double q = profile.demands[i];
        sum += q;
        if (!(context.psi[i] > 0.0)) continue;
        const double h = q / context.psi[i] + context.cost[i] * q / (context.qos * context.psi[i]);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    r.total_residual = std::abs(sum - context.q_total);
    r.level_spread = hi >= lo ? hi - lo : 0.0;
    r.satisfied = r.total_residual <= tol && r.level_spread <= tol;
    return r;
}

double welfare_bound(std::span<const double> psi, std::span<const double> cost, double qos) {
    if (psi.size() != cost.size()) throw Error(ErrorCode::invalid_input, "welfare_bound: size mismatch");
    if (!(qos > 0.0)) throw Error(ErrorCode::invalid_input, "welfare_bound: qos must be > 0");
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (!(cost[i] > 0.0)) throw Error(ErrorCode::zero_cost, "welfare_bound: zero cost");
        s += psi[i] * std::log1p(qos / cost[i]);
    }
    return s;
}

std::vector<double> default_deviation_grid() {
    constexpr std::size_t n = 200;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k)
        grid[k] = 0.1 + (2.0 - 0.1) * static_cast<double>(k) / static_cast<double>(n - 1);
    return grid;
}

double deviation_sweep(std::size_t player, const StrategyProfile& profile, const GameContext& context,
                       std::span<const double> grid, const ItfOptions& options) {
    if (player >= context.size()) throw Error(ErrorCode::invalid_input, "deviation_sweep: bad player");
    AllocationProblem p = declared_problem(context, profile);
    const double base_demand = profile.demands[player];
    const double cost = context.cost[player];

    const Allocation at_profile = allocate_itf(p, options);
    const double base = utility(at_profile.quotas[player], base_demand, cost, context.qos);

    if (grid.empty()) return 0.0;
    double gain = -std::numeric_limits<double>::infinity();
    for (double m : grid) {
        if (!(m > 0.0)) throw Error(ErrorCode::invalid_input, "deviation_sweep: multipliers must be > 0");
        if (m == 1.0) {
            gain = std::max(gain, 0.0);
            continue;
        }
        p.users[player].demand = m * base_demand;
        const Allocation a = allocate_itf(p, options);
        gain = std::max(gain, utility(a.quotas[player], p.users[player].demand, cost, context.qos) - base);
    }
    return gain;
}

}  // namespace psq
