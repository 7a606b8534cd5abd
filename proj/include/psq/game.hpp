#pragma once

// The demand-declaration game played under ITF: players choose declared
// demands, payoffs are their ITF utilities.

#include <cstddef>
#include <span>
#include <vector>

#include "psq/itf.hpp"
#include "psq/model.hpp"

namespace psq {

struct StrategyProfile {
    std::vector<double> demands;
};

/// Everything but the demands: what the provider announces each slot.
struct GameContext {
    std::vector<double> psi;
    std::vector<double> cost;
    double qos = 1.0;
    double q_total = 0.0;

    std::size_t size() const noexcept { return psi.size(); }
};

GameContext game_context(const AllocationProblem& problem);

/// The problem obtained by declaring `profile` in `context`.
AllocationProblem declared_problem(const GameContext& context, const StrategyProfile& profile);

/// Q_i* = [psi_i / (qos + c_i)] / sum_l [psi_l / (qos + c_l)] * Q_tot.
/// Throws Error{all_zero_contribution} when sum(psi) = 0.
StrategyProfile nash_demands(const GameContext& context);

struct NeCheck {
    bool satisfied = false;
    double total_residual = 0.0;  ///< |sum(Q) - Q_tot|
    double level_spread = 0.0;    ///< max_i h_i - min_i h_i over users with psi_i > 0
};

/// h_i = Q_i / psi_i + c_i Q_i / (qos psi_i). Satisfied iff both residuals <= tol.
NeCheck check_ne_conditions(const StrategyProfile& profile, const GameContext& context, double tol);

/// sum_i psi_i log(1 + qos / c_i). Throws Error{zero_cost} when some c_i <= 0
/// and Error{invalid_input} when qos <= 0.
double welfare_bound(std::span<const double> psi, std::span<const double> cost, double qos);

/// 200 multipliers evenly spaced over [0.1, 2.0].
std::vector<double> default_deviation_grid();

/// max over m in grid of u_player(m * Q_player) - u_player(Q_player), all
/// other players fixed, allocations by ITF.
double deviation_sweep(std::size_t player, const StrategyProfile& profile, const GameContext& context,
                       std::span<const double> grid, const ItfOptions& options = {});

}  // namespace psq
