#pragma once

// Baseline allocators: equal split, demand-proportional split, and the
// contribution-only progressive filling.

#include "psq/model.hpp"

namespace psq {

/// q_i = Q_tot / N. Not capped by demand.
Allocation allocate_ea(const AllocationProblem& problem);

/// q_i = Q_tot * Q_i / sum(Q) under contention, q_i = Q_i otherwise.
/// sum(Q) == 0 with Q_tot > 0 yields zeros and the degenerate_demand flag.
Allocation allocate_da(const AllocationProblem& problem);

/// Raises every unsatisfied user at rate psi_i / sum(psi) until its demand
/// is met, processing users in ascending Q_i / psi_i (stable). Users with
/// psi_i = 0 come last and only share what remains once every contributor is
/// satisfied, in proportion to demand.
Allocation allocate_proportional_contribution(const AllocationProblem& problem);

}  // namespace psq
