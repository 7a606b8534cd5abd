#pragma once

// Incentive with Demand Fairness: quota proportional to Q_i * psi_i, capped
// by demand, filled in descending-contribution order.

#include <cstddef>
#include <vector>

#include "psq/model.hpp"

namespace psq {

Allocation allocate_idf(const AllocationProblem& problem);

/// Descending psi, ties by original index.
std::vector<std::size_t> idf_order(const AllocationProblem& problem);

struct IdfWaterLevel {
    std::size_t k = 0;  ///< fully satisfied users, a prefix of idf_order
    double h = 0.0;     ///< q_j = h * Q_j * psi_j for the rest
};

/// Extracts (k, h) from the IDF allocation by scanning the sorted order.
/// Throws Error{not_in_contention} when sum(Q) <= Q_tot.
IdfWaterLevel idf_water_level(const AllocationProblem& problem);

}  // namespace psq
