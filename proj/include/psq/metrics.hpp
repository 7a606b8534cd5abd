#pragma once

// Per-user utilities, contribution-weighted welfare, Jain's fairness index
// over the weighted ratios q_i / (Q_i psi_i), and over-provisioning counts.

#include <cstddef>
#include <span>
#include <vector>

#include "psq/model.hpp"

namespace psq {

struct UtilityVector {
    std::vector<double> values;
};

/// u_i = log(1 + qos * q_i / (c_i Q_i)); u_i = 0 when Q_i = 0. Costs below
/// kMinCost are floored.
UtilityVector utilities(const Allocation& allocation, const AllocationProblem& problem);

/// u_i with an explicit demand vector in the denominator (the allocation may
/// have been computed against other caps).
double utility(double quota, double demand, double cost, double qos);

/// sum_i psi_i u_i
double welfare(const Allocation& allocation, const AllocationProblem& problem);

struct JainResult {
    double value = 1.0;
    std::size_t included = 0;  ///< users with Q_i psi_i > 0
    bool undefined = false;    ///< every included ratio is zero; value reported as 1
};

/// (sum x)^2 / (N' sum x^2) with x_i = q_i / (Q_i psi_i) over the N' users
/// with Q_i psi_i > 0.
JainResult jain_index(const Allocation& allocation, const AllocationProblem& problem);

/// The closed form for a two-regime allocation: k users fully satisfied (in
/// descending psi order) and the rest at ratio h.
double jain_closed_form(std::size_t k, double h, std::span<const double> psi_sorted);

struct OverProvision {
    std::size_t count = 0;
    std::vector<double> ratios;  ///< q_i / Q~_i; infinity when Q~_i = 0 < q_i, 0 when both are 0
    double max_ratio = 0.0;
};

/// Counts q_i > Q~_i.
OverProvision over_provision_stats(const Allocation& allocation, const RealizedDemand& realized);

}  // namespace psq
