#pragma once

// Reference solvers used to cross-check the allocators. None of these call
// into the allocators they check; they re-derive the welfare objective and
// the water-level structure from the problem data alone.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psq/model.hpp"

namespace psq::oracle {

/// sum_i psi_i log(1 + qos q_i / (c_i Q_i)), evaluated locally.
double objective(const std::vector<double>& q, const AllocationProblem& problem);

struct LevelSolution {
    Allocation allocation;
    double level = 0.0;
    std::size_t iterations = 0;
};

/// Bisects the common level L with sum_i clamp(psi_i (L - ice_i), 0, Q_i) = Q_tot
/// to 1e-10. Throws Error{not_in_contention} when sum(Q) <= Q_tot.
LevelSolution waterfill_bisection(const AllocationProblem& problem);

struct GridSolution {
    Allocation allocation;
    double welfare = 0.0;
    std::size_t points = 0;  ///< feasible grid points visited
};

/// Exhaustive search over q_i in {0, step, 2 step, ...} capped at Q_i, with
/// sum(q) <= Q_tot. Throws Error{instance_too_large} for N > 3.
GridSolution grid_welfare_max(const AllocationProblem& problem, double step);

struct AscentSolution {
    Allocation allocation;
    double welfare = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Projected gradient ascent with backtracking (step halving from 1.0) onto
/// {0 <= q <= Q, sum(q) <= Q_tot}; stops when one step improves the
/// objective by less than tol. Requires c_i > 0.
AscentSolution projected_ascent_welfare(const AllocationProblem& problem, std::size_t iterations,
                                        double tol);

/// Euclidean projection of y onto the box [0, upper] intersected with
/// {sum <= total}: clamp(y - lambda, 0, upper) with the multiplier lambda
/// bisected (at most 100 steps, 1e-10 on the sum). The result is made
/// feasible exactly.
std::vector<double> project_box_budget(const std::vector<double>& y, const std::vector<double>& upper,
                                       double total);

struct MaxMinViolation {
    std::size_t gainer = 0;
    double gainer_before = 0.0;  ///< q_i / (Q_i psi_i)
    double gainer_after = 0.0;
    bool random_point = false;   ///< found by a random feasible point, not a pairwise transfer
};

struct MaxMinReport {
    std::vector<MaxMinViolation> violations;
    std::size_t trials = 0;
    std::size_t alternatives = 0;  ///< trials that produced a distinct feasible alternative

    bool empty() const noexcept { return violations.empty(); }
};

/// Searches for feasible alternatives that raise some user's weighted ratio
/// q_i / (Q_i psi_i) without lowering any ratio that was already <= it.
/// Alternatives are random transfers of up to epsilon between two users (or
/// from unused quota) and random feasible perturbations. At most
/// `max_reported` violations are recorded.
MaxMinReport maxmin_transfer_search(const Allocation& allocation, const AllocationProblem& problem,
                                    double epsilon, std::size_t trials, std::uint64_t seed,
                                    std::size_t max_reported = 16);

}  // namespace psq::oracle
