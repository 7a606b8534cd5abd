#pragma once

// Randomized cross-checks of the allocators against the reference solvers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psq/model.hpp"
#include "psq/random.hpp"

namespace psq {

/// Q_i ~ U(0.05, 1), psi_i ~ U(0.05, 1), c_i ~ U(0.05, 3), qos ~ U(0.2, 2),
/// Q_tot = U(0.3, 0.9) * sum(Q).
AllocationProblem random_instance(Rng& rng, std::size_t n);

struct CheckResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;      ///< largest residual seen
    double tolerance = 0.0;

    bool passed() const noexcept { return failures == 0; }
};

struct SuiteResult {
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
};

struct SuiteOptions {
    std::size_t instances = 100;
    std::uint64_t seed = 1;
    std::size_t maxmin_trials = 1000;
    /// Applied to every ITF allocation before it is checked.
    std::function<void(Allocation&, const AllocationProblem&)> itf_hook;
};

/// Per instance: ITF vs bisection (N <= 50), ITF vs grid search (N <= 3),
/// ITF vs projected ascent (N <= 8), literal vs sweep fill and the iteration
/// bound, the max-min search on IDF, and the equilibrium checks.
SuiteResult run_oracle_suite(const SuiteOptions& options);

}  // namespace psq
