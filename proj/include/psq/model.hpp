#pragma once

// Domain types shared by every allocator, metric and experiment.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psq {

/// Absolute tolerance for feasibility assertions and level comparisons.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Costs are floored here so that utilities stay finite.
inline constexpr double kMinCost = 1e-6;

enum class ErrorCode {
    invalid_input,
    invalid_bounds,
    all_zero_contribution,
    zero_cost,
    not_in_contention,
    instance_too_large,
    out_of_range,
};

const char* to_string(ErrorCode code);

/// Whether an error is caused by malformed input (as opposed to a
/// well-formed input on which the requested operation is undefined).
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct UserProfile {
    double psi = 0.0;     ///< contribution level
    double cost = 0.0;    ///< contribution cost
    double demand = 0.0;  ///< declared demand (the estimate when demand is uncertain)
    double sigma = 0.0;   ///< standard deviation of the actual demand
    double alpha = 0.05;  ///< prescribed exceed probability, chance-constrained ITF only
};

struct AllocationProblem {
    std::vector<UserProfile> users;
    double q_total = 0.0;
    double qos = 1.0;

    std::size_t size() const noexcept { return users.size(); }
    double total_demand() const;
    double total_contribution() const;
};

/// Throws Error{invalid_input} describing the first violated invariant.
void validate(const AllocationProblem& problem);
void validate(const UserProfile& user, std::size_t index);

enum class AllocationFlag : unsigned {
    none = 0,
    degenerate_demand = 1u << 0,
};

constexpr AllocationFlag operator|(AllocationFlag a, AllocationFlag b) {
    return static_cast<AllocationFlag>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}

constexpr bool has_flag(AllocationFlag set, AllocationFlag f) {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(f)) != 0;
}

struct Allocation {
    std::vector<double> quotas;
    AllocationFlag flags = AllocationFlag::none;

    std::size_t size() const noexcept { return quotas.size(); }
    double total() const;
};

struct RealizedDemand {
    std::vector<double> values;
};

/// Result of checking an allocation against its problem.
struct FeasibilityReport {
    bool nonnegative = true;
    bool within_total = true;
    bool within_demand = true;
    double total_excess = 0.0;   ///< sum(q) - q_total
    double demand_excess = 0.0;  ///< max_i (q_i - cap_i)

    bool ok(bool demand_capped) const {
        return nonnegative && within_total && (!demand_capped || within_demand);
    }
};

FeasibilityReport check_feasibility(const Allocation& allocation, const AllocationProblem& problem,
                                    double tol = kFeasibilityTolerance);

/// Column accessors used throughout the allocators.
std::vector<double> demands_of(const AllocationProblem& problem);
std::vector<double> contributions_of(const AllocationProblem& problem);
std::vector<double> costs_of(const AllocationProblem& problem);

}  // namespace psq
