#pragma once

// Iterative Tank Filling.
//
// Each user is a tank with bottom area psi_i whose lower part is frozen up
// to the ice level c_i Q_i / (psi_i Qos); water of volume Q_tot is poured
// over all tanks at once and settles at the lowest free levels, so a tank
// receives water only once the common level passes its ice, and stops at its
// top ice_i + Q_i / psi_i. The granted quota is the water volume in the tank.
// This maximizes sum_i psi_i log(1 + Qos q_i / (c_i Q_i)) subject to
// 0 <= q_i <= Q_i and sum(q) <= Q_tot.

#include <cstddef>
#include <span>
#include <vector>

#include "psq/model.hpp"
#include "psq/normal.hpp"

namespace psq {

struct TankState {
    std::vector<double> ice;       ///< level where filling starts
    std::vector<double> top;       ///< level where the tank is full
    std::vector<double> area;      ///< bottom area
    std::vector<double> capacity;  ///< water volume when full, area * (top - ice)
    std::vector<bool> removed;     ///< excluded from filling (zero area or capacity)

    std::size_t size() const noexcept { return ice.size(); }
};

enum class FillMode {
    event_sweep,  ///< sort the 2N ice/top levels once and sweep, O(N log N)
    literal,      ///< the iteration-by-iteration loop, O(N^2)
};

struct FillTrace {
    std::size_t iterations = 0;  ///< main-loop iterations (literal) or segments swept
    double level = 0.0;          ///< final common water level (infinity if all full)
};

struct ItfOptions {
    FillMode mode = FillMode::event_sweep;
    FillTrace* trace = nullptr;
};

/// Tanks for a problem with per-user caps; cap_i replaces Q_i in the tank
/// height while the ice level always uses the declared demand. Users with
/// psi_i = 0 or cap_i = 0 are removed.
TankState make_tanks(const AllocationProblem& problem, std::span<const double> caps);

/// Pours `volume` into the tanks; returns the water per tank.
std::vector<double> fill_tanks(const TankState& tanks, double volume,
                               FillMode mode = FillMode::event_sweep, FillTrace* trace = nullptr);

Allocation allocate_itf(const AllocationProblem& problem, const ItfOptions& options = {});

/// Q_i^eff = max(0, Q_i + sigma_i * probit(alpha_i)).
std::vector<double> chance_constrained_caps(const AllocationProblem& problem);

/// ITF with tank heights from the chance-constrained caps. The early return
/// compares sum of caps against Q_tot.
Allocation allocate_itf_ccp(const AllocationProblem& problem, const ItfOptions& options = {});

/// Reallocates leftover quota first-come-first-serve: tank i starts at
/// consumption_start t_i with unit area and headroom (Q~_i - t_i)^+.
Allocation allocate_burst(double extra_quota, std::span<const double> consumption_start,
                          const RealizedDemand& realized, const ItfOptions& options = {});

}  // namespace psq
