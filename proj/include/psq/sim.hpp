#pragma once

// Experiment drivers: the Monte Carlo scheme comparison, the
// expected-value versus chance-constrained over-provisioning study with
// burst reallocation, and the fixed-population micro study.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psq/metrics.hpp"
#include "psq/model.hpp"
#include "psq/random.hpp"
#include "psq/scenario.hpp"

namespace psq {

enum class Scheme { ea, da, pca, idf, itf, ne, itf_ccp };

std::string to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(const std::string& name);
std::vector<Scheme> all_schemes();
/// EA, DA, IDF, ITF, NE, ITF-CCP.
std::vector<Scheme> comparison_schemes();

/// Runs one allocator. NE replaces the declared demands by the equilibrium
/// demands before allocating with ITF; the returned allocation is then
/// relative to those demands (see SlotOutcome::declared).
Allocation allocate(Scheme scheme, const AllocationProblem& problem);

struct SlotOutcome {
    Scheme scheme = Scheme::itf;
    Allocation allocation;               ///< granted quota, before any burst
    std::vector<double> declared;        ///< demands the utilities are normalized by
    RealizedDemand realized;
    UtilityVector utilities;             ///< of allocation + burst
    double welfare = 0.0;
    double jain = 1.0;
    std::size_t over_provision_count = 0;
    double max_over_provision_ratio = 0.0;
    std::vector<double> burst_grants;    ///< zero when no burst ran
    std::vector<double> consumption_start;
    double q_ext = 0.0;                  ///< Q_tot - sum(allocation), floored at 0

    /// allocation + burst grants
    Allocation granted() const;
};

/// Allocates with `scheme` and scores against `realized`. Burst is not run.
SlotOutcome run_slot(Scheme scheme, const AllocationProblem& problem, const RealizedDemand& realized);

/// When q_ext > 0: draws t_i ~ U(q_i, 1) (t_i = q_i if q_i >= 1), grants the
/// leftover first-come-first-serve via allocate_burst and rescoring.
/// Otherwise returns the outcome unchanged.
SlotOutcome run_burst_phase(const SlotOutcome& outcome, const AllocationProblem& problem, Rng& rng);

struct Summary {
    double mean = 0.0;
    double ci95 = 0.0;  ///< 1.96 * s / sqrt(n)
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

/// Pairwise-summed mean with a normal-approximation 95% half-width.
Summary summarize(std::span<const double> values);

struct RoundRecord {
    std::size_t round = 0;
    Scheme scheme = Scheme::itf;
    double welfare = 0.0;
    double jain = 1.0;
    std::size_t over_provision_count = 0;
    double q_ext = 0.0;
    double welfare_fraction = 0.0;  ///< welfare / welfare_bound of the round
};

struct SchemeAggregate {
    Scheme scheme = Scheme::itf;
    Summary welfare;
    Summary jain;
    Summary welfare_fraction;
    Summary over_provision;
};

struct MicroSchemeResult {
    Scheme scheme = Scheme::itf;
    std::vector<double> quota;
    std::vector<double> quota_over_demand;
    std::vector<double> utility;
    double welfare = 0.0;
    double jain = 1.0;
};

struct MicroReport {
    std::string population;
    AllocationProblem problem;
    std::vector<std::string> labels;
    std::vector<MicroSchemeResult> schemes;
};

struct UncertaintyReport {
    std::vector<Scheme> methods;
    /// Slot 0 details, per method.
    std::vector<std::size_t> first_slot_count;
    std::vector<double> first_slot_max_ratio;
    /// Over-provision rate (count / N) across all repetitions, per method.
    std::vector<Summary> rate;
};

struct ExperimentReport {
    SimMode mode = SimMode::macro;
    std::uint64_t seed = 0;
    std::size_t rounds = 0;
    std::size_t n_users = 0;
    std::vector<SchemeAggregate> schemes;
    std::vector<RoundRecord> records;
    std::optional<MicroReport> micro;
    std::optional<UncertaintyReport> uncertainty;

    const SchemeAggregate* find(Scheme scheme) const;
};

/// Per round r: generate_scenario(config, r), one shared realization, every
/// scheme scored, ITF-CCP followed by the burst phase when config.burst.
ExperimentReport run_macro_experiment(const ScenarioConfig& config, std::span<const Scheme> schemes);

struct UncertaintyComparison {
    AllocationProblem problem;
    RealizedDemand realized;
    SlotOutcome evm;
    SlotOutcome ccp;
};

/// Expected-value ITF and chance-constrained ITF on one slot, both scored
/// against the same realization.
UncertaintyComparison run_uncertainty_comparison(const ScenarioConfig& config, std::uint64_t slot);

/// Single method of the comparison above; `method` is Scheme::itf (EVM) or
/// Scheme::itf_ccp.
SlotOutcome run_uncertainty_experiment(const ScenarioConfig& config, Scheme method, std::uint64_t slot = 0);

/// config.rounds repetitions of the comparison.
ExperimentReport run_uncertainty_study(const ScenarioConfig& config, std::span<const Scheme> methods);

MicroReport run_micro_study(const PopulationSpec& population, const ScenarioConfig& config,
                            std::span<const Scheme> schemes);

/// Dispatches on config.mode; empty `schemes` selects the mode default.
ExperimentReport run_experiment(const ScenarioConfig& config, std::span<const Scheme> schemes);

}  // namespace psq
