#pragma once

// Random scenario generation: per-slot user populations drawn from the
// configured distributions, and realized (actual) demands.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "psq/model.hpp"
#include "psq/random.hpp"

namespace psq {

namespace dist {
struct Fixed {
    double value = 0.0;
};
struct Uniform {
    double a = 0.0;
    double b = 1.0;
};
struct TruncatedNormal {
    double mu = 0.0;
    double sigma = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};
/// N_tr(mean_factor * psi, sd_factor * psi, lo, hi); only meaningful for cost.
struct ContributionLinked {
    double mean_factor = 1.0;
    double sd_factor = 1.0;
    double lo = 0.0;
    double hi = 3.0;
};
}  // namespace dist

using DistributionSpec =
    std::variant<dist::Fixed, dist::Uniform, dist::TruncatedNormal, dist::ContributionLinked>;

namespace qtotal {
struct Fixed {
    double value = 0.0;
};
/// f * sum(Q_i)
struct Fraction {
    double f = 0.75;
};
/// U(a, b) * sum(Q_i), drawn once per slot
struct FractionUniform {
    double a = 0.5;
    double b = 1.0;
};
/// max{1, qos / target_qos} * q_max
struct QosLinked {
    double target_qos = 1.0;
    double q_max = 1.0;
};
}  // namespace qtotal

using QTotalPolicy =
    std::variant<qtotal::Fixed, qtotal::Fraction, qtotal::FractionUniform, qtotal::QosLinked>;

namespace qos {
struct Fixed {
    double value = 1.0;
};
/// kappa * sum(psi_i)
struct Linear {
    double kappa = 1e-3;
};
}  // namespace qos

using QosPolicy = std::variant<qos::Fixed, qos::Linear>;

struct AlphaPolicy {
    enum class Kind { uniform, contribution_scaled };
    Kind kind = Kind::uniform;
    double alpha0 = 0.05;
};

enum class SimMode { macro, uncertainty, micro };

/// One named user of a fixed (non-random) population.
struct PopulationMember {
    std::string label;
    double demand = 0.0;
    double psi = 0.0;
    double cost = 0.0;
};

/// Fixed population: the named users followed by copies of `normal` up to
/// `n_users`.
struct PopulationSpec {
    std::string name;
    std::vector<PopulationMember> named;
    PopulationMember normal;
    std::size_t n_users = 100;
};

struct ScenarioConfig {
    std::size_t n_users = 100;
    std::uint64_t seed = 1;
    std::size_t rounds = 100;
    SimMode mode = SimMode::macro;

    QTotalPolicy q_total = qtotal::FractionUniform{0.5, 1.0};
    QosPolicy qos = qos::Linear{1e-3};
    DistributionSpec demand = dist::Uniform{0.0, 1.0};
    DistributionSpec contribution = dist::Uniform{0.0, 1.0};
    DistributionSpec cost = dist::ContributionLinked{1.0, 1.0, 0.0, 3.0};
    double relative_sigma = 0.25;
    AlphaPolicy alpha;
    bool burst = true;

    std::vector<std::string> schemes;         ///< empty: mode default
    std::optional<PopulationSpec> population;  ///< micro mode
};

/// Throws Error{invalid_input} on any ill-formed field.
void validate(const ScenarioConfig& config);

/// The setup behind the scheme comparison: N = 100, Q_i ~ U(0,1),
/// psi_i ~ U(0,1), c_i ~ N_tr(psi_i, psi_i, 0, 3), Q_tot = U(0.5,1)*sum(Q),
/// qos = 1e-3 * sum(psi), 100 rounds.
ScenarioConfig macro_config(std::uint64_t seed = 1);

/// The EVM versus chance-constrained comparison: as macro_config but with
/// Q_tot = 0.75 * sum(Q) and alpha_i = 0.05.
ScenarioConfig uncertainty_config(std::uint64_t seed = 1);

/// Named representative-user populations: "unwelcome" (high-demand,
/// low-contribution, high-cost) and "welcome" (low-demand, high-contribution,
/// low-cost), 100 users each.
PopulationSpec unwelcome_users_population();
PopulationSpec welcome_users_population();
std::optional<PopulationSpec> population_preset(const std::string& name);

/// Deterministic in (config, slot_index).
AllocationProblem generate_scenario(const ScenarioConfig& config, std::uint64_t slot_index);

/// Applies the config's q_total and qos policies to a fixed population.
/// A uniform-fraction q_total policy uses the midpoint of its interval.
AllocationProblem population_problem(const PopulationSpec& population, const ScenarioConfig& config);

/// Q~_i ~ N_tr(Q_i, relative_sigma * Q_i, 0, 1).
RealizedDemand realize_demands(Rng& rng, const AllocationProblem& problem, double relative_sigma);

std::string to_string(SimMode mode);
std::optional<SimMode> parse_sim_mode(const std::string& s);

}  // namespace psq
