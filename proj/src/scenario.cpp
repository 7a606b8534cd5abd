#include "psq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::invalid_input, msg); }

void validate_dist(const DistributionSpec& spec, const char* name) {
    std::visit(overloaded{
                   [&](const dist::Fixed& d) {
                       if (!(std::isfinite(d.value) && d.value >= 0.0))
                           fail(std::string(name) + ": fixed value must be >= 0");
                   },
                   [&](const dist::Uniform& d) {
                       if (!(d.a < d.b) || d.a < 0.0)
                           fail(std::string(name) + ": uniform needs 0 <= a < b");
                   },
                   [&](const dist::TruncatedNormal& d) {
                       if (!(d.lo < d.hi) || d.lo < 0.0 || !(d.sigma >= 0.0))
                           fail(std::string(name) + ": truncated normal needs 0 <= lo < hi, sigma >= 0");
                   },
                   [&](const dist::ContributionLinked& d) {
                       if (!(d.lo < d.hi) || d.lo < 0.0 || !(d.sd_factor >= 0.0) ||
                           !(d.mean_factor >= 0.0))
                           fail(std::string(name) + ": linked truncated normal needs 0 <= lo < hi");
                   },
               },
               spec);
}

double draw(Rng& rng, const DistributionSpec& spec, double psi) {
    return std::visit(overloaded{
                          [&](const dist::Fixed& d) { return d.value; },
                          [&](const dist::Uniform& d) { return sample_uniform(rng, d.a, d.b); },
                          [&](const dist::TruncatedNormal& d) {
                              return sample_truncated_normal(rng, d.mu, d.sigma, d.lo, d.hi);
                          },
                          [&](const dist::ContributionLinked& d) {
                              return sample_truncated_normal(rng, d.mean_factor * psi,
                                                             d.sd_factor * psi, d.lo, d.hi);
                          },
                      },
                      spec);
}

double evaluate_qos(const QosPolicy& policy, double total_psi) {
    return std::visit(overloaded{
                          [](const qos::Fixed& p) { return p.value; },
                          [&](const qos::Linear& p) { return p.kappa * total_psi; },
                      },
                      policy);
}

double evaluate_q_total(const QTotalPolicy& policy, double total_demand, double qos_value,
                        Rng* rng) {
    return std::visit(
        overloaded{
            [](const qtotal::Fixed& p) { return p.value; },
            [&](const qtotal::Fraction& p) { return p.f * total_demand; },
            [&](const qtotal::FractionUniform& p) {
                const double f = rng ? sample_uniform(*rng, p.a, p.b) : 0.5 * (p.a + p.b);
                return f * total_demand;
            },
            // Literal max{1, qos / target} * q_max.
            [&](const qtotal::QosLinked& p) {
                return std::max(1.0, qos_value / p.target_qos) * p.q_max;
            },
        },
        policy);
}

void assign_alpha(AllocationProblem& problem, const AlphaPolicy& policy) {
    constexpr double lo = 1e-12;
    constexpr double hi = 1.0 - 1e-12;
    if (policy.kind == AlphaPolicy::Kind::uniform) {
        for (auto& u : problem.users) u.alpha = std::clamp(policy.alpha0, lo, hi);
        return;
    }
    const double total = problem.total_contribution();
    for (auto& u : problem.users) {
        const double a = total > 0.0 ? policy.alpha0 * u.psi / total : policy.alpha0;
        u.alpha = std::clamp(a, lo, hi);
    }
}

}  // namespace

void validate(const ScenarioConfig& config) {
    if (config.n_users < 1) fail("n_users must be >= 1");
    if (config.rounds < 1) fail("rounds must be >= 1");
    validate_dist(config.demand, "demand");
    validate_dist(config.contribution, "contribution");
    validate_dist(config.cost, "cost");
    if (!(config.relative_sigma >= 0.0) || !std::isfinite(config.relative_sigma))
        fail("relative_sigma must be >= 0");
    if (!(config.alpha.alpha0 > 0.0 && config.alpha.alpha0 < 1.0)) fail("alpha0 must lie in (0, 1)");
    std::visit(overloaded{
                   [](const qtotal::Fixed& p) {
                       if (!(p.value >= 0.0)) fail("q_total: fixed value must be >= 0");
                   },
                   [](const qtotal::Fraction& p) {
                       if (!(p.f >= 0.0)) fail("q_total: fraction must be >= 0");
                   },
                   [](const qtotal::FractionUniform& p) {
                       if (!(p.a < p.b) || p.a < 0.0) fail("q_total: need 0 <= a < b");
                   },
                   [](const qtotal::QosLinked& p) {
                       if (!(p.target_qos > 0.0) || !(p.q_max >= 0.0))
                           fail("q_total: qos_linked needs target_qos > 0, q_max >= 0");
                   },
               },
               config.q_total);
    std::visit(overloaded{
                   [](const qos::Fixed& p) {
                       if (!(p.value > 0.0)) fail("qos: fixed value must be > 0");
                   },
                   [](const qos::Linear& p) {
                       if (!(p.kappa > 0.0)) fail("qos: kappa must be > 0");
                   },
               },
               config.qos);
    if (config.population) {
        if (config.population->named.size() > config.population->n_users)
            fail("population: more named users than n_users");
    }
}

ScenarioConfig macro_config(std::uint64_t seed) {
    ScenarioConfig c;
    c.seed = seed;
    c.mode = SimMode::macro;
    return c;
}

ScenarioConfig uncertainty_config(std::uint64_t seed) {
    ScenarioConfig c;
    c.seed = seed;
    c.mode = SimMode::uncertainty;
    c.q_total = qtotal::Fraction{0.75};
    c.burst = false;
    return c;
}

PopulationSpec unwelcome_users_population() {
    PopulationSpec p;
    p.name = "unwelcome";
    p.named = {
        {"high-demand", 1.0, 0.5, 0.5},
        {"low-contribution", 0.5, 0.25, 0.5},
        {"high-cost", 0.5, 0.5, 1.0},
        {"normal", 0.5, 0.5, 0.5},
    };
    p.normal = {"normal", 0.5, 0.5, 0.5};
    p.n_users = 100;
    return p;
}

PopulationSpec welcome_users_population() {
    PopulationSpec p;
    p.name = "welcome";
    p.named = {
        {"low-demand", 0.25, 0.5, 0.5},
        {"high-contribution", 0.5, 1.0, 0.5},
        {"low-cost", 0.5, 0.5, 0.25},
        {"normal", 0.5, 0.5, 0.5},
    };
    p.normal = {"normal", 0.5, 0.5, 0.5};
    p.n_users = 100;
    return p;
}

std::optional<PopulationSpec> population_preset(const std::string& name) {
    if (name == "unwelcome") return unwelcome_users_population();
    if (name == "welcome") return welcome_users_population();
    return std::nullopt;
}

AllocationProblem generate_scenario(const ScenarioConfig& config, std::uint64_t slot_index) {
    validate(config);
    Rng rng = Rng::substream(config.seed, slot_index, 0, StreamPurpose::scenario);

    AllocationProblem p;
    p.users.resize(config.n_users);
    for (auto& u : p.users) {
        u.demand = draw(rng, config.demand, 0.0);
        u.psi = draw(rng, config.contribution, 0.0);
        u.cost = std::max(kMinCost, draw(rng, config.cost, u.psi));
        u.sigma = config.relative_sigma * u.demand;
    }
    p.qos = evaluate_qos(config.qos, p.total_contribution());
    if (!(p.qos > 0.0)) p.qos = kMinCost;
    p.q_total = evaluate_q_total(config.q_total, p.total_demand(), p.qos, &rng);
    assign_alpha(p, config.alpha);
    return p;
}

AllocationProblem population_problem(const PopulationSpec& population, const ScenarioConfig& config) {
    if (population.named.size() > population.n_users || population.n_users == 0)
        fail("population: need 1 <= named users <= n_users");
    AllocationProblem p;
    p.users.reserve(population.n_users);
    auto add = [&](const PopulationMember& m) {
        UserProfile u;
        u.demand = m.demand;
        u.psi = m.psi;
        u.cost = std::max(kMinCost, m.cost);
        u.sigma = config.relative_sigma * m.demand;
        p.users.push_back(u);
    };
    for (const auto& m : population.named) add(m);
    while (p.users.size() < population.n_users) add(population.normal);
    p.qos = evaluate_qos(config.qos, p.total_contribution());
    p.q_total = evaluate_q_total(config.q_total, p.total_demand(), p.qos, nullptr);
    assign_alpha(p, config.alpha);
    validate(p);
    return p;
}

RealizedDemand realize_demands(Rng& rng, const AllocationProblem& problem, double relative_sigma) {
    if (!(relative_sigma >= 0.0)) fail("realize_demands: relative_sigma must be >= 0");
    RealizedDemand r;
    r.values.reserve(problem.size());
    for (const auto& u : problem.users) {
        const double sigma = relative_sigma * u.demand;
        r.values.push_back(sample_truncated_normal(rng, u.demand, sigma, 0.0, 1.0));
    }
    return r;
}

std::string to_string(SimMode mode) {
    switch (mode) {
    case SimMode::macro: return "macro";
    case SimMode::uncertainty: return "uncertainty";
    case SimMode::micro: return "micro";
    }
    return "macro";
}

std::optional<SimMode> parse_sim_mode(const std::string& s) {
    if (s == "macro") return SimMode::macro;
    if (s == "uncertainty") return SimMode::uncertainty;
    if (s == "micro") return SimMode::micro;
    return std::nullopt;
}

}  // namespace psq
