#include "psq/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "psq/baseline.hpp"
#include "psq/game.hpp"
#include "psq/idf.hpp"
#include "psq/itf.hpp"

namespace psq {

namespace {

constexpr std::array<std::pair<Scheme, const char*>, 7> kSchemeNames{{
    {Scheme::ea, "ea"},
    {Scheme::da, "da"},
    {Scheme::pca, "pca"},
    {Scheme::idf, "idf"},
    {Scheme::itf, "itf"},
    {Scheme::ne, "ne"},
    {Scheme::itf_ccp, "itf-ccp"},
}};

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

AllocationProblem with_demands(const AllocationProblem& problem, const std::vector<double>& demands) {
    AllocationProblem p = problem;
    for (std::size_t i = 0; i < p.size(); ++i) p.users[i].demand = demands[i];
    return p;
}

void score(SlotOutcome& out, const AllocationProblem& problem) {
    const AllocationProblem scored = with_demands(problem, out.declared);
    const Allocation g = out.granted();
    out.utilities = utilities(g, scored);
    out.welfare = welfare(g, scored);
    out.jain = jain_index(g, scored).value;
    const OverProvision op = over_provision_stats(g, out.realized);
    out.over_provision_count = op.count;
    out.max_over_provision_ratio = op.max_ratio;
}

}  // namespace

std::string to_string(Scheme scheme) {
    for (const auto& [s, name] : kSchemeNames)
        if (s == scheme) return name;
    return "unknown";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    for (const auto& [s, n] : kSchemeNames)
        if (name == n) return s;
    return std::nullopt;
}

std::vector<Scheme> all_schemes() {
    std::vector<Scheme> out;
    for (const auto& [s, name] : kSchemeNames) out.push_back(s);
    return out;
}

std::vector<Scheme> comparison_schemes() {
    return {Scheme::ea, Scheme::da, Scheme::idf, Scheme::itf, Scheme::ne, Scheme::itf_ccp};
}

Allocation allocate(Scheme scheme, const AllocationProblem& problem) {
    switch (scheme) {
        case Scheme::ea:
            return allocate_ea(problem);
        case Scheme::da:
            return allocate_da(problem);
        case Scheme::pca:
            return allocate_proportional_contribution(problem);
        case Scheme::idf:
            return allocate_idf(problem);
        case Scheme::itf:
            return allocate_itf(problem);
        case Scheme::ne: {
            const GameContext ctx = game_context(problem);
            return allocate_itf(declared_problem(ctx, nash_demands(ctx)));
        }
        case Scheme::itf_ccp:
            return allocate_itf_ccp(problem);
    }
    throw Error(ErrorCode::invalid_input, "allocate: unknown scheme");
}

Allocation SlotOutcome::granted() const {
    Allocation g = allocation;
    for (std::size_t i = 0; i < burst_grants.size() && i < g.quotas.size(); ++i) g.quotas[i] += burst_grants[i];
    return g;
}

SlotOutcome run_slot(Scheme scheme, const AllocationProblem& problem, const RealizedDemand& realized) {
    SlotOutcome out;
    out.scheme = scheme;
    if (scheme == Scheme::ne) {
        const GameContext ctx = game_context(problem);
        out.declared = nash_demands(ctx).demands;
        out.allocation = allocate_itf(declared_problem(ctx, StrategyProfile{out.declared}));
    } else {
        out.declared = demands_of(problem);
        out.allocation = allocate(scheme, problem);
    }
    out.realized = realized;
    out.burst_grants.assign(problem.size(), 0.0);
    out.q_ext = std::max(0.0, problem.q_total - out.allocation.total());
    score(out, problem);
    return out;
}

SlotOutcome run_burst_phase(const SlotOutcome& outcome, const AllocationProblem& problem, Rng& rng) {
    if (!(outcome.q_ext > 0.0)) return outcome;
    SlotOutcome out = outcome;
    const std::size_t n = out.allocation.size();
    out.consumption_start.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = out.allocation.quotas[i];
        out.consumption_start[i] = q < 1.0 ? sample_uniform(rng, q, 1.0) : q;
    }
    out.burst_grants = allocate_burst(out.q_ext, out.consumption_start, out.realized).quotas;
    score(out, problem);
    return out;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = pairwise_sum(values) / static_cast<double>(s.n);
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    if (s.n > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - s.mean) * (values[i] - s.mean);
        const double var = pairwise_sum(dev) / static_cast<double>(s.n - 1);
        s.ci95 = 1.96 * std::sqrt(var / static_cast<double>(s.n));
    }
    return s;
}

const SchemeAggregate* ExperimentReport::find(Scheme scheme) const {
    for (const auto& a : schemes)
        if (a.scheme == scheme) return &a;
    return nullptr;
}

namespace {

void aggregate(ExperimentReport& report, std::span<const Scheme> schemes) {
    for (Scheme s : schemes) {
        std::vector<double> w, j, f, op;
        for (const auto& r : report.records) {
            if (r.scheme != s) continue;
            w.push_back(r.welfare);
            j.push_back(r.jain);
            f.push_back(r.welfare_fraction);
            op.push_back(static_cast<double>(r.over_provision_count));
        }
        report.schemes.push_back({s, summarize(w), summarize(j), summarize(f), summarize(op)});
    }
}

RoundRecord record_of(std::size_t round, const SlotOutcome& o, double bound) {
    return {round, o.scheme, o.welfare, o.jain, o.over_provision_count, o.q_ext,
            bound > 0.0 ? o.welfare / bound : 0.0};
}

}  // namespace

ExperimentReport run_macro_experiment(const ScenarioConfig& config, std::span<const Scheme> schemes) {
    validate(config);
    if (config.rounds < 1) throw Error(ErrorCode::invalid_input, "run_macro_experiment: rounds must be >= 1");
    ExperimentReport report;
    report.mode = SimMode::macro;
    report.seed = config.seed;
    report.rounds = config.rounds;
    report.n_users = config.n_users;

    for (std::size_t r = 0; r < config.rounds; ++r) {
        const AllocationProblem problem = generate_scenario(config, r);
        Rng real_rng = Rng::substream(config.seed, r, 0, StreamPurpose::realization);
        const RealizedDemand realized = realize_demands(real_rng, problem, config.relative_sigma);
        const double bound = welfare_bound(contributions_of(problem), costs_of(problem), problem.qos);
        for (Scheme s : schemes) {
            SlotOutcome o = run_slot(s, problem, realized);
            if (s == Scheme::itf_ccp && config.burst) {
                Rng burst_rng = Rng::substream(config.seed, r, 0, StreamPurpose::burst);
                o = run_burst_phase(o, problem, burst_rng);
            }
            report.records.push_back(record_of(r, o, bound));
        }
    }
    aggregate(report, schemes);
    return report;
}

UncertaintyComparison run_uncertainty_comparison(const ScenarioConfig& config, std::uint64_t slot) {
    validate(config);
    UncertaintyComparison c;
    c.problem = generate_scenario(config, slot);
    Rng real_rng = Rng::substream(config.seed, slot, 0, StreamPurpose::realization);
    c.realized = realize_demands(real_rng, c.problem, config.relative_sigma);
    c.evm = run_slot(Scheme::itf, c.problem, c.realized);
    c.ccp = run_slot(Scheme::itf_ccp, c.problem, c.realized);
    if (config.burst) {
        Rng burst_rng = Rng::substream(config.seed, slot, 0, StreamPurpose::burst);
        c.ccp = run_burst_phase(c.ccp, c.problem, burst_rng);
    }
    return c;
}

SlotOutcome run_uncertainty_experiment(const ScenarioConfig& config, Scheme method, std::uint64_t slot) {
    if (method != Scheme::itf && method != Scheme::itf_ccp)
        throw Error(ErrorCode::invalid_input, "run_uncertainty_experiment: method must be itf or itf-ccp");
    UncertaintyComparison c = run_uncertainty_comparison(config, slot);
    return method == Scheme::itf ? std::move(c.evm) : std::move(c.ccp);
}

ExperimentReport run_uncertainty_study(const ScenarioConfig& config, std::span<const Scheme> methods) {
    validate(config);
    if (config.rounds < 1) throw Error(ErrorCode::invalid_input, "run_uncertainty_study: rounds must be >= 1");
    for (Scheme m : methods)
        if (m != Scheme::itf && m != Scheme::itf_ccp)
            throw Error(ErrorCode::invalid_input, "run_uncertainty_study: methods must be itf or itf-ccp");

    ExperimentReport report;
    report.mode = SimMode::uncertainty;
    report.seed = config.seed;
    report.rounds = config.rounds;
    report.n_users = config.n_users;

    UncertaintyReport u;
    u.methods.assign(methods.begin(), methods.end());
    u.first_slot_count.assign(methods.size(), 0);
    u.first_slot_max_ratio.assign(methods.size(), 0.0);
    std::vector<std::vector<double>> rates(methods.size());
    const double n = static_cast<double>(std::max<std::size_t>(config.n_users, 1));

    for (std::size_t r = 0; r < config.rounds; ++r) {
        const UncertaintyComparison c = run_uncertainty_comparison(config, r);
        const double bound = welfare_bound(contributions_of(c.problem), costs_of(c.problem), c.problem.qos);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const SlotOutcome& o = methods[m] == Scheme::itf ? c.evm : c.ccp;
            if (r == 0) {
                u.first_slot_count[m] = o.over_provision_count;
                u.first_slot_max_ratio[m] = o.max_over_provision_ratio;
            }
            rates[m].push_back(static_cast<double>(o.over_provision_count) / n);
            report.records.push_back(record_of(r, o, bound));
        }
    }
    for (auto& v : rates) u.rate.push_back(summarize(v));
    report.uncertainty = std::move(u);
    aggregate(report, methods);
    return report;
}

MicroReport run_micro_study(const PopulationSpec& population, const ScenarioConfig& config,
                            std::span<const Scheme> schemes) {
    MicroReport rep;
    rep.population = population.name;
    rep.problem = population_problem(population, config);
    for (std::size_t i = 0; i < rep.problem.size(); ++i)
        rep.labels.push_back(i < population.named.size() ? population.named[i].label : population.normal.label);

    const RealizedDemand realized{demands_of(rep.problem)};
    for (Scheme s : schemes) {
        const SlotOutcome o = run_slot(s, rep.problem, realized);
        MicroSchemeResult res;
        res.scheme = s;
        res.quota = o.allocation.quotas;
        res.utility = o.utilities.values;
        res.welfare = o.welfare;
        res.jain = o.jain;
        res.quota_over_demand.resize(res.quota.size());
        for (std::size_t i = 0; i < res.quota.size(); ++i) {
            const double d = rep.problem.users[i].demand;
            res.quota_over_demand[i] = d > 0.0 ? res.quota[i] / d : 0.0;
        }
        rep.schemes.push_back(std::move(res));
    }
    return rep;
}

ExperimentReport run_experiment(const ScenarioConfig& config, std::span<const Scheme> schemes) {
    std::vector<Scheme> chosen(schemes.begin(), schemes.end());
    switch (config.mode) {
        case SimMode::macro:
            if (chosen.empty()) chosen = comparison_schemes();
            return run_macro_experiment(config, chosen);
        case SimMode::uncertainty:
            if (chosen.empty()) chosen = {Scheme::itf, Scheme::itf_ccp};
            return run_uncertainty_study(config, chosen);
        case SimMode::micro: {
            if (chosen.empty()) chosen = {Scheme::ea, Scheme::da, Scheme::idf, Scheme::itf};
            const PopulationSpec pop = config.population.value_or(unwelcome_users_population());
            ExperimentReport report;
            report.mode = SimMode::micro;
            report.seed = config.seed;
            report.rounds = 1;
            report.micro = run_micro_study(pop, config, chosen);
            report.n_users = report.micro->problem.size();
            const auto& p = report.micro->problem;
            const double bound = welfare_bound(contributions_of(p), costs_of(p), p.qos);
            for (const auto& res : report.micro->schemes) {
                const Allocation a{res.quota};
                report.records.push_back({0, res.scheme, res.welfare, res.jain, 0,
                                          std::max(0.0, p.q_total - a.total()),
                                          bound > 0.0 ? res.welfare / bound : 0.0});
            }
            aggregate(report, chosen);
            return report;
        }
    }
    throw Error(ErrorCode::invalid_input, "run_experiment: unknown mode");
}

}  // namespace psq
