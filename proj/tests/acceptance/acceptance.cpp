// One pass/fail line per acceptance criterion; exits 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "psq/baseline.hpp"
#include "psq/game.hpp"
#include "psq/idf.hpp"
#include "psq/itf.hpp"
#include "psq/metrics.hpp"
#include "psq/normal.hpp"
#include "psq/oracle.hpp"
#include "psq/scenario.hpp"
#include "psq/sim.hpp"
#include "psq/verify.hpp"

using namespace psq;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ne_optimality() {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = macro_config(1);
    const auto grid = default_deviation_grid();
    double worst_rel = 0.0, worst_gain = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const AllocationProblem p = generate_scenario(cfg, r);
        const GameContext ctx = game_context(p);
        const StrategyProfile star = nash_demands(ctx);
        const AllocationProblem declared = declared_problem(ctx, star);
        const double w = welfare(allocate_itf(declared), declared);
        const double bound = welfare_bound(ctx.psi, ctx.cost, ctx.qos);
        worst_rel = std::max(worst_rel, std::abs(w - bound) / std::abs(bound));
        for (std::size_t i = 0; i < ctx.size(); ++i) worst_gain = std::max(worst_gain, deviation_sweep(i, star, ctx, grid));
    }
    const double secs = seconds_since(t0);
    report(1, worst_rel <= 1e-10 && worst_gain <= 1e-9 && secs < 60.0, "NE welfare equals bound, no profitable deviation",
           fmt("max rel gap %.3g, max gain %.3g, %.1f s", worst_rel, worst_gain, secs));
}

struct MacroRatios {
    std::vector<double> itf_over_ne, ccp_over_ne, jain_idf;
    std::size_t idf_fairest = 0;
    double seconds = 0.0;
};

MacroRatios macro() {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = macro_config(1);
    const auto schemes = comparison_schemes();
    const ExperimentReport rep = run_macro_experiment(cfg, schemes);
    MacroRatios m;
    m.seconds = seconds_since(t0);
    for (std::size_t r = 0; r < cfg.rounds; ++r) {
        auto at = [&](Scheme s) -> const RoundRecord& {
            return *std::find_if(rep.records.begin(), rep.records.end(),
                                 [&](const RoundRecord& x) { return x.round == r && x.scheme == s; });
        };
        const double ne = at(Scheme::ne).welfare;
        m.itf_over_ne.push_back(at(Scheme::itf).welfare / ne);
        m.ccp_over_ne.push_back(at(Scheme::itf_ccp).welfare / ne);
        const double j = at(Scheme::idf).jain;
        m.jain_idf.push_back(j);
        bool fairest = true;
        for (Scheme s : {Scheme::ea, Scheme::da, Scheme::itf, Scheme::ne, Scheme::itf_ccp})
            fairest = fairest && j > at(s).jain;
        m.idf_fairest += fairest;
    }
    return m;
}

void macro_criteria() {
    const MacroRatios m = macro();
    const double itf = summarize(m.itf_over_ne).mean;
    report(2, std::abs(itf - 0.94) <= 0.03 && m.seconds < 60.0, "mean ITF/NE welfare ratio 0.94 +- 0.03",
           fmt("%.4f, %.2f s", itf, m.seconds));
    const double ccp = summarize(m.ccp_over_ne).mean;
    report(3, std::abs(ccp - 0.852) <= 0.05, "mean ITF-CCP/NE welfare ratio 0.852 +- 0.05", fmt("%.4f", ccp));
    const double jain = summarize(m.jain_idf).mean;
    report(4, std::abs(jain - 0.92) <= 0.04 && m.idf_fairest >= 95,
           "mean Jain(IDF) 0.92 +- 0.04 and IDF fairest in >= 95 of 100 rounds",
           fmt("mean %.4f, fairest in %.0f rounds", jain, static_cast<double>(m.idf_fairest)));
}

void over_provisioning() {
    const ScenarioConfig cfg = uncertainty_config(1);
    const UncertaintyComparison first = run_uncertainty_comparison(cfg, 0);
    const std::vector<Scheme> methods{Scheme::itf_ccp};
    const ExperimentReport study = run_uncertainty_study(cfg, methods);
    const double rate = study.uncertainty->rate[0].mean;
    const std::size_t evm = first.evm.over_provision_count, ccp = first.ccp.over_provision_count;
    report(5, evm >= 35 && evm <= 55 && ccp <= 11 && rate <= 0.06,
           "EVM count in [35, 55], CCP count in [0, 11], mean CCP rate <= 0.06",
           fmt("EVM %.0f, CCP %.0f, rate %.4f", static_cast<double>(evm), static_cast<double>(ccp), rate));
}

void micro_study() {
    const std::vector<Scheme> s{Scheme::ea, Scheme::da, Scheme::idf, Scheme::itf};
    const MicroReport rep = run_micro_study(unwelcome_users_population(), macro_config(1), s);
    const auto& ea = rep.schemes[0];
    const auto& da = rep.schemes[1];
    const auto& idf = rep.schemes[2];
    const auto& itf = rep.schemes[3];
    const auto label = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(rep.labels.begin(), rep.labels.end(), name) - rep.labels.begin());
    };
    const std::size_t low = label("low-contribution");
    const std::size_t normal = label("normal");
    bool ok = std::abs(idf.quota_over_demand[low] - 0.3769) <= 0.002;
    double idf_other = 0.0, itf_normal = 0.0;
    for (std::size_t i = 0; i < rep.problem.size(); ++i) {
        if (i == low) continue;
        ok = ok && std::abs(idf.quota_over_demand[i] - 0.7537) <= 0.002;
        idf_other = std::max(idf_other, std::abs(idf.quota_over_demand[i] - 0.7537));
    }
    for (std::size_t i = 0; i < normal; ++i) ok = ok && itf.quota[i] == 0.0;
    for (std::size_t i = normal; i < rep.problem.size(); ++i) {
        ok = ok && std::abs(itf.quota_over_demand[i] - 0.781) <= 0.001;
        itf_normal = std::max(itf_normal, std::abs(itf.quota_over_demand[i] - 0.781));
    }
    ok = ok && ea.quota[low] == ea.quota[normal] && da.quota[low] == da.quota[normal];
    report(6, ok, "micro study closed forms",
           fmt("IDF low %.4f, IDF others max dev %.2g, ITF normals max dev %.2g", idf.quota_over_demand[low], idf_other,
               itf_normal));
}

CheckResult find_check(const SuiteResult& r, const std::string& name) {
    return *std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
}

SuiteResult oracle_suite() {
    SuiteOptions opt;
    opt.instances = 1000;
    opt.maxmin_trials = 0;
    return run_oracle_suite(opt);
}

void oracle_equivalence(const SuiteResult& r) {
    auto get = [&](const std::string& name) { return find_check(r, name); };
    const auto b = get("itf-vs-bisection"), g = get("itf-vs-grid"), a = get("itf-vs-ascent");
    report(7, b.passed() && g.passed() && a.passed() && b.checks == 1000,
           "ITF matches bisection (< 1e-8), grid and projected ascent (1e-6)",
           fmt("bisection %.3g, grid shortfall %.3g, ascent %.3g", b.worst, g.worst, a.worst));
}

void complexity(const SuiteResult& r) {
    auto get = [&](const std::string& name) { return find_check(r, name); };
    const auto it = get("iteration-bound"), lit = get("literal-vs-sweep");
    report(10, it.passed() && lit.passed(), "iterations <= 2N-1, literal and sweep fills agree to 1e-12",
           fmt("max iterations - (2N-1) = %.0f, max |dq| %.3g", it.worst, lit.worst));
}

void ordering_property() {
    Rng rng(2024);
    std::size_t pairs = 0, premises = 0, violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const AllocationProblem p = random_instance(rng, 2 + t % 99);
        const auto u = utilities(allocate_itf(p), p).values;
        for (int k = 0; k < 100; ++k) {
            const std::size_t i = static_cast<std::size_t>(rng.next_unit() * p.size());
            const std::size_t j = static_cast<std::size_t>(rng.next_unit() * p.size());
            const UserProfile& a = p.users[i];
            const UserProfile& b = p.users[j];
            ++pairs;
            const bool thm = a.psi / (a.cost * a.demand) >= b.psi / (b.cost * b.demand) && a.cost <= b.cost;
            const bool cor = a.psi / a.demand >= b.psi / b.demand && a.cost <= b.cost;
            if (!thm && !cor) continue;
            ++premises;
            if (u[i] < u[j] - 1e-12) ++violations;
        }
    }
    report(8, violations == 0 && pairs == 100000, "utility ordering over 1e5 pairs from 1e3 ITF allocations",
           fmt("%.0f violations, %.0f pairs met a premise", static_cast<double>(violations), static_cast<double>(premises)));
}

void maxmin() {
    Rng rng(77);
    std::size_t idf_hits = 0, ea_hits = 0;
    const std::size_t instances = 100, trials = 10000;
    for (std::size_t k = 0; k < instances; ++k) {
        const AllocationProblem p = random_instance(rng, 2 + k % 19);
        const double eps = 0.01 * p.q_total / static_cast<double>(p.size());
        idf_hits += !oracle::maxmin_transfer_search(allocate_idf(p), p, eps, trials, 1000 + k).empty();
        if (k < 20) ea_hits += !oracle::maxmin_transfer_search(allocate_ea(p), p, eps, 1000, 5000 + k).empty();
    }
    report(9, idf_hits == 0 && ea_hits == 20, "no max-min improvement on IDF, EA improvable on every sanity instance",
           fmt("IDF instances with violations %.0f of 100, EA %.0f of 20", static_cast<double>(idf_hits),
               static_cast<double>(ea_hits)));
}

void probit_accuracy() {
    const double ps[] = {1e-4, 0.025, 0.05, 0.5, 0.95};
    const double refs[] = {-3.7190164854556804, -1.9599639845400540, -1.6448536269514722, 0.0, 1.6448536269514722};
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(probit(ps[k]) - refs[k]));
    const double r05 = std::round(probit(0.05) * 100.0) / 100.0;
    const double r025 = std::round(probit(0.025) * 100.0) / 100.0;
    report(11, worst < 1e-8 && r05 == -1.65 && r025 == -1.96,
           "probit within 1e-8 of references, rounds to -1.65 and -1.96",
           fmt("max error %.3g, rounded %.2f and %.2f", worst, r05, r025));
}

}  // namespace

int main() {
    ne_optimality();
    macro_criteria();
    over_provisioning();
    micro_study();
    const SuiteResult suite = oracle_suite();
    oracle_equivalence(suite);
    ordering_property();
    maxmin();
    complexity(suite);
    probit_accuracy();
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
