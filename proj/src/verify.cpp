#include "psq/verify.hpp"

#include <algorithm>
#include <cmath>

#include "psq/game.hpp"
#include "psq/idf.hpp"
#include "psq/itf.hpp"
#include "psq/metrics.hpp"
#include "psq/oracle.hpp"

namespace psq {

namespace {

std::size_t draw_size(Rng& rng, std::size_t max_n) {
    return 1 + static_cast<std::size_t>(rng.next_unit() * static_cast<double>(max_n));
}

void note(CheckResult& c, double residual, bool failed) {
    ++c.checks;
    c.worst = std::max(c.worst, residual);
    if (failed) ++c.failures;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

AllocationProblem random_instance(Rng& rng, std::size_t n) {
    AllocationProblem p;
    p.users.resize(n);
    for (auto& u : p.users) {
        u.demand = sample_uniform(rng, 0.05, 1.0);
        u.psi = sample_uniform(rng, 0.05, 1.0);
        u.cost = sample_uniform(rng, 0.05, 3.0);
    }
    p.qos = sample_uniform(rng, 0.2, 2.0);
    p.q_total = sample_uniform(rng, 0.3, 0.9) * p.total_demand();
    return p;
}

bool SuiteResult::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

SuiteResult run_oracle_suite(const SuiteOptions& options) {
    CheckResult bisect{"itf-vs-bisection", 0, 0, 0.0, 1e-8};
    CheckResult grid{"itf-vs-grid", 0, 0, 0.0, 1e-12};
    CheckResult ascent{"itf-vs-ascent", 0, 0, 0.0, 1e-6};
    CheckResult literal{"literal-vs-sweep", 0, 0, 0.0, 1e-12};
    CheckResult iters{"iteration-bound", 0, 0, 0.0, 0.0};
    CheckResult maxmin{"idf-maxmin", 0, 0, 0.0, 0.0};
    CheckResult ne{"ne-optimality", 0, 0, 0.0, 1e-9};

    auto itf = [&](const AllocationProblem& p, const ItfOptions& o = {}) {
        Allocation a = allocate_itf(p, o);
        if (options.itf_hook) options.itf_hook(a, p);
        return a;
    };

    for (std::size_t k = 0; k < options.instances; ++k) {
        Rng rng = Rng::substream(options.seed, k, 0, StreamPurpose::oracle);

        {
            const AllocationProblem p = random_instance(rng, draw_size(rng, 50));
            const Allocation a = itf(p);
            const auto ref = oracle::waterfill_bisection(p);
            const double d = max_abs_diff(a.quotas, ref.allocation.quotas);
            note(bisect, d, !(d < bisect.tolerance));

            FillTrace trace;
            const Allocation lit = itf(p, ItfOptions{FillMode::literal, &trace});
            const double dl = max_abs_diff(a.quotas, lit.quotas);
            note(literal, dl, !(dl <= literal.tolerance));
            const double bound = 2.0 * static_cast<double>(p.size()) - 1.0;
            note(iters, static_cast<double>(trace.iterations) - bound,
                 static_cast<double>(trace.iterations) > bound);
        }
        {
            const AllocationProblem p = random_instance(rng, draw_size(rng, 3));
            const Allocation a = itf(p);
            const auto g = oracle::grid_welfare_max(p, 0.05 * p.q_total);
            const double w = oracle::objective(a.quotas, p);
            const double shortfall = g.welfare - w;
            const bool feasible = check_feasibility(a, p).ok(true);
            note(grid, std::max(0.0, shortfall), shortfall > grid.tolerance || !feasible);
        }
        {
            const AllocationProblem p = random_instance(rng, draw_size(rng, 8));
            const Allocation a = itf(p);
            const auto asc = oracle::projected_ascent_welfare(p, 20000, 1e-14);
            const double d = std::abs(asc.welfare - oracle::objective(a.quotas, p));
            const bool feasible = check_feasibility(a, p).ok(true);
            note(ascent, d, d > ascent.tolerance || !feasible);
        }
        if (options.maxmin_trials > 0) {
            const AllocationProblem p = random_instance(rng, draw_size(rng, 20));
            const Allocation a = allocate_idf(p);
            const auto rep = oracle::maxmin_transfer_search(a, p, 0.01 * p.q_total / p.size(),
                                                            options.maxmin_trials, options.seed + k);
            note(maxmin, static_cast<double>(rep.violations.size()), !rep.empty());
        }
        {
            const AllocationProblem p = random_instance(rng, draw_size(rng, 20));
            const GameContext ctx = game_context(p);
            const StrategyProfile star = nash_demands(ctx);
            const AllocationProblem declared = declared_problem(ctx, star);
            const double w = welfare(itf(declared), declared);
            const double bound = welfare_bound(ctx.psi, ctx.cost, ctx.qos);
            double worst = std::abs(w - bound) / std::max(1.0, std::abs(bound));
            const auto grid_m = default_deviation_grid();
            for (std::size_t i = 0; i < ctx.size(); ++i)
                worst = std::max(worst, deviation_sweep(i, star, ctx, grid_m));
            note(ne, worst, worst > ne.tolerance);
        }
    }
    return SuiteResult{{bisect, grid, ascent, literal, iters, maxmin, ne}};
}

}  // namespace psq
