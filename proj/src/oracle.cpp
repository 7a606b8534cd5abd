#include "psq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psq/random.hpp"
#include "psq/simd/kernels.hpp"

namespace psq::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool raised(double after, double before) { return after > before + 1e-9 * std::max(1.0, std::abs(before)); }
bool lowered(double after, double before) { return after < before - 1e-9 * std::max(1.0, std::abs(before)); }
bool at_most(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

double objective(const std::vector<double>& q, const AllocationProblem& problem) {
    double s = 0.0;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const auto& u = problem.users[i];
        if (!(u.demand > 0.0)) continue;
        const double c = std::max(u.cost, kMinCost);
        s += u.psi * std::log1p(problem.qos * q[i] / (c * u.demand));
    }
    return s;
}

LevelSolution waterfill_bisection(const AllocationProblem& problem) {
    validate(problem);
    if (problem.total_demand() <= problem.q_total)
        throw Error(ErrorCode::not_in_contention, "waterfill_bisection: sum(Q) <= Q_tot");

    std::vector<std::size_t> idx;
    std::vector<double> base, cap, area;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const auto& u = problem.users[i];
        if (!(u.psi > 0.0) || !(u.demand > 0.0)) continue;
        idx.push_back(i);
        base.push_back(std::max(u.cost, kMinCost) * u.demand / (u.psi * problem.qos));
        cap.push_back(u.demand);
        area.push_back(u.psi);
    }

    const auto& k = simd::kernels();
    LevelSolution sol;
    sol.allocation.quotas.assign(problem.size(), 0.0);
    if (idx.empty()) return sol;

    double lo = kInf;
    double hi = -kInf;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        lo = std::min(lo, base[j]);
        hi = std::max(hi, base[j] + cap[j] / area[j]);
    }
    double level = hi;
    for (std::size_t it = 0; it < 2000; ++it) {
        ++sol.iterations;
        const double mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi)) break;
        const double v = k.fill_volume(mid, base, cap, area);
        level = mid;
        if (std::abs(v - problem.q_total) < 1e-10) break;
        if (v < problem.q_total)
            lo = mid;
        else
            hi = mid;
    }
    std::vector<double> filled(idx.size());
    k.fill_at_level(level, base, cap, area, filled);
    for (std::size_t j = 0; j < idx.size(); ++j) sol.allocation.quotas[idx[j]] = filled[j];
    sol.level = level;
    return sol;
}

GridSolution grid_welfare_max(const AllocationProblem& problem, double step) {
    validate(problem);
    const std::size_t n = problem.size();
    if (n > 3) throw Error(ErrorCode::instance_too_large, "grid_welfare_max: N > 3");
    if (!(step > 0.0)) throw Error(ErrorCode::invalid_input, "grid_welfare_max: step must be > 0");

    std::vector<std::vector<double>> axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cap = problem.users[i].demand;
        for (std::size_t m = 0;; ++m) {
            const double v = static_cast<double>(m) * step;
            if (v >= cap) {
                axis[i].push_back(cap);
                break;
            }
            axis[i].push_back(v);
        }
    }

    const double budget = problem.q_total + 1e-12 * std::max(1.0, problem.q_total);
    GridSolution best;
    best.welfare = -kInf;
    std::vector<std::size_t> pos(n, 0);
    std::vector<double> q(n, 0.0);
    while (true) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = axis[i][pos[i]];
            sum += q[i];
        }
        if (sum <= budget) {
            ++best.points;
            const double w = objective(q, problem);
            if (w > best.welfare) {
                best.welfare = w;
                best.allocation.quotas = q;
            }
        }
        std::size_t d = 0;
        while (d < n && ++pos[d] == axis[d].size()) pos[d++] = 0;
        if (d == n) break;
    }
    return best;
}

std::vector<double> project_box_budget(const std::vector<double>& y, const std::vector<double>& upper,
                                       double total) {
    const std::size_t n = y.size();
    std::vector<double> x(n);
    auto shifted = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::clamp(y[i] - lambda, 0.0, upper[i]);
            s += x[i];
        }
        return s;
    };
    if (shifted(0.0) <= total) return x;

    // The multiplier of the budget constraint: sum clamp(y - lambda) = total.
    double lo = 0.0;
    double hi = 0.0;
    for (double e : y) hi = std::max(hi, e);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = shifted(mid);
        if (std::abs(s - total) < 1e-10) break;
        if (s > total)
            lo = mid;
        else
            hi = mid;
    }
    double s = 0.0;
    for (double e : x) s += e;
    if (s > total) {
        const double scale = total / s;
        for (double& e : x) e *= scale;
    }
    return x;
}

AscentSolution projected_ascent_welfare(const AllocationProblem& problem, std::size_t iterations,
                                        double tol) {
    validate(problem);
    const std::size_t n = problem.size();
    for (const auto& u : problem.users)
        if (!(u.cost > 0.0)) throw Error(ErrorCode::zero_cost, "projected_ascent_welfare: c_i must be > 0");

    std::vector<double> upper(n), weight(n), cost(n), demand(n);
    for (std::size_t i = 0; i < n; ++i) {
        upper[i] = problem.users[i].demand;
        weight[i] = problem.users[i].demand > 0.0 ? problem.users[i].psi : 0.0;
        cost[i] = problem.users[i].cost;
        // Zero-demand users carry no utility; keep their denominators positive.
        demand[i] = problem.users[i].demand > 0.0 ? problem.users[i].demand : 1.0;
    }

    AscentSolution sol;
    const double total_demand = problem.total_demand();
    if (total_demand <= problem.q_total) {
        sol.allocation.quotas = upper;
        sol.welfare = objective(upper, problem);
        sol.converged = true;
        return sol;
    }

    const auto& k = simd::kernels();
    std::vector<double> q(n);
    const double scale = problem.q_total / total_demand;
    for (std::size_t i = 0; i < n; ++i) q[i] = upper[i] * scale;
    double f = objective(q, problem);

    std::vector<double> grad(n), trial(n), unbounded(n, kInf);
    for (std::size_t it = 0; it < iterations; ++it) {
        ++sol.iterations;
        k.log_utility_gradient(q, weight, cost, demand, problem.qos, grad);
        double t = 1.0;
        double f_new = f;
        bool moved = false;
        for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
            trial = q;
            k.axpy_clamp(t, grad, unbounded, trial);
            trial = project_box_budget(trial, upper, problem.q_total);
            f_new = objective(trial, problem);
            if (f_new > f) {
                moved = true;
                break;
            }
        }
        if (!moved) {
            sol.converged = true;
            break;
        }
        const double improvement = f_new - f;
        q.swap(trial);
        f = f_new;
        if (improvement < tol) {
            sol.converged = true;
            break;
        }
    }
    sol.allocation.quotas = q;
    sol.welfare = f;
    return sol;
}

MaxMinReport maxmin_transfer_search(const Allocation& allocation, const AllocationProblem& problem,
                                    double epsilon, std::size_t trials, std::uint64_t seed,
                                    std::size_t max_reported) {
    validate(problem);
    const std::size_t n = problem.size();
    if (allocation.size() != n) throw Error(ErrorCode::invalid_input, "maxmin_transfer_search: size mismatch");

    MaxMinReport report;
    std::vector<std::size_t> eligible;
    std::vector<double> weight(n, 0.0), x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = problem.users[i].demand * problem.users[i].psi;
        if (weight[i] > 0.0) {
            eligible.push_back(i);
            x[i] = allocation.quotas[i] / weight[i];
        }
    }
    report.trials = trials;
    if (eligible.size() < 1) return report;

    const auto& q = allocation.quotas;
    const double slack = problem.q_total - allocation.total();
    Rng rng(derive_seed(seed, 0, 0, StreamPurpose::oracle));
    auto pick = [&]() { return eligible[static_cast<std::size_t>(rng.next_unit() * eligible.size())]; };
    auto record = [&](std::size_t i, double after, bool random_point) {
        if (report.violations.size() < max_reported)
            report.violations.push_back({i, x[i], after, random_point});
    };

    std::vector<double> alt(n), x_alt(n);
    for (std::size_t t = 0; t < trials; ++t) {
        const double kind = rng.next_unit();
        if (kind < 0.8) {
            // Pairwise transfer j -> i, or from unused quota when there is slack.
            const std::size_t i = pick();
            const bool from_slack = slack > kFeasibilityTolerance && rng.next_unit() < 0.25;
            const std::size_t j = from_slack ? i : pick();
            if (!from_slack && i == j) continue;
            const double headroom = problem.users[i].demand - q[i];
            const double available = from_slack ? slack : q[j];
            const double d = std::min({epsilon * (0.5 + 0.5 * rng.next_unit()), headroom, available});
            if (!(d > 0.0)) continue;
            ++report.alternatives;
            const double xi_after = (q[i] + d) / weight[i];
            if (!raised(xi_after, x[i])) continue;
            if (from_slack) {
                record(i, xi_after, false);
                continue;
            }
            const double xj_after = (q[j] - d) / weight[j];
            const bool compensated = lowered(xj_after, x[j]) && at_most(x[j], x[i]);
            if (!compensated) record(i, xi_after, false);
        } else {
            // Random feasible perturbation of the whole vector.
            double sum = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double noise = epsilon * (2.0 * rng.next_unit() - 1.0);
                alt[m] = std::clamp(q[m] + noise, 0.0, std::max(problem.users[m].demand, q[m]));
                sum += alt[m];
            }
            if (sum > problem.q_total && sum > 0.0) {
                const double s = problem.q_total / sum;
                for (double& v : alt) v *= s;
            }
            ++report.alternatives;
            for (std::size_t m : eligible) x_alt[m] = alt[m] / weight[m];
            for (std::size_t i : eligible) {
                if (!raised(x_alt[i], x[i])) continue;
                bool compensated = false;
                for (std::size_t m : eligible) {
                    if (lowered(x_alt[m], x[m]) && at_most(x[m], x[i])) {
                        compensated = true;
                        break;
                    }
                }
                if (!compensated) {
                    record(i, x_alt[i], true);
                    break;
                }
            }
        }
    }
    return report;
}

}  // namespace psq::oracle
