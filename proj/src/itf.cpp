#include "psq/itf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace psq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> active_tanks(const TankState& t) {
    std::vector<std::size_t> idx;
    idx.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!t.removed[i] && t.area[i] > 0.0 && t.capacity[i] > 0.0) idx.push_back(i);
    return idx;
}

std::vector<double> sweep_fill(const TankState& t, double volume, FillTrace& trace) {
    std::vector<double> water(t.size(), 0.0);
    const auto active = active_tanks(t);
    if (active.empty()) return water;

    std::vector<std::pair<double, double>> events;  // (level, area change)
    events.reserve(2 * active.size());
    for (std::size_t i : active) {
        events.emplace_back(t.ice[i], t.area[i]);
        events.emplace_back(t.top[i], -t.area[i]);
    }
    std::sort(events.begin(), events.end());

    double level = kInf;
    double remaining = volume;
    double area = 0.0;
    std::size_t open = 0;
    double cur = events.front().first;
    for (const auto& [at, delta] : events) {
        if (open > 0 && area > 0.0) {
            ++trace.iterations;
            const double room = area * (at - cur);
            if (room >= remaining) {
                level = cur + remaining / area;
                break;
            }
            remaining -= room;
        }
        cur = at;
        if (delta > 0.0) {
            ++open;
            area += delta;
        } else {
            --open;
            area = open == 0 ? 0.0 : area + delta;
        }
    }
    trace.level = level;

    for (std::size_t i : active) {
        if (level >= t.top[i])
            water[i] = t.capacity[i];
        else
            water[i] = std::clamp(t.area[i] * (level - t.ice[i]), 0.0, t.capacity[i]);
    }
    return water;
}

std::vector<double> literal_fill(const TankState& t, double volume, FillTrace& trace) {
    std::vector<double> water(t.size(), 0.0);
    const auto active_idx = active_tanks(t);
    std::vector<bool> active(t.size(), false);
    for (std::size_t i : active_idx) active[i] = true;
    std::vector<double> level = t.ice;
    std::vector<std::size_t> bottom;
    bottom.reserve(t.size());

    double remaining = volume;
    double final_level = kInf;
    while (remaining > 0.0) {
        double bot = kInf;
        for (std::size_t i : active_idx)
            if (active[i]) bot = std::min(bot, level[i]);
        if (bot == kInf) break;

        bottom.clear();
        double w = 0.0;
        double cap1 = kInf;
        double cap2 = kInf;
        for (std::size_t i : active_idx) {
            if (!active[i]) continue;
            if (level[i] <= bot + kFeasibilityTolerance) {
                bottom.push_back(i);
                w += t.area[i];
            } else {
                cap1 = std::min(cap1, level[i]);
            }
            cap2 = std::min(cap2, t.top[i]);
        }

        double h = std::max(0.0, std::min(cap1, cap2) - bot);
        bool last = false;
        if (w * h < remaining) {
            remaining -= w * h;
        } else {
            h = remaining / w;
            remaining = 0.0;
            last = true;
        }
        for (std::size_t i : bottom) {
            level[i] += h;
            water[i] += h * t.area[i];
        }
        ++trace.iterations;
        if (last) {
            final_level = bot + h;
            break;
        }

        if (cap2 <= cap1 || cap1 == kInf) {
            for (std::size_t i : active_idx) {
                if (active[i] && t.top[i] <= cap2 + kFeasibilityTolerance) {
                    active[i] = false;
                    water[i] = t.capacity[i];
                }
            }
        }
    }
    trace.level = final_level;
    for (std::size_t i = 0; i < t.size(); ++i) water[i] = std::min(water[i], t.capacity[i]);
    return water;
}

}  // namespace

TankState make_tanks(const AllocationProblem& problem, std::span<const double> caps) {
    const std::size_t n = problem.size();
    TankState t;
    t.ice.resize(n);
    t.top.resize(n);
    t.area.resize(n);
    t.capacity.resize(n);
    t.removed.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = problem.users[i];
        const double cap = std::max(0.0, caps[i]);
        t.area[i] = u.psi;
        t.capacity[i] = cap;
        if (u.psi <= 0.0 || cap <= 0.0) {
            t.removed[i] = true;
            t.ice[i] = kInf;
            t.top[i] = kInf;
            continue;
        }
        const double cost = std::max(u.cost, kMinCost);
        t.ice[i] = cost * u.demand / (u.psi * problem.qos);
        t.top[i] = t.ice[i] + cap / u.psi;
    }
    return t;
}

std::vector<double> fill_tanks(const TankState& tanks, double volume, FillMode mode,
                               FillTrace* trace) {
    FillTrace local;
    FillTrace& tr = trace != nullptr ? *trace : local;
    tr = FillTrace{};
    if (!(volume > 0.0)) {
        tr.level = -kInf;
        return std::vector<double>(tanks.size(), 0.0);
    }
    return mode == FillMode::literal ? literal_fill(tanks, volume, tr) : sweep_fill(tanks, volume, tr);
}

namespace {

Allocation itf_with_caps(const AllocationProblem& problem, const std::vector<double>& caps,
                         const ItfOptions& options) {
    const double total = std::accumulate(caps.begin(), caps.end(), 0.0);
    if (total <= problem.q_total) {
        if (options.trace != nullptr) *options.trace = FillTrace{0, kInf};
        return Allocation{caps};
    }
    const TankState tanks = make_tanks(problem, caps);
    return Allocation{fill_tanks(tanks, problem.q_total, options.mode, options.trace)};
}

}  // namespace

Allocation allocate_itf(const AllocationProblem& problem, const ItfOptions& options) {
    validate(problem);
    return itf_with_caps(problem, demands_of(problem), options);
}

std::vector<double> chance_constrained_caps(const AllocationProblem& problem) {
    std::vector<double> caps(problem.size());
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const auto& u = problem.users[i];
        caps[i] = u.sigma > 0.0 ? std::max(0.0, u.demand + u.sigma * probit(u.alpha)) : u.demand;
    }
    return caps;
}

Allocation allocate_itf_ccp(const AllocationProblem& problem, const ItfOptions& options) {
    validate(problem);
    return itf_with_caps(problem, chance_constrained_caps(problem), options);
}

Allocation allocate_burst(double extra_quota, std::span<const double> consumption_start,
                          const RealizedDemand& realized, const ItfOptions& options) {
    const std::size_t n = consumption_start.size();
    if (realized.values.size() != n)
        throw Error(ErrorCode::invalid_input, "allocate_burst: size mismatch");
    if (!(extra_quota >= 0.0))
        throw Error(ErrorCode::invalid_input, "allocate_burst: extra_quota must be >= 0");

    TankState t;
    t.ice.assign(consumption_start.begin(), consumption_start.end());
    t.area.assign(n, 1.0);
    t.capacity.resize(n);
    t.top.resize(n);
    t.removed.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        t.capacity[i] = std::max(0.0, realized.values[i] - consumption_start[i]);
        t.top[i] = t.ice[i] + t.capacity[i];
        t.removed[i] = !(t.capacity[i] > 0.0);
    }
    return Allocation{fill_tanks(t, extra_quota, options.mode, options.trace)};
}

}  // namespace psq
