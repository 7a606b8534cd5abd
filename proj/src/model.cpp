#include "psq/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace psq {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_bounds: return "invalid-bounds";
    case ErrorCode::all_zero_contribution: return "all-zero-contribution";
    case ErrorCode::zero_cost: return "zero-cost";
    case ErrorCode::not_in_contention: return "not-in-contention";
    case ErrorCode::instance_too_large: return "instance-too-large";
    case ErrorCode::out_of_range: return "out-of-range";
    }
    return "unknown";
}

bool is_input_error(ErrorCode code) {
    return code == ErrorCode::invalid_input || code == ErrorCode::invalid_bounds;
}

double AllocationProblem::total_demand() const {
    double s = 0.0;
    for (const auto& u : users) s += u.demand;
    return s;
}

double AllocationProblem::total_contribution() const {
    double s = 0.0;
    for (const auto& u : users) s += u.psi;
    return s;
}

double Allocation::total() const {
    return std::accumulate(quotas.begin(), quotas.end(), 0.0);
}

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::invalid_input, msg);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void validate(const UserProfile& user, std::size_t index) {
    auto where = [&](const char* field) {
        std::ostringstream os;
        os << "user " << index << ": " << field;
        return os.str();
    };
    if (!finite_nonneg(user.psi)) fail(where("psi must be finite and >= 0"));
    if (!finite_nonneg(user.cost)) fail(where("cost must be finite and >= 0"));
    if (!finite_nonneg(user.demand)) fail(where("demand must be finite and >= 0"));
    if (!finite_nonneg(user.sigma)) fail(where("sigma must be finite and >= 0"));
    if (!(user.alpha > 0.0 && user.alpha < 1.0)) fail(where("alpha must lie in (0, 1)"));
}

void validate(const AllocationProblem& problem) {
    if (problem.users.empty()) fail("problem has no users");
    if (!finite_nonneg(problem.q_total)) fail("q_total must be finite and >= 0");
    if (!(std::isfinite(problem.qos) && problem.qos > 0.0)) fail("qos must be finite and > 0");
    for (std::size_t i = 0; i < problem.users.size(); ++i) validate(problem.users[i], i);
}

FeasibilityReport check_feasibility(const Allocation& allocation, const AllocationProblem& problem,
                                    double tol) {
    FeasibilityReport r;
    double sum = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < allocation.quotas.size(); ++i) {
        const double q = allocation.quotas[i];
        if (!(q >= 0.0)) r.nonnegative = false;
        sum += q;
        if (i < problem.users.size()) worst = std::max(worst, q - problem.users[i].demand);
    }
    r.total_excess = sum - problem.q_total;
    r.demand_excess = worst;
    r.within_total = r.total_excess <= tol;
    r.within_demand = worst <= tol;
    return r;
}

std::vector<double> demands_of(const AllocationProblem& problem) {
    std::vector<double> v(problem.size());
    std::transform(problem.users.begin(), problem.users.end(), v.begin(),
                   [](const UserProfile& u) { return u.demand; });
    return v;
}

std::vector<double> contributions_of(const AllocationProblem& problem) {
    std::vector<double> v(problem.size());
    std::transform(problem.users.begin(), problem.users.end(), v.begin(),
                   [](const UserProfile& u) { return u.psi; });
    return v;
}

std::vector<double> costs_of(const AllocationProblem& problem) {
    std::vector<double> v(problem.size());
    std::transform(problem.users.begin(), problem.users.end(), v.begin(),
                   [](const UserProfile& u) { return u.cost; });
    return v;
}

}  // namespace psq
