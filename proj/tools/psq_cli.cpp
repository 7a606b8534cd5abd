// psq: allocation, simulation, equilibrium and oracle checks from the
// command line. Errors print one line "error:<class>:<code>: <message>" on
// stderr; exit codes are 0 ok, 1 verification failure, 2 input error,
// 3 domain error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psq/game.hpp"
#include "psq/json_io.hpp"
#include "psq/sim.hpp"
#include "psq/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kDomainError = 3;

using psq::io::Json;

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

int fail(const char* cls, const std::string& code, const std::string& message, int status) {
    std::cerr << "error:" << cls << ":" << code << ": " << one_line(message) << "\n";
    return status;
}

int fail(const psq::Error& e) {
    const bool input = psq::is_input_error(e.code());
    return fail(input ? "input" : "domain", psq::to_string(e.code()), e.what(), input ? kInputError : kDomainError);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        psq::io::write_file(path, text);
}

psq::Scheme scheme_or_throw(const std::string& name) {
    const auto s = psq::parse_scheme(name);
    if (!s) throw psq::Error(psq::ErrorCode::invalid_input, "unknown scheme '" + name + "'");
    return *s;
}

struct AllocateArgs {
    std::string scheme = "itf";
    std::string in;
    std::string out;
};

int cmd_allocate(const AllocateArgs& a) {
    const psq::Scheme scheme = scheme_or_throw(a.scheme);
    const psq::AllocationProblem problem = psq::io::problem_from_json(psq::io::read_file(a.in));
    const psq::Allocation alloc = psq::allocate(scheme, problem);
    emit(a.out, psq::io::dump(psq::io::to_json(alloc, psq::to_string(scheme))));
    return kOk;
}

struct SimulateArgs {
    std::string config;
    std::optional<std::string> mode;
    std::vector<std::string> schemes;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> rounds;
    std::optional<std::string> population;
    std::string out;
};

void print_summary(const psq::ExperimentReport& r) {
    std::printf("mode=%s seed=%llu rounds=%zu n=%zu\n", psq::to_string(r.mode).c_str(),
                static_cast<unsigned long long>(r.seed), r.rounds, r.n_users);
    std::printf("%-8s %14s %12s %10s %10s %10s\n", "scheme", "welfare", "+-ci95", "jain", "fraction", "over_prov");
    for (const auto& a : r.schemes)
        std::printf("%-8s %14.6f %12.6f %10.6f %10.6f %10.3f\n", psq::to_string(a.scheme).c_str(), a.welfare.mean,
                    a.welfare.ci95, a.jain.mean, a.welfare_fraction.mean, a.over_provision.mean);
}

int cmd_simulate(const SimulateArgs& a) {
    psq::ScenarioConfig cfg;
    if (!a.config.empty()) {
        cfg = psq::io::config_from_json(psq::io::read_file(a.config));
    } else {
        Json doc = Json::object();
        if (a.mode) doc["mode"] = *a.mode;
        cfg = psq::io::config_from_json(doc);
    }
    if (a.mode) {
        const auto m = psq::parse_sim_mode(*a.mode);
        if (!m) throw psq::Error(psq::ErrorCode::invalid_input, "unknown mode '" + *a.mode + "'");
        cfg.mode = *m;
    }
    if (a.seed) cfg.seed = *a.seed;
    if (a.rounds) cfg.rounds = *a.rounds;
    if (a.population) {
        auto p = psq::population_preset(*a.population);
        if (!p) throw psq::Error(psq::ErrorCode::invalid_input, "unknown population '" + *a.population + "'");
        cfg.population = *p;
    }
    psq::validate(cfg);

    std::vector<psq::Scheme> schemes;
    for (const auto& s : a.schemes.empty() ? cfg.schemes : a.schemes) schemes.push_back(scheme_or_throw(s));
    if (a.method) {
        if (cfg.mode != psq::SimMode::uncertainty)
            throw psq::Error(psq::ErrorCode::invalid_input, "--method needs --mode uncertainty");
        if (*a.method == "evm")
            schemes = {psq::Scheme::itf};
        else if (*a.method == "ccp")
            schemes = {psq::Scheme::itf_ccp};
        else
            throw psq::Error(psq::ErrorCode::invalid_input, "unknown method '" + *a.method + "'");
    }

    const psq::ExperimentReport report = psq::run_experiment(cfg, schemes);

    std::error_code ec;
    std::filesystem::create_directories(a.out, ec);
    if (ec) throw psq::Error(psq::ErrorCode::invalid_input, "cannot create '" + a.out + "': " + ec.message());
    const std::filesystem::path dir(a.out);
    Json doc = psq::io::to_json(report);
    doc["config"] = psq::io::to_json(cfg);
    psq::io::write_file((dir / "report.json").string(), psq::io::dump(doc));
    psq::io::write_file((dir / "rounds.csv").string(), psq::io::records_csv(report));
    print_summary(report);
    return kOk;
}

struct NashArgs {
    std::string in;
    std::string out;
};

int cmd_nash(const NashArgs& a) {
    const psq::AllocationProblem problem = psq::io::problem_from_json(psq::io::read_file(a.in));
    const psq::GameContext ctx = psq::game_context(problem);
    const psq::StrategyProfile star = psq::nash_demands(ctx);
    const psq::NeCheck check = psq::check_ne_conditions(star, ctx, 1e-9);
    const double bound = psq::welfare_bound(ctx.psi, ctx.cost, ctx.qos);
    const auto grid = psq::default_deviation_grid();
    std::vector<double> gains;
    double max_gain = 0.0;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        gains.push_back(psq::deviation_sweep(i, star, ctx, grid));
        max_gain = i == 0 ? gains.back() : std::max(max_gain, gains.back());
    }
    const Json doc = {{"demands", star.demands},
                      {"total_residual", check.total_residual},
                      {"level_spread", check.level_spread},
                      {"satisfied", check.satisfied},
                      {"welfare_bound", bound},
                      {"deviation_gain", gains},
                      {"max_deviation_gain", max_gain}};
    emit(a.out, psq::io::dump(doc));
    return kOk;
}

struct OracleArgs {
    std::size_t instances = 100;
    std::uint64_t seed = 1;
    std::size_t maxmin_trials = 1000;
    bool mutate_itf = false;
};

int cmd_oracle_check(const OracleArgs& a) {
    psq::SuiteOptions opt;
    opt.instances = a.instances;
    opt.seed = a.seed;
    opt.maxmin_trials = a.maxmin_trials;
    if (a.mutate_itf) {
        // Moves a little quota from the largest grant to the smallest.
        opt.itf_hook = [](psq::Allocation& alloc, const psq::AllocationProblem&) {
            if (alloc.quotas.size() < 2) return;
            auto hi = std::max_element(alloc.quotas.begin(), alloc.quotas.end());
            auto lo = std::min_element(alloc.quotas.begin(), alloc.quotas.end());
            const double d = 0.01 * *hi;
            *hi -= d;
            *lo += d;
        };
    }
    const psq::SuiteResult r = psq::run_oracle_suite(opt);
    std::size_t total = 0;
    for (const auto& c : r.checks) {
        total += c.checks;
        std::printf("%-18s %s checks=%zu failures=%zu worst=%s tol=%s\n", c.name.c_str(), c.passed() ? "pass" : "FAIL",
                    c.checks, c.failures, psq::io::format_number(c.worst).c_str(),
                    psq::io::format_number(c.tolerance).c_str());
    }
    std::printf("total checks=%zu result=%s\n", total, r.passed() ? "pass" : "FAIL");
    return r.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Participatory-sensing quota allocation"};
    app.require_subcommand(1);

    AllocateArgs alloc_args;
    auto* allocate = app.add_subcommand("allocate", "Allocate quota for one problem");
    allocate->add_option("--scheme", alloc_args.scheme, "ea, da, pca, idf, itf, ne, itf-ccp");
    allocate->add_option("--in,input", alloc_args.in, "AllocationProblem JSON")->required();
    allocate->add_option("--out", alloc_args.out, "Allocation JSON (stdout when omitted)");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Run an experiment");
    simulate->add_option("--config", sim_args.config, "ScenarioConfig JSON");
    simulate->add_option("--mode", sim_args.mode, "macro, uncertainty, micro");
    simulate->add_option("--scheme", sim_args.schemes, "Scheme to run (repeatable)");
    simulate->add_option("--method", sim_args.method, "evm or ccp (uncertainty mode)");
    simulate->add_option("--seed", sim_args.seed, "Master seed");
    simulate->add_option("--rounds", sim_args.rounds, "Rounds or repetitions");
    simulate->add_option("--population", sim_args.population, "unwelcome or welcome (micro mode)");
    simulate->add_option("--out", sim_args.out, "Output directory")->required();

    NashArgs nash_args;
    auto* nash = app.add_subcommand("nash", "Equilibrium demands and checks");
    nash->add_option("--in,input", nash_args.in, "AllocationProblem JSON")->required();
    nash->add_option("--out", nash_args.out, "Report JSON (stdout when omitted)");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle-check", "Cross-check allocators against reference solvers");
    oracle->add_option("--instances", oracle_args.instances, "Random instances");
    oracle->add_option("--seed", oracle_args.seed, "Master seed");
    oracle->add_option("--maxmin-trials", oracle_args.maxmin_trials, "Max-min search trials per instance");
    oracle->add_flag("--mutate-itf", oracle_args.mutate_itf)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        return fail("input", "usage", e.what(), kInputError);
    }

    try {
        if (*allocate) return cmd_allocate(alloc_args);
        if (*simulate) return cmd_simulate(sim_args);
        if (*nash) return cmd_nash(nash_args);
        if (*oracle) return cmd_oracle_check(oracle_args);
    } catch (const psq::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail("domain", "internal", e.what(), kDomainError);
    }
    return kOk;
}
