#include "psq/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

namespace psq::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::invalid_input, msg); }

void expect_object(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected an object");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(where + ": unknown key '" + key + "'");
    }
}

double number(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where + ": missing '" + key + "'");
    const Json& v = j.at(key);
    if (!v.is_number()) fail(where + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::uint64_t unsigned_or(const Json& j, const char* key, std::uint64_t fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        fail(where + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string string_of(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where + ": missing '" + key + "'");
    if (!j.at(key).is_string()) fail(where + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

Json round_numbers(const Json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) return nullptr;
        return std::strtod(format_number(v).c_str(), nullptr);
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& e : j) out.push_back(round_numbers(e));
        return out;
    }
    if (j.is_object()) {
        Json out = Json::object();
        for (const auto& [k, v] : j.items()) out[k] = round_numbers(v);
        return out;
    }
    return j;
}

DistributionSpec dist_from_json(const Json& j, const std::string& where) {
    expect_object(j, where);
    const std::string kind = string_of(j, "kind", where);
    if (kind == "fixed") {
        reject_unknown(j, {"kind", "value"}, where);
        return dist::Fixed{number(j, "value", where)};
    }
    if (kind == "uniform") {
        reject_unknown(j, {"kind", "a", "b"}, where);
        return dist::Uniform{number(j, "a", where), number(j, "b", where)};
    }
    if (kind == "truncated_normal") {
        reject_unknown(j, {"kind", "mu", "sigma", "lo", "hi"}, where);
        return dist::TruncatedNormal{number(j, "mu", where), number(j, "sigma", where), number(j, "lo", where),
                                     number(j, "hi", where)};
    }
    if (kind == "contribution_linked") {
        reject_unknown(j, {"kind", "mean_factor", "sd_factor", "lo", "hi"}, where);
        return dist::ContributionLinked{number_or(j, "mean_factor", 1.0, where),
                                        number_or(j, "sd_factor", 1.0, where), number(j, "lo", where),
                                        number(j, "hi", where)};
    }
    fail(where + ": unknown distribution kind '" + kind + "'");
}

Json dist_to_json(const DistributionSpec& spec) {
    if (const auto* d = std::get_if<dist::Fixed>(&spec)) return {{"kind", "fixed"}, {"value", d->value}};
    if (const auto* d = std::get_if<dist::Uniform>(&spec)) return {{"kind", "uniform"}, {"a", d->a}, {"b", d->b}};
    if (const auto* d = std::get_if<dist::TruncatedNormal>(&spec))
        return {{"kind", "truncated_normal"}, {"mu", d->mu}, {"sigma", d->sigma}, {"lo", d->lo}, {"hi", d->hi}};
    const auto& d = std::get<dist::ContributionLinked>(spec);
    return {{"kind", "contribution_linked"},
            {"mean_factor", d.mean_factor},
            {"sd_factor", d.sd_factor},
            {"lo", d.lo},
            {"hi", d.hi}};
}

QTotalPolicy q_total_from_json(const Json& j) {
    const std::string where = "q_total";
    expect_object(j, where);
    const std::string kind = string_of(j, "kind", where);
    if (kind == "fixed") {
        reject_unknown(j, {"kind", "value"}, where);
        return qtotal::Fixed{number(j, "value", where)};
    }
    if (kind == "fraction") {
        reject_unknown(j, {"kind", "f"}, where);
        return qtotal::Fraction{number(j, "f", where)};
    }
    if (kind == "fraction_uniform") {
        reject_unknown(j, {"kind", "a", "b"}, where);
        return qtotal::FractionUniform{number(j, "a", where), number(j, "b", where)};
    }
    if (kind == "qos_linked") {
        reject_unknown(j, {"kind", "target_qos", "q_max"}, where);
        return qtotal::QosLinked{number(j, "target_qos", where), number(j, "q_max", where)};
    }
    fail(where + ": unknown kind '" + kind + "'");
}

Json q_total_to_json(const QTotalPolicy& p) {
    if (const auto* d = std::get_if<qtotal::Fixed>(&p)) return {{"kind", "fixed"}, {"value", d->value}};
    if (const auto* d = std::get_if<qtotal::Fraction>(&p)) return {{"kind", "fraction"}, {"f", d->f}};
    if (const auto* d = std::get_if<qtotal::FractionUniform>(&p))
        return {{"kind", "fraction_uniform"}, {"a", d->a}, {"b", d->b}};
    const auto& d = std::get<qtotal::QosLinked>(p);
    return {{"kind", "qos_linked"}, {"target_qos", d.target_qos}, {"q_max", d.q_max}};
}

QosPolicy qos_from_json(const Json& j) {
    const std::string where = "qos";
    expect_object(j, where);
    const std::string kind = string_of(j, "kind", where);
    if (kind == "fixed") {
        reject_unknown(j, {"kind", "value"}, where);
        return qos::Fixed{number(j, "value", where)};
    }
    if (kind == "linear") {
        reject_unknown(j, {"kind", "kappa"}, where);
        return qos::Linear{number(j, "kappa", where)};
    }
    fail(where + ": unknown kind '" + kind + "'");
}

Json qos_to_json(const QosPolicy& p) {
    if (const auto* d = std::get_if<qos::Fixed>(&p)) return {{"kind", "fixed"}, {"value", d->value}};
    return {{"kind", "linear"}, {"kappa", std::get<qos::Linear>(p).kappa}};
}

PopulationMember member_from_json(const Json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j, {"label", "demand", "psi", "cost"}, where);
    PopulationMember m;
    m.label = j.contains("label") ? string_of(j, "label", where) : "user";
    m.demand = number(j, "demand", where);
    m.psi = number(j, "psi", where);
    m.cost = number(j, "cost", where);
    return m;
}

Json member_to_json(const PopulationMember& m) {
    return {{"label", m.label}, {"demand", m.demand}, {"psi", m.psi}, {"cost", m.cost}};
}

PopulationSpec population_from_json(const Json& j) {
    if (j.is_string()) {
        auto p = population_preset(j.get<std::string>());
        if (!p) fail("population: unknown preset '" + j.get<std::string>() + "'");
        return *p;
    }
    const std::string where = "population";
    expect_object(j, where);
    reject_unknown(j, {"name", "named", "normal", "n_users"}, where);
    PopulationSpec p;
    p.name = j.contains("name") ? string_of(j, "name", where) : "custom";
    p.n_users = unsigned_or(j, "n_users", 100, where);
    if (!j.contains("normal")) fail(where + ": missing 'normal'");
    p.normal = member_from_json(j.at("normal"), where + ".normal");
    if (j.contains("named")) {
        if (!j.at("named").is_array()) fail(where + ".named: expected an array");
        for (std::size_t i = 0; i < j.at("named").size(); ++i)
            p.named.push_back(member_from_json(j.at("named")[i], where + ".named[" + std::to_string(i) + "]"));
    }
    return p;
}

Json summary_to_json(const Summary& s) {
    return {{"mean", s.mean}, {"ci95", s.ci95}, {"min", s.min}, {"max", s.max}, {"n", s.n}};
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write '" + path + "'");
    out << contents;
    if (!out) fail("write failed for '" + path + "'");
}

std::string dump(const Json& doc) { return round_numbers(doc).dump(2) + "\n"; }

AllocationProblem problem_from_json(const Json& doc) {
    const std::string where = "problem";
    expect_object(doc, where);
    reject_unknown(doc, {"q_total", "qos", "users"}, where);
    AllocationProblem p;
    p.q_total = number(doc, "q_total", where);
    p.qos = number_or(doc, "qos", 1.0, where);
    if (!doc.contains("users") || !doc.at("users").is_array()) fail(where + ": 'users' must be an array");
    const Json& users = doc.at("users");
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::string w = "users[" + std::to_string(i) + "]";
        const Json& u = users[i];
        expect_object(u, w);
        reject_unknown(u, {"psi", "cost", "demand", "sigma", "alpha"}, w);
        UserProfile up;
        up.psi = number(u, "psi", w);
        up.cost = number(u, "cost", w);
        up.demand = number(u, "demand", w);
        up.sigma = number_or(u, "sigma", 0.0, w);
        up.alpha = number_or(u, "alpha", 0.05, w);
        p.users.push_back(up);
    }
    validate(p);
    return p;
}

Json to_json(const AllocationProblem& problem) {
    Json users = Json::array();
    for (const auto& u : problem.users)
        users.push_back({{"psi", u.psi}, {"cost", u.cost}, {"demand", u.demand}, {"sigma", u.sigma}, {"alpha", u.alpha}});
    return {{"q_total", problem.q_total}, {"qos", problem.qos}, {"users", users}};
}

Json to_json(const Allocation& allocation, const std::string& scheme) {
    Json flags = Json::array();
    if (has_flag(allocation.flags, AllocationFlag::degenerate_demand)) flags.push_back("degenerate_demand");
    return {{"scheme", scheme}, {"quotas", allocation.quotas}, {"total", allocation.total()}, {"flags", flags}};
}

ScenarioConfig config_from_json(const Json& doc) {
    const std::string where = "config";
    expect_object(doc, where);
    reject_unknown(doc,
                   {"preset", "mode", "n_users", "seed", "rounds", "q_total", "qos", "demand", "contribution", "cost",
                    "relative_sigma", "alpha", "burst", "schemes", "population"},
                   where);

    ScenarioConfig c;
    std::string preset = "macro";
    if (doc.contains("preset")) preset = string_of(doc, "preset", where);
    if (doc.contains("mode") && !doc.contains("preset")) preset = string_of(doc, "mode", where);
    if (preset == "macro" || preset == "micro")
        c = macro_config();
    else if (preset == "uncertainty")
        c = uncertainty_config();
    else
        fail(where + ": unknown preset '" + preset + "'");
    if (preset == "micro") c.mode = SimMode::micro;

    if (doc.contains("mode")) {
        auto m = parse_sim_mode(string_of(doc, "mode", where));
        if (!m) fail(where + ".mode: expected macro, uncertainty or micro");
        c.mode = *m;
    }
    c.n_users = unsigned_or(doc, "n_users", c.n_users, where);
    c.seed = unsigned_or(doc, "seed", c.seed, where);
    c.rounds = unsigned_or(doc, "rounds", c.rounds, where);
    if (doc.contains("q_total")) c.q_total = q_total_from_json(doc.at("q_total"));
    if (doc.contains("qos")) c.qos = qos_from_json(doc.at("qos"));
    if (doc.contains("demand")) c.demand = dist_from_json(doc.at("demand"), "demand");
    if (doc.contains("contribution")) c.contribution = dist_from_json(doc.at("contribution"), "contribution");
    if (doc.contains("cost")) c.cost = dist_from_json(doc.at("cost"), "cost");
    c.relative_sigma = number_or(doc, "relative_sigma", c.relative_sigma, where);
    if (doc.contains("alpha")) {
        const Json& a = doc.at("alpha");
        expect_object(a, "alpha");
        reject_unknown(a, {"kind", "alpha0"}, "alpha");
        const std::string kind = a.contains("kind") ? string_of(a, "kind", "alpha") : "uniform";
        if (kind == "uniform")
            c.alpha.kind = AlphaPolicy::Kind::uniform;
        else if (kind == "contribution_scaled")
            c.alpha.kind = AlphaPolicy::Kind::contribution_scaled;
        else
            fail("alpha: unknown kind '" + kind + "'");
        c.alpha.alpha0 = number_or(a, "alpha0", c.alpha.alpha0, "alpha");
    }
    if (doc.contains("burst")) {
        if (!doc.at("burst").is_boolean()) fail(where + ".burst: expected a boolean");
        c.burst = doc.at("burst").get<bool>();
    }
    if (doc.contains("schemes")) {
        const Json& s = doc.at("schemes");
        if (!s.is_array()) fail(where + ".schemes: expected an array");
        for (const auto& e : s) {
            if (!e.is_string() || !parse_scheme(e.get<std::string>()))
                fail(where + ".schemes: unknown scheme " + e.dump());
            c.schemes.push_back(e.get<std::string>());
        }
    }
    if (doc.contains("population")) c.population = population_from_json(doc.at("population"));
    validate(c);
    return c;
}

Json to_json(const ScenarioConfig& c) {
    Json j = {{"mode", to_string(c.mode)},
              {"n_users", c.n_users},
              {"seed", c.seed},
              {"rounds", c.rounds},
              {"q_total", q_total_to_json(c.q_total)},
              {"qos", qos_to_json(c.qos)},
              {"demand", dist_to_json(c.demand)},
              {"contribution", dist_to_json(c.contribution)},
              {"cost", dist_to_json(c.cost)},
              {"relative_sigma", c.relative_sigma},
              {"alpha",
               {{"kind", c.alpha.kind == AlphaPolicy::Kind::uniform ? "uniform" : "contribution_scaled"},
                {"alpha0", c.alpha.alpha0}}},
              {"burst", c.burst},
              {"schemes", c.schemes}};
    if (c.population) {
        Json named = Json::array();
        for (const auto& m : c.population->named) named.push_back(member_to_json(m));
        j["population"] = {{"name", c.population->name},
                           {"n_users", c.population->n_users},
                           {"named", named},
                           {"normal", member_to_json(c.population->normal)}};
    }
    return j;
}

Json to_json(const ExperimentReport& report) {
    Json schemes = Json::array();
    for (const auto& a : report.schemes)
        schemes.push_back({{"scheme", to_string(a.scheme)},
                           {"welfare", summary_to_json(a.welfare)},
                           {"jain", summary_to_json(a.jain)},
                           {"welfare_fraction", summary_to_json(a.welfare_fraction)},
                           {"over_provision", summary_to_json(a.over_provision)}});
    Json j = {{"mode", to_string(report.mode)},
              {"seed", report.seed},
              {"rounds", report.rounds},
              {"n_users", report.n_users},
              {"schemes", schemes}};
    if (report.uncertainty) {
        const auto& u = *report.uncertainty;
        Json methods = Json::array();
        for (std::size_t m = 0; m < u.methods.size(); ++m)
            methods.push_back({{"scheme", to_string(u.methods[m])},
                               {"method", u.methods[m] == Scheme::itf ? "evm" : "ccp"},
                               {"first_slot_over_provision", u.first_slot_count[m]},
                               {"first_slot_max_ratio", u.first_slot_max_ratio[m]},
                               {"over_provision_rate", summary_to_json(u.rate[m])}});
        j["uncertainty"] = {{"methods", methods}};
    }
    if (report.micro) {
        const auto& m = *report.micro;
        Json users = Json::array();
        for (std::size_t i = 0; i < m.problem.size(); ++i) {
            const auto& u = m.problem.users[i];
            users.push_back({{"index", i + 1}, {"label", m.labels[i]}, {"demand", u.demand}, {"psi", u.psi}, {"cost", u.cost}});
        }
        Json results = Json::array();
        for (const auto& r : m.schemes)
            results.push_back({{"scheme", to_string(r.scheme)},
                               {"quota", r.quota},
                               {"quota_over_demand", r.quota_over_demand},
                               {"utility", r.utility},
                               {"welfare", r.welfare},
                               {"jain", r.jain}});
        j["micro"] = {{"population", m.population},
                      {"q_total", m.problem.q_total},
                      {"qos", m.problem.qos},
                      {"users", users},
                      {"schemes", results}};
    }
    return j;
}

std::string records_csv(const ExperimentReport& report) {
    std::string out = "round,scheme,welfare,jain,over_provision_count,q_ext\n";
    for (const auto& r : report.records) {
        out += std::to_string(r.round);
        out += ',';
        out += to_string(r.scheme);
        out += ',';
        out += format_number(r.welfare);
        out += ',';
        out += format_number(r.jain);
        out += ',';
        out += std::to_string(r.over_provision_count);
        out += ',';
        out += format_number(r.q_ext);
        out += '\n';
    }
    return out;
}

}  // namespace psq::io
