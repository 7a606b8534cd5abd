#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("psq_cli_" + std::to_string(::getpid())) / name;
    fs::create_directories(dir);
    return dir;
}

Run run(const std::string& args) {
    const fs::path dir = scratch("io");
    const fs::path out = dir / "stdout", err = dir / "stderr";
    const std::string cmd = std::string(PSQ_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string fixture(const std::string& name) { return std::string(PSQ_FIXTURE_DIR) + "/" + name; }

bool single_error_line(const std::string& err) {
    return err.rfind("error:", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST(Cli, AllocateEqual) {
    const auto r = run("allocate --scheme ea --in " + fixture("ea4.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("\"quotas\": [\n    0.5,\n    0.5,\n    0.5,\n    0.5\n  ]"), std::string::npos) << r.out;
}

TEST(Cli, AllocateIdfToFile) {
    const fs::path out = scratch("alloc") / "idf.json";
    const auto r = run("allocate --scheme idf --in " + fixture("two_users.json") + " --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const std::string doc = slurp(out);
    EXPECT_NE(doc.find("6.66666666667"), std::string::npos) << doc;
    EXPECT_NE(doc.find("3.33333333333"), std::string::npos) << doc;
}

TEST(Cli, MalformedInput) {
    const auto r = run("allocate --scheme itf --in " + fixture("malformed.json"));
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
    EXPECT_EQ(r.err.rfind("error:input:invalid-input:", 0), 0u) << r.err;
    EXPECT_EQ(run("allocate --scheme itf --in " + fixture("bad_schema.json")).status, 2);
    EXPECT_EQ(run("allocate --scheme itf --in /nonexistent.json").status, 2);
    EXPECT_EQ(run("allocate --scheme bogus --in " + fixture("ea4.json")).status, 2);
}

TEST(Cli, UsageErrors) {
    const auto r = run("frobnicate");
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("simulate --mode macro").status, 2);
    EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, DomainError) {
    const auto r = run("nash --in " + fixture("zero_contribution.json"));
    EXPECT_EQ(r.status, 3);
    EXPECT_EQ(r.err.rfind("error:domain:all-zero-contribution:", 0), 0u) << r.err;
    EXPECT_EQ(run("allocate --scheme ne --in " + fixture("zero_contribution.json")).status, 3);
}

TEST(Cli, NashSymmetric) {
    const auto r = run("nash --in " + fixture("symmetric.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("\"demands\": [\n    5.0,\n    5.0\n  ]"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"satisfied\": true"), std::string::npos);
}

TEST(Cli, NashWeighted) {
    const auto r = run("nash --in " + fixture("two_users.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("6.66666666667"), std::string::npos);
    EXPECT_NE(r.out.find("\"welfare_bound\": 2.07944154168"), std::string::npos) << r.out;
    const auto pos = r.out.find("\"max_deviation_gain\": ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LE(std::stod(r.out.substr(pos + 22)), 1e-9);
}

TEST(Cli, SimulateMacro) {
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    const auto r1 = run("simulate --config " + fixture("macro_small.json") + " --out " + a.string());
    const auto r2 = run("simulate --config " + fixture("macro_small.json") + " --out " + b.string());
    ASSERT_EQ(r1.status, 0) << r1.err;
    ASSERT_EQ(r2.status, 0) << r2.err;
    for (const char* s : {"ea ", "da ", "idf ", "itf ", "ne ", "itf-ccp "}) EXPECT_NE(r1.out.find(s), std::string::npos) << s;
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_EQ(slurp(a / "rounds.csv"), slurp(b / "rounds.csv"));
    EXPECT_EQ(r1.out, r2.out);
    const std::string csv = slurp(a / "rounds.csv");
    EXPECT_EQ(csv.rfind("round,scheme,welfare,jain,over_provision_count,q_ext\n", 0), 0u);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    EXPECT_EQ(lines, 1u + 5u * 6u);
}

TEST(Cli, SimulateFlagsOverrideConfig) {
    const fs::path d = scratch("sim_flags");
    const auto r = run("simulate --config " + fixture("macro_small.json") + " --rounds 2 --seed 3 --scheme idf --scheme itf --out " +
                       d.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const std::string doc = slurp(d / "report.json");
    EXPECT_NE(doc.find("\"rounds\": 2"), std::string::npos);
    EXPECT_NE(doc.find("\"seed\": 3"), std::string::npos);
    std::size_t lines = 0;
    for (char c : slurp(d / "rounds.csv")) lines += c == '\n';
    EXPECT_EQ(lines, 1u + 2u * 2u);
}

TEST(Cli, SimulateUncertaintyMethods) {
    const fs::path e = scratch("evm"), c = scratch("ccp");
    const auto evm = run("simulate --mode uncertainty --method evm --rounds 1 --seed 1 --out " + e.string());
    const auto ccp = run("simulate --mode uncertainty --method ccp --rounds 1 --seed 1 --out " + c.string());
    ASSERT_EQ(evm.status, 0) << evm.err;
    ASSERT_EQ(ccp.status, 0) << ccp.err;
    auto count = [](const std::string& csv) {
        const auto line = csv.substr(csv.find('\n') + 1);
        std::stringstream ss(line);
        std::string cell;
        for (int k = 0; k < 5; ++k) std::getline(ss, cell, ',');
        return std::stoul(cell);
    };
    const auto n_evm = count(slurp(e / "rounds.csv"));
    const auto n_ccp = count(slurp(c / "rounds.csv"));
    EXPECT_GE(n_evm, 35u);
    EXPECT_LE(n_evm, 55u);
    EXPECT_LE(n_ccp, 11u);
    EXPECT_EQ(run("simulate --mode macro --method evm --out " + e.string()).status, 2);
    EXPECT_EQ(run("simulate --mode uncertainty --method median --out " + e.string()).status, 2);
}

TEST(Cli, SimulateMicro) {
    const fs::path d = scratch("micro");
    const auto r = run("simulate --config " + fixture("micro_welcome.json") + " --out " + d.string());
    ASSERT_EQ(r.status, 0) << r.err;
    const std::string doc = slurp(d / "report.json");
    EXPECT_NE(doc.find("\"population\": \"welcome\""), std::string::npos);
    EXPECT_NE(doc.find("\"label\": \"high-contribution\""), std::string::npos);
}

TEST(Cli, OracleCheckPasses) {
    const auto r = run("oracle-check --instances 20 --seed 4");
    EXPECT_EQ(r.status, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("result=pass"), std::string::npos);
}

TEST(Cli, OracleCheckCatchesMutation) {
    const auto r = run("oracle-check --instances 5 --mutate-itf");
    EXPECT_EQ(r.status, 1) << r.out;
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, OracleCheckEmpty) {
    const auto r = run("oracle-check --instances 0");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("total checks=0 result=pass"), std::string::npos) << r.out;
}
