#include "dsq/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dsq;
using namespace dsq::cli;

namespace fs = std::filesystem;

namespace {

RunConfig config(const std::string& sub)
{
    RunConfig c;
    c.subcommand = sub;
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(DSQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("dsq_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(Config, Validation)
{
    EXPECT_NO_THROW(validate_config(config("all")));
    EXPECT_THROW(validate_config(config("bogus")), std::invalid_argument);
    RunConfig c = config("all");
    c.format = "xml";
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c = config("all");
    c.lattice = "third";
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c = config("all");
    c.nmax = 3;
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c = config("all");
    c.margin = 40;
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c = config("all");
    c.orders = 5;
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c = config("sweep");
    EXPECT_THROW(validate_config(c), std::invalid_argument);
    c.rm_grid = {1.0};
    c.theta_grid = {0.3};
    c.nmax_grid = {16};
    EXPECT_NO_THROW(validate_config(c));
}

TEST(Run, Sl2Classify)
{
    const Report r = run(config("sl2-classify"));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.results["kind"], "DiscreteBoundedBelow");
    EXPECT_DOUBLE_EQ(r.results["n0"].get<double>(), 0.5);
}

TEST(Run, FiniteDistance)
{
    const Report r = run(config("finite-distance"));
    EXPECT_TRUE(r.pass());
    EXPECT_NEAR(r.results["d"].get<double>(), 0.5, 1e-6);
}

TEST(Run, QuadrupleVerify)
{
    const Report r = run(config("quadruple-verify"));
    EXPECT_TRUE(r.pass());
    EXPECT_GE(r.checks.size(), 25u);
}

TEST(Run, ReportFieldOrder)
{
    const Json j = to_json(run(config("finite-distance")));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"version", "params", "checks", "results", "pass"}));
    EXPECT_EQ(j["version"], 1);
}

TEST(Run, InProcessDeterminism)
{
    const RunConfig c = config("oracle-check");
    EXPECT_EQ(to_json(run(c)).dump(), to_json(run(c)).dump());
}

TEST(Run, ToleranceOverrideFlipsPass)
{
    RunConfig c = config("finite-distance");
    c.tol_overrides["finite.distance"] = -1.0;
    EXPECT_FALSE(run(c).pass());
}

TEST(Csv, HeaderAndQuoting)
{
    const std::string s = to_csv(run(config("finite-distance")).checks);
    EXPECT_EQ(s.substr(0, s.find('\n')), "id,residual,tolerance,pass,margin,notes");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Sweep, SmallTruncationIsAnnotated)
{
    RunConfig c = config("sweep");
    c.rm_grid = {1.0};
    c.theta_grid = {0.3};
    c.nmax_grid = {4, 12};
    const SweepResult r = run_sweep(c);
    ASSERT_EQ(r.json["points"].size(), 2u);
    EXPECT_TRUE(r.json["points"][0]["expected_failure"].get<bool>());
    EXPECT_EQ(r.json["points"][0]["checks"][0]["notes"], "truncation too small");
    EXPECT_FALSE(r.json["points"][1]["expected_failure"].get<bool>());
    EXPECT_TRUE(r.json["points"][1]["pass"].get<bool>());
    EXPECT_TRUE(r.pass);
}

// ---- the binary -------------------------------------------------------------------

TEST(Binary, OutputIsByteIdentical)
{
    const fs::path d = scratch_dir("det");
    ASSERT_EQ(run_cli("all -o " + (d / "a.json").string()), 0);
    ASSERT_EQ(run_cli("all -o " + (d / "b.json").string()), 0);
    const std::string a = slurp(d / "a.json");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(d / "b.json"));
    EXPECT_FALSE(fs::exists(d / "a.json.tmp"));
    const Json j = Json::parse(a);
    EXPECT_TRUE(j["pass"].get<bool>());
    fs::remove_all(d);
}

TEST(Binary, UsageErrorsExitTwo)
{
    EXPECT_EQ(run_cli("all --no-such-flag"), 2);
    EXPECT_EQ(run_cli("bogus"), 2);
    EXPECT_EQ(run_cli("sweep --rm-grid 1"), 2);
    EXPECT_EQ(run_cli("all --margin 40"), 2);
    EXPECT_EQ(run_cli("all --tol finite.distance"), 2);
    EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Binary, FailedCheckExitsOne)
{
    EXPECT_EQ(run_cli("finite-distance --tol finite.distance=-1"), 1);
}

TEST(Binary, ConfigFileAndCsv)
{
    const fs::path d = scratch_dir("cfg");
    {
        std::ofstream f(d / "run.ini");
        f << "m=4\nformat=csv\n";
    }
    ASSERT_EQ(run_cli("finite-distance --config " + (d / "run.ini").string() + " -o " + (d / "out.csv").string()), 0);
    const std::string csv = slurp(d / "out.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,residual,tolerance,pass,margin,notes");
    EXPECT_NE(csv.find("finite.distance,"), std::string::npos);
    fs::remove_all(d);
}
