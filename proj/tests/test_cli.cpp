#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracpois/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fracpois");
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = fracpois::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override { unsetenv("FRACPOIS_CONFIG"); }
    void TearDown() override { unsetenv("FRACPOIS_CONFIG"); }
};

const std::string golden_dir = FRACPOIS_GOLDEN_DIR;

}  // namespace

TEST_F(Cli, ClassicalPmfRow) {
    const Result r = run({"pmf", "--variant", "classical", "--t-start", "1", "--t-stop", "1", "--t-count", "1",
                          "--n-max", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split(r.out, '\n');
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "t,n,p,tail_mass");
    const auto fields = split(lines[1], ',');
    ASSERT_EQ(fields.size(), 4u);
    EXPECT_EQ(fields[0], "1");
    EXPECT_EQ(fields[1], "0");
    EXPECT_NEAR(std::stod(fields[2]), 0.3678794411714423, 1e-16);
}

TEST_F(Cli, GoldenPmfStfpp) {
    const Result r = run({"pmf", "--variant", "stfpp", "--alpha", "0.7", "--nu", "0.6", "--n-max", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, read_file(golden_dir + "/pmf_stfpp.csv"));
}

TEST_F(Cli, GoldenPmfSstfpp) {
    const Result r = run({"pmf", "--variant", "sstfpp", "--alpha", "0.8", "--beta", "-0.5", "--gamma", "0.1", "--nu",
                          "0.6", "--t-stop", "2", "--t-count", "3", "--n-max", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, read_file(golden_dir + "/pmf_sstfpp.csv"));
}

TEST_F(Cli, GoldenSurvivalAndPgf) {
    const Result s = run({"survival", "--variant", "tfpp", "--alpha", "0.5", "--t-stop", "3", "--t-count", "7"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(s.out, read_file(golden_dir + "/survival_tfpp.csv"));
    const Result g = run({"pgf", "--variant", "sfpp", "--nu", "0.5", "--t-start", "1", "--t-count", "2"});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_EQ(g.out, read_file(golden_dir + "/pgf_sfpp.csv"));
}

TEST_F(Cli, SstfppWithMinusAlphaMatchesStfppBitForBit) {
    const Result a = run({"pmf", "--variant", "stfpp", "--alpha", "0.65", "--nu", "0.45", "--n-max", "12"});
    const Result b = run({"pmf", "--variant", "sstfpp", "--alpha", "0.65", "--beta", "-0.65", "--gamma", "0.3",
                          "--nu", "0.45", "--n-max", "12"});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, InitialRow) {
    const Result r = run({"pmf", "--n-max", "3", "--t-count", "1", "--t-stop", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "t,n,p,tail_mass\n0,0,1,0\n0,1,0,0\n0,2,0,0\n0,3,0,0\n");
}

TEST_F(Cli, NumbersRoundTrip) {
    const Result r = run({"pmf", "--n-max", "8"});
    ASSERT_EQ(r.code, 0);
    const auto lines = split(r.out, '\n');
    for (std::size_t i = 1; i < lines.size(); ++i) {
        for (const auto& field : split(lines[i], ',')) {
            EXPECT_EQ(fracpois::cli::format_number(std::stod(field)), field);
        }
    }
}

TEST_F(Cli, JsonPmf) {
    const Result r = run({"pmf", "--format", "json", "--n-max", "2", "--t-count", "2", "--t-stop", "1"});
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("rows").size(), 6u);
    EXPECT_EQ(j.at("params").at("variant"), "stfpp");
    EXPECT_DOUBLE_EQ(j.at("params").at("beta").get<double>(), -0.7);
}

TEST_F(Cli, VerifyDefaultPasses) {
    const Result r = run({"verify"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    const json j = json::parse(r.out);
    bool saw_semigroup = false;
    for (const auto& check : j.at("checks")) {
        EXPECT_TRUE(check.at("pass").get<bool>()) << check.dump();
        EXPECT_TRUE(check.contains("residual"));
        EXPECT_TRUE(check.contains("threshold"));
        if (check.at("name") == "semigroup_counterexample") {
            saw_semigroup = true;
            EXPECT_TRUE(check.at("differ").get<bool>());
            EXPECT_NE(check.at("lhs").get<double>(), check.at("rhs").get<double>());
        }
    }
    EXPECT_TRUE(saw_semigroup);
    EXPECT_EQ(j.at("params").at("variant"), "stfpp");
}

TEST_F(Cli, VerifyOtherVariantsPass) {
    for (const std::vector<std::string>& extra :
         {std::vector<std::string>{"--variant", "classical"}, // Order 40 is too short for n = 20 at alpha = 0.5, t = 2.
         {"--variant", "tfpp", "--alpha", "0.5", "--max-k", "80"},
          {"--variant", "sfpp", "--nu", "0.4"},
          {"--variant", "sstfpp", "--alpha", "0.8", "--beta", "-0.5", "--gamma", "0.1"}}) {
        std::vector<std::string> args{"verify", "--n-max", "20"};
        args.insert(args.end(), extra.begin(), extra.end());
        const Result r = run(args);
        EXPECT_EQ(r.code, 0) << extra[1] << '\n' << r.out << r.err;
    }
}

TEST_F(Cli, VerifyTinyTruncationFails) {
    const Result r = run({"verify", "--max-k", "2"});
    EXPECT_EQ(r.code, 1);
    const json j = json::parse(r.out);
    for (const auto& check : j.at("checks")) {
        if (check.at("name") == "normalization") {
            EXPECT_FALSE(check.at("pass").get<bool>());
        }
    }
}

TEST_F(Cli, SimulateClassical) {
    const std::vector<std::string> args{"simulate", "--variant", "classical", "--samples", "100000", "--seed", "7",
                                        "--n-max", "12"};
    const Result a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(split(a.out, '\n')[0], "n,empirical,closed_form,abs_diff");
    const auto pos = a.out.find("p_value=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GT(std::stod(a.out.substr(pos + 8)), 0.01);
    const Result b = run(args);
    EXPECT_EQ(a.out, b.out);
    std::vector<std::string> one_worker = args;
    one_worker.insert(one_worker.end(), {"--workers", "1"});
    EXPECT_EQ(run(one_worker).out, a.out);
}

TEST_F(Cli, SimulateSstfppUnsupported) {
    const Result r = run({"simulate", "--variant", "sstfpp", "--beta", "-0.5"});
    EXPECT_EQ(r.code, 4);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("sstfpp"), std::string::npos);
}

TEST_F(Cli, BadParameters) {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"pmf", "--alpha", "1.5"}, {"pmf", "--variant", "poisson"},
          {"pmf", "--format", "xml"}, {"pmf", "--lambda", "-1"}, {"pmf", "--max-k", "0"},
          {"pmf", "--t-start", "2", "--t-stop", "1"}, {"pmf", "--alpha", "abc"}, {"frobnicate"},
          {"pmf", "--variant", "sstfpp", "--beta", "0.3"}}) {
        const Result r = run(args);
        EXPECT_EQ(r.code, 2) << args.back();
        EXPECT_TRUE(r.out.empty()) << args.back();
    }
}

TEST_F(Cli, ConvergenceFailureLeavesNoPartialTable) {
    // t = 0 rows succeed before the large-time row overflows the guard.
    const Result r = run({"pmf", "--lambda", "200", "--t-stop", "2", "--t-count", "3"});
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, ConfigFilePrecedence) {
    const std::string path = ::testing::TempDir() + "fracpois_config.json";
    {
        std::ofstream f(path);
        f << R"({"variant": "tfpp", "alpha": 0.5, "n_max": 1, "t_start": 1, "t_stop": 1, "t_count": 1})";
    }
    setenv("FRACPOIS_CONFIG", path.c_str(), 1);
    const Result from_file = run({"pmf"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    const Result direct = run({"pmf", "--variant", "tfpp", "--alpha", "0.5", "--n-max", "1", "--t-start", "1",
                               "--t-stop", "1", "--t-count", "1"});
    EXPECT_EQ(from_file.out, direct.out);

    const Result overridden = run({"pmf", "--alpha", "0.9"});
    const Result direct_09 = run({"pmf", "--variant", "tfpp", "--alpha", "0.9", "--n-max", "1", "--t-start", "1",
                                  "--t-stop", "1", "--t-count", "1"});
    EXPECT_EQ(overridden.out, direct_09.out);
    EXPECT_NE(overridden.out, from_file.out);

    {
        std::ofstream f(path);
        f << R"({"alpah": 0.5})";
    }
    EXPECT_EQ(run({"pmf"}).code, 2);
    setenv("FRACPOIS_CONFIG", (path + ".missing").c_str(), 1);
    EXPECT_EQ(run({"pmf"}).code, 2);
    std::remove(path.c_str());
}
