// Copyright 2026 The opvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "opvec/cli.hpp"

namespace opvec::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = OPVEC_DATA_DIR;

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "opvec");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("opvec_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path &dir, const json &j) {
    fs::path p = dir / "config.json";
    io::write_file(p.string(), j.dump());
    return p;
}

json read_json(const fs::path &p) {
    return json::parse(io::read_file(p.string()));
}

struct SampleConfig {
    const char *file;
    const char *task;
};

class SampleConfigs : public ::testing::TestWithParam<SampleConfig> {};

TEST_P(SampleConfigs, RunsAndAgreesWithOracle) {
    const auto [file, task] = GetParam();
    fs::path out = scratch(std::string("sample_") + file);
    RunResult r = run_cli({task, "--config", kData + "/" + file, "--with-oracle", "--out", out.string()});
    ASSERT_EQ(r.code, kOk) << r.err;
    json reports = read_json(out / "report.json");
    ASSERT_TRUE(reports.is_array());
    ASSERT_FALSE(reports.empty());
    for (const auto &rep : reports) {
        EXPECT_EQ(rep["params"]["task"], task);
        for (const char *key : {"label", "value", "stderr", "shots", "seed"}) {
            EXPECT_TRUE(rep.contains(key)) << key;
        }
        if (std::string(task) == "compile2d") {
            continue;
        }
        ASSERT_TRUE(rep.contains("oracle")) << rep.dump();
        const double se = rep["stderr"].get<double>();
        if (se > 0) {
            EXPECT_LT(rep["abs_delta_over_stderr"].get<double>(), 5.0) << rep.dump();
        } else {
            EXPECT_LT(rep["abs_delta"].get<double>(), 1e-9) << rep.dump();
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Data, SampleConfigs,
                         ::testing::Values(SampleConfig{"evolve.json", "evolve"}, SampleConfig{"sample.json", "sample"},
                                           SampleConfig{"otoc.json", "otoc"}, SampleConfig{"superop.json", "superop"},
                                           SampleConfig{"superop_grouped.json", "superop"},
                                           SampleConfig{"ose.json", "ose"}, SampleConfig{"loe.json", "loe"},
                                           SampleConfig{"corr.json", "corr"}, SampleConfig{"choi2pc.json", "choi2pc"},
                                           SampleConfig{"nqubit.json", "nqubit"},
                                           SampleConfig{"compile2d.json", "compile2d"}));

TEST(Cli, SameSeedGivesIdenticalReports) {
    fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    const std::string cfg = kData + "/otoc.json";
    ASSERT_EQ(run_cli({"otoc", "--config", cfg, "--out", a.string()}).code, kOk);
    ASSERT_EQ(run_cli({"otoc", "--config", cfg, "--out", b.string()}).code, kOk);
    ASSERT_EQ(run_cli({"otoc", "--config", cfg, "--seed", "99", "--out", c.string()}).code, kOk);
    const std::string ra = io::read_file((a / "report.json").string());
    EXPECT_EQ(ra, io::read_file((b / "report.json").string()));
    EXPECT_NE(ra, io::read_file((c / "report.json").string()));
    EXPECT_EQ(read_json(c / "report.json")[0]["seed"], 99);
}

TEST(Cli, EvolveWritesReadableState) {
    fs::path out = scratch("state");
    ASSERT_EQ(run_cli({"evolve", "--config", kData + "/evolve.json", "--out", out.string()}).code, kOk);
    std::istringstream in(io::read_file((out / "state.bin").string()));
    VectorizedState s = read_state(in);
    EXPECT_EQ(s.n, 3u);
    EXPECT_EQ(s.basis, BasisTag::pauli());
    EXPECT_NEAR(s.norm(), 1.0, 1e-6);
}

TEST(Cli, SampleWritesDistribution) {
    fs::path out = scratch("dist");
    ASSERT_EQ(run_cli({"sample", "--config", kData + "/sample.json", "--out", out.string()}).code, kOk);
    std::istringstream csv(io::read_file((out / "dist.csv").string()));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "pauli_string,count");
    uint64_t total = 0;
    while (std::getline(csv, line)) {
        auto comma = line.find(',');
        ASSERT_NE(comma, std::string::npos);
        EXPECT_EQ(comma, 3u);
        total += std::stoull(line.substr(comma + 1));
    }
    EXPECT_EQ(total, 4000u);
}

TEST(Cli, Compile2dWritesSchedule) {
    fs::path out = scratch("sched");
    ASSERT_EQ(run_cli({"compile2d", "--config", kData + "/compile2d.json", "--out", out.string()}).code, kOk);
    json s = read_json(out / "schedule.json");
    EXPECT_EQ(s["rows"], 3);
    EXPECT_EQ(s["entangling_depth"], 10);
    EXPECT_TRUE(s["violations"].empty());
}

TEST(Cli, ValidatePrintsNormalizedConfig) {
    RunResult r = run_cli({"validate", "--config", kData + "/loe.json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    json j = json::parse(r.out);
    EXPECT_EQ(j["task"], "loe");
    EXPECT_EQ(j["partition"], json::array({0}));
    EXPECT_TRUE(j["hamiltonian"].get<std::string>().find("ZZI") != std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({"bogus", "--config", "x.json"}).code, kUsage);
    EXPECT_EQ(run_cli({"evolve"}).code, kUsage);
    EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

TEST(Cli, ConfigErrorsAreCollected) {
    fs::path dir = scratch("cfg");
    RunResult r = run_cli({"otoc", "--config", write_config(dir, {{"task", "otoc"}, {"shots", -3}}).string()});
    EXPECT_EQ(r.code, kInvalidConfig);
    EXPECT_NE(r.err.find("operator"), std::string::npos);
    EXPECT_NE(r.err.find("pairs"), std::string::npos);
    EXPECT_NE(r.err.find("shots"), std::string::npos);
    r = run_cli({"loe", "--config",
                 write_config(dir, {{"task", "loe"}, {"operator", "ZZ"}, {"partition", {0, 1}}}).string()});
    EXPECT_EQ(r.code, kInvalidConfig);
    r = run_cli({"evolve", "--config", write_config(dir, {{"task", "otoc"}, {"operator", "Z"}}).string()});
    EXPECT_EQ(r.code, kInvalidConfig);
    r = run_cli({"evolve", "--config", write_config(dir, {{"task", "evolve"}, {"operator", "Z"}, {"bogus", 1}}).string()});
    EXPECT_EQ(r.code, kInvalidConfig);
}

TEST(Cli, ParseErrors) {
    fs::path dir = scratch("parse");
    io::write_file((dir / "bad.json").string(), "{ not json");
    EXPECT_EQ(run_cli({"evolve", "--config", (dir / "bad.json").string()}).code, kParse);
    EXPECT_EQ(run_cli({"evolve", "--config",
                       write_config(dir, {{"task", "evolve"}, {"operator", "1 0 ZQ"}}).string(), "--out", dir.string()})
                  .code,
              kParse);
    EXPECT_EQ(run_cli({"evolve", "--config",
                       write_config(dir, {{"task", "evolve"}, {"operator", "ZZ"}, {"circuit", "cx 0"}}).string(), "--out",
                        dir.string()})
                  .code,
              kParse);
}

TEST(Cli, CapErrors) {
    fs::path dir = scratch("cap");
    const std::string wide(13, 'Z');
    EXPECT_EQ(run_cli({"evolve", "--config", write_config(dir, {{"task", "evolve"}, {"operator", wide}}).string(), "--out",
                       dir.string()})
                  .code,
              kCap);
    EXPECT_EQ(run_cli({"evolve", "--config", write_config(dir, {{"task", "evolve"}, {"operator", "ZZZZZZZZ"}}).string(),
                       "--with-oracle", "--out", dir.string()})
                  .code,
              kCap);
}

TEST(Cli, NonCommutingAndEntangledSets) {
    fs::path dir = scratch("nc");
    json base = {{"task", "nqubit"}, {"operator", "ZI"}, {"shots", 10}};
    base["pairs"] = json::array({json::array({"XI", "II"}), json::array({"ZI", "II"})});
    EXPECT_EQ(run_cli({"nqubit", "--config", write_config(dir, base).string(), "--out", dir.string()}).code,
              kNonCommuting);
    base["pairs"] = json::array({json::array({"XI", "XI"}), json::array({"ZI", "ZI"})});
    EXPECT_EQ(run_cli({"nqubit", "--config", write_config(dir, base).string(), "--out", dir.string()}).code,
              kNonCommuting);
    base["task"] = "otoc";
    base["pairs"] = json::array({json::array({"XI", "XI"}), json::array({"YI", "XI"})});
    EXPECT_EQ(run_cli({"otoc", "--config", write_config(dir, base).string(), "--out", dir.string()}).code,
              kNonCommuting);
}

TEST(Cli, MissingConfigFileIsOtherError) {
    EXPECT_EQ(run_cli({"evolve", "--config", "/nonexistent/opvec.json"}).code, kOther);
}

}  // namespace
}  // namespace opvec::cli
