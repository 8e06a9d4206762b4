#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "sympath/config.hpp"
#include "sympath/error.hpp"
#include "sympath/json_io.hpp"
#include "sympath/runner.hpp"

using namespace sympath;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("sympath_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Run {
  int code;
  std::string out;
};

Run tool(const std::string& args, const fs::path& dir) {
  const auto log = dir / "stdout.txt";
  const std::string cmd = std::string(SYMPATH_TOOL_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

const char* kSmall = R"({
  "schema": "sympath.config/1",
  "process": {"family": "GBM", "sigma": 0.2},
  "grid": {"T": 1.0, "n_steps": 50},
  "n_paths": 5000,
  "tests": [
    {"name": "moments", "type": "self_duality_moment", "rule": {"type": "deterministic", "t": 0.5}}
  ],
  "hedges": [{"name": "uic", "type": "semi_static", "strike": 1.1, "barrier": 1.2}]
})";

}  // namespace

TEST(Config, ParsesAndRejectsUnknownKeys) {
  const auto cfg = parse_config_text(kSmall);
  EXPECT_EQ(cfg.n_paths, 5000u);
  ASSERT_EQ(cfg.tests.size(), 1u);
  EXPECT_EQ(cfg.tests[0].type, "self_duality_moment");
  EXPECT_EQ(cfg.hedges.size(), 1u);

  auto j = nlohmann::json::parse(kSmall);
  j["tests"][0]["bogus"] = 1;
  try {
    parse_config(j);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("tests[0].bogus"), std::string::npos) << e.what();
  }
  j = nlohmann::json::parse(kSmall);
  j["process"]["sigma"] = -0.2;
  try {
    parse_config(j);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("process.sigma"), std::string::npos) << e.what();
  }
  j = nlohmann::json::parse(kSmall);
  j["tests"].push_back(j["tests"][0]);
  EXPECT_THROW(parse_config(j), InvalidArgument);
  EXPECT_THROW(parse_config_text("{\"schema\": "), InvalidArgument);
}

TEST(Config, ShippedConfigsParse) {
  for (const auto& e : fs::directory_iterator(SYMPATH_CONFIG_DIR)) {
    if (e.path().extension() == ".json") {
      EXPECT_NO_THROW(load_config(e.path().string())) << e.path();
    }
  }
}

TEST(Config, SeedPrecedence) {
  auto cfg = parse_config_text(kSmall);
  ::unsetenv("SYMPATH_SEED");
  EXPECT_EQ(resolve_seed(std::nullopt, cfg), 1u);
  ::setenv("SYMPATH_SEED", "77", 1);
  EXPECT_EQ(resolve_seed(std::nullopt, cfg), 77u);
  cfg.seed = 5;
  EXPECT_EQ(resolve_seed(std::nullopt, cfg), 5u);
  EXPECT_EQ(resolve_seed(9, cfg), 9u);
  ::unsetenv("SYMPATH_SEED");
}

TEST(Runner, WritesReportsAndIsReproducible) {
  const auto dir = scratch_dir("runner");
  const auto cfg = parse_config_text(kSmall);
  RunOptions o;
  o.seed = 3;
  o.out_dir = (dir / "a").string();
  const auto a = run_experiment(cfg, o);
  o.out_dir = (dir / "b").string();
  const auto b = run_experiment(cfg, o);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.summary["schema"], kSummarySchema);
  for (const std::string f : {"moments.json", "moments.csv", "uic.json", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "a" / "moments.csv"), slurp(dir / "b" / "moments.csv"));
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "moments.json"));
  EXPECT_EQ(report["schema"], kReportSchema);
  EXPECT_EQ(report["metadata"]["seed"], 3);
  EXPECT_EQ(slurp(dir / "a" / "moments.csv").rfind("row_id,lhs,rhs,se,z\n", 0), 0u);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("exit");
  write(dir / "ok.json", kSmall);
  auto j = nlohmann::json::parse(kSmall);
  j["process"]["lambda"] = 0.5;
  j.erase("hedges");
  write(dir / "drift.json", j.dump());
  j = nlohmann::json::parse(kSmall);
  j["process"]["sigma"] = -1.0;
  write(dir / "bad.json", j.dump());

  const auto ok = tool("run --config " + (dir / "ok.json").string() + " --out-dir " + (dir / "o1").string(), dir);
  EXPECT_EQ(ok.code, 0) << ok.out;
  const auto fail = tool("test --config " + (dir / "drift.json").string() + " --out-dir " + (dir / "o2").string(), dir);
  EXPECT_EQ(fail.code, 2) << fail.out;
  const auto bad = tool("test --config " + (dir / "bad.json").string(), dir);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("process.sigma"), std::string::npos) << bad.out;
  EXPECT_EQ(tool("test --config " + (dir / "missing.json").string(), dir).code, 1);
  EXPECT_EQ(tool("frobnicate", dir).code, 1);
  const auto only = tool("test --config " + (dir / "ok.json").string() + " --only nosuch", dir);
  EXPECT_EQ(only.code, 1) << only.out;
}

TEST(Cli, SimulateAndThreadsFlag) {
  const auto dir = scratch_dir("sim");
  write(dir / "ok.json", kSmall);
  const auto r = tool("simulate --config " + (dir / "ok.json").string() + " --paths 3 --threads 1 --out-dir " +
                          (dir / "o").string(),
                      dir);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "o" / "simulate.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "paths.csv"));
}

TEST(Cli, CatalogIsStable) {
  const auto dir = scratch_dir("catalog");
  const auto a = tool("catalog", dir);
  const auto b = tool("catalog", dir);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, catalog_text());
  EXPECT_NE(a.out.find("processes 5"), std::string::npos);
}
