#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "equimetric/error.hpp"
#include "equimetric/pipeline.hpp"

using namespace equimetric;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = EQUIMETRIC_CONFIGS;

int cli(const std::string& args) {
  const std::string cmd = std::string(EQUIMETRIC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, sep);) out.push_back(cell);
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("equimetric_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(Config, StrictParsing) {
  const json ok = {{"scenario", {{"name", "circle"}, {"params", {{"n", 12}, {"k", 3}}}}}, {"mode", "cover"}};
  ScenarioConfig c = parse_config(ok);
  EXPECT_EQ(c.scenario, "circle");
  EXPECT_EQ(c.mode, LiftMode::Cover);
  EXPECT_EQ(c.tolerance, 1e-9);
  EXPECT_EQ(c.enlargement_factor, 4.0);

  auto rejects = [](json doc) {
    try {
      parse_config(doc);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidConfig;
    }
    return false;
  };
  json unknown = ok;
  unknown["colour"] = "blue";
  EXPECT_TRUE(rejects(unknown));
  json no_mode = ok;
  no_mode.erase("mode");
  EXPECT_TRUE(rejects(no_mode));
  json bad_tol = ok;
  bad_tol["tolerance"] = -1.0;
  EXPECT_TRUE(rejects(bad_tol));
  json bad_mode = ok;
  bad_mode["mode"] = "sideways";
  EXPECT_TRUE(rejects(bad_mode));
  json bad_metric = ok;
  bad_metric["group_metric"] = {{"kind", "discrete"}, {"scale", 0}};
  EXPECT_TRUE(rejects(bad_metric));
}

TEST(Pipeline, CircleCoverRhoCsv) {
  ScenarioConfig c = load_config(kConfigs / "circle_cover.json");
  PipelineResult r = run_pipeline(c);
  EXPECT_EQ(r.exit_code, 0);
  const std::vector<std::string> lines = split(format_rho_csv(r.lifted), '\n');
  ASSERT_EQ(lines.size(), 13u);
  EXPECT_EQ(split(lines[0], ',')[5], "x4");
  const auto row = split(lines[1], ',');
  EXPECT_EQ(row[0], "x0");
  EXPECT_EQ(row[5], "2.0943951");
  EXPECT_EQ(row[1], "0");
}

TEST(Pipeline, ExitCodesFollowReport) {
  EXPECT_EQ(run_pipeline(load_config(kConfigs / "circle_naive.json")).exit_code, 2);
  PipelineResult singleton = run_pipeline(load_config(kConfigs / "reflection_singleton.json"));
  EXPECT_EQ(singleton.exit_code, 3);
  EXPECT_EQ(singleton.report.find("slices.degenerate-family")->status, Status::Advisory);
  for (const char* name : {"circle_general.json", "reflection_general.json", "dihedral_general.json",
                           "disk_general.json", "shift_cover.json"}) {
    PipelineResult r = run_pipeline(load_config(kConfigs / name));
    EXPECT_EQ(r.exit_code, 0) << name;
    EXPECT_EQ(exit_code_for(r.report), r.exit_code);
  }
}

TEST(Pipeline, ReportFormat) {
  ScenarioConfig c = load_config(kConfigs / "reflection_general.json");
  PipelineResult r = run_pipeline(c);
  const std::vector<std::string> lines = split(format_report(r, c), '\n');
  ASSERT_GE(lines.size(), 3u);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto cells = split(lines[i], '\t');
    ASSERT_GE(cells.size(), 3u) << lines[i];
    EXPECT_TRUE(cells[1] == "pass" || cells[1] == "fail" || cells[1] == "advisory") << lines[i];
  }
}

TEST(Cli, RunExitCodes) {
  TempDir tmp("cli_run");
  EXPECT_EQ(cli("run --config " + (kConfigs / "circle_cover.json").string() + " --out " + (tmp.path() / "a").string()), 0);
  EXPECT_NE(slurp(tmp.path() / "a" / "rho.csv").find("2.0943951"), std::string::npos);
  for (const char* f : {"rho.csv", "quotient.csv", "slices.txt", "report.txt"}) {
    EXPECT_TRUE(fs::exists(tmp.path() / "a" / f)) << f;
  }
  EXPECT_EQ(cli("run --config " + (kConfigs / "circle_naive.json").string() + " --out " + (tmp.path() / "b").string()), 2);
  EXPECT_NE(slurp(tmp.path() / "b" / "rho.csv").find("1.04719755"), std::string::npos);
  EXPECT_EQ(cli("run --config " + (kConfigs / "reflection_singleton.json").string() + " --out " +
                (tmp.path() / "c").string()),
            3);
  EXPECT_EQ(cli("run --config " + (tmp.path() / "missing.json").string()), 1);
}

TEST(Cli, OverridesAndVerify) {
  TempDir tmp("cli_verify");
  const std::string cfg = (kConfigs / "circle_cover.json").string();
  const std::string out = " --out " + tmp.path().string();
  EXPECT_EQ(cli("run --config " + cfg + " --mode naive" + out), 2);
  EXPECT_EQ(cli("verify --config " + cfg + " --only lift.local-isometry" + out), 0);
  EXPECT_EQ(cli("verify --config " + cfg + " --mode naive --only lift.local-isometry-balls" + out), 2);
  EXPECT_EQ(cli("verify --config " + cfg + " --only no.such-check" + out), 1);
  EXPECT_EQ(cli("verify --config " + (kConfigs / "reflection_singleton.json").string() + " --only lift.connectivity" + out), 3);
}

TEST(Cli, GenWritesLoadableScenario) {
  TempDir tmp("cli_gen");
  const fs::path file = tmp.path() / "circle.json";
  EXPECT_EQ(cli("gen --scenario circle --n 12 --k 3 --out " + file.string()), 0);
  Scenario s = load_scenario_file(file);
  EXPECT_EQ(s.gspace.n_points(), 12u);
  EXPECT_EQ(s.gspace.group().order(), 3u);
  EXPECT_EQ(cli("gen --scenario circle --n 10 --k 3 --out " + file.string()), 1);
}

TEST(Cli, OutputsIdenticalAcrossThreadCounts) {
  TempDir tmp("cli_threads");
  for (const char* name : {"circle_general.json", "dihedral_general.json", "shift_cover.json"}) {
    const std::string cfg = (kConfigs / name).string();
    ASSERT_EQ(cli("run --config " + cfg + " --threads 1 --out " + (tmp.path() / "t1").string()), 0);
    ASSERT_EQ(cli("run --config " + cfg + " --threads 4 --out " + (tmp.path() / "t4").string()), 0);
    ASSERT_EQ(cli("run --config " + cfg + " --threads 1 --out " + (tmp.path() / "again").string()), 0);
    for (const char* f : {"rho.csv", "report.txt", "quotient.csv", "slices.txt"}) {
      const std::string base = slurp(tmp.path() / "t1" / f);
      EXPECT_FALSE(base.empty());
      EXPECT_EQ(base, slurp(tmp.path() / "t4" / f)) << name << " " << f;
      EXPECT_EQ(base, slurp(tmp.path() / "again" / f)) << name << " " << f;
    }
  }
}
