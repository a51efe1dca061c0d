#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "equimetric/error.hpp"
#include "equimetric/pipeline.hpp"

using namespace equimetric;

namespace {

struct Overrides {
  std::optional<std::string> mode;
  std::optional<double> scale;
  std::optional<double> tolerance;
  std::optional<std::string> out;
  unsigned threads = 1;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--mode", o.mode, "general, cover or naive");
  cmd->add_option("--scale", o.scale, "discrete group metric scale")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", o.tolerance, "comparison tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads for shortest paths")->check(CLI::Range(1u, 256u));
}

ScenarioConfig configure(const std::string& path, const Overrides& o) {
  ScenarioConfig c = load_config(path);
  if (o.mode) c.mode = parse_mode(*o.mode);
  if (o.scale) {
    if (c.group_metric != GroupMetricKind::Discrete) {
      throw Error(ErrorKind::InvalidConfig, "--scale applies only to the discrete group metric");
    }
    c.scale = *o.scale;
  }
  if (o.tolerance) c.tolerance = *o.tolerance;
  if (o.out) c.output_dir = *o.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift orbit-space metrics to invariant metrics on sampled G-spaces"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_over;
  auto* run = app.add_subcommand("run", "run the full pipeline and write outputs");
  run->add_option("--config", config_path, "config file")->required();
  add_overrides(run, run_over);

  std::string only;
  Overrides verify_over;
  auto* verify = app.add_subcommand("verify", "run the pipeline and print one check");
  verify->add_option("--config", config_path, "config file")->required();
  verify->add_option("--only", only, "check name")->required();
  add_overrides(verify, verify_over);

  std::string scenario, gen_out;
  std::optional<long long> n, k, m, big_n, rows, cols;
  std::optional<double> h;
  auto* gen = app.add_subcommand("gen", "write a built-in scenario as a G-space document");
  gen->set_help_flag("--help", "print this help message and exit");  // frees -h for the spacing
  gen->add_option("--scenario", scenario, "circle, reflection, dihedral, disk or shift")->required();
  gen->add_option("--n", n);
  gen->add_option("--k", k);
  gen->add_option("--m", m);
  gen->add_option("--h", h);
  gen->add_option("--N", big_n);
  gen->add_option("--rows", rows);
  gen->add_option("--cols", cols);
  gen->add_option("--out", gen_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ScenarioConfig config = configure(config_path, run_over);
      PipelineResult result = run_pipeline(config, run_over.threads);
      write_outputs(result, config);
      std::cout << format_report(result, config);
      return result.exit_code;
    }
    if (*verify) {
      const ScenarioConfig config = configure(config_path, verify_over);
      PipelineResult result = run_pipeline(config, verify_over.threads);
      const Check* check = result.report.find(only);
      if (!check) {
        std::cerr << "error: no check named '" << only << "'\n";
        return 1;
      }
      std::cout << VerificationReport::format_line(*check) << "\n";
      if (check->status != Status::Fail) return 0;
      return only == "lift.connectivity" ? 3 : 2;
    }
    nlohmann::json params = nlohmann::json::object();
    if (n) params["n"] = *n;
    if (k) params["k"] = *k;
    if (m) params["m"] = *m;
    if (h) params["h"] = *h;
    if (big_n) params["N"] = *big_n;
    if (rows) params["rows"] = *rows;
    if (cols) params["cols"] = *cols;
    const Scenario s = generate_scenario(scenario, params);
    std::ofstream out(gen_out);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + gen_out);
    out << scenario_to_json(s).dump(1) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
