#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "equimetric/lift.hpp"
#include "equimetric/orbital.hpp"
#include "equimetric/quotient.hpp"
#include "equimetric/report.hpp"
#include "equimetric/scenario.hpp"
#include "equimetric/slices.hpp"

namespace equimetric {

enum class SliceSource { Build, Singleton };

struct ScenarioConfig {
  std::string scenario;
  nlohmann::json scenario_params = nlohmann::json::object();
  LiftMode mode = LiftMode::General;
  GroupMetricKind group_metric = GroupMetricKind::Discrete;
  double scale = 1.0;
  std::optional<std::filesystem::path> group_metric_path;
  QuotientMode quotient_mode = QuotientMode::Graph;
  std::optional<std::filesystem::path> quotient_path;
  std::optional<double> shrink_factor;
  double enlargement_factor = 4.0;
  double tolerance = 1e-9;
  std::filesystem::path output_dir = "out";
  SliceSource slice_family = SliceSource::Build;
  /// Directory that relative scenario and table paths are resolved against.
  std::filesystem::path base_dir;
};

/// Strict: unknown keys, wrong types and non-positive numbers throw
/// InvalidConfig.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

LiftMode parse_mode(const std::string& text);

struct PipelineResult {
  Scenario scenario;
  Quotient quotient;
  SliceFamily family;
  std::optional<OrbitalMetric> orbital;
  AllowabilityGraph graph;
  LiftedMetric lifted;
  VerificationReport report;
  int exit_code = 0;
};

/// 0 when every pass/fail check passes, 3 when the lift is disconnected,
/// 2 on any other failure.
int exit_code_for(const VerificationReport& report);

/// Runs every stage and verification. Input problems throw Error.
PipelineResult run_pipeline(const ScenarioConfig& config, unsigned threads = 1);

std::string format_rho_csv(const LiftedMetric& lifted);
std::string format_quotient_csv(const Quotient& quotient);
std::string format_slices(const Quotient& quotient, const SliceFamily& family);
std::string format_report(const PipelineResult& result, const ScenarioConfig& config);

/// Writes rho.csv, quotient.csv, slices.txt and report.txt.
void write_outputs(const PipelineResult& result, const ScenarioConfig& config);

}  // namespace equimetric
