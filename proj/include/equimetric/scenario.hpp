#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "equimetric/gspace.hpp"

namespace equimetric {

struct Scenario {
  std::string name;
  SampledGSpace gspace;
  /// Points where checks are meaningful; unset means everywhere.
  std::optional<PointSet> region;
  std::string region_note;
};

/// n equally spaced points on the unit circle, arc-length metric, cyclic
/// adjacency, C_k acting by rotation through n/k steps. Requires k | n.
Scenario circle_scenario(std::size_t n, std::size_t k);
/// Points (i - m) h for i = 0..2m, Z_2 acting by negation.
Scenario reflection_scenario(std::size_t m, double h);
/// n points on the unit circle with the dihedral group of order 2n.
Scenario dihedral_scenario(std::size_t n);
/// rows x cols grid centred at the origin, 4-neighbour adjacency, Euclidean
/// metric, C_4 acting by quarter turns. Requires a square grid.
Scenario disk_scenario(std::size_t rows, std::size_t cols);
/// Points (i - m) h for i = 0..2m with shifts by j units, |j| <= N, as
/// partial maps. Requires 1/h to be an integer.
Scenario shift_scenario(std::size_t m, double h, std::size_t max_shift);

/// Dispatch by name with strictly validated parameters. `base_dir` resolves
/// relative paths of the "file" scenario.
Scenario generate_scenario(const std::string& name, const nlohmann::json& params,
                           const std::filesystem::path& base_dir = {});

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario_file(const std::filesystem::path& path);

}  // namespace equimetric
