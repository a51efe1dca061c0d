#include "equimetric/grid.hpp"

#include <algorithm>
#include <cmath>

namespace equimetric {

std::vector<double> realized_grid(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v) || v <= 0.0; });
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) return {1.0};

  std::vector<double> grid;
  grid.reserve(2 * values.size() + 1);
  double previous = 0.0;
  for (double v : values) {
    grid.push_back((previous + v) / 2.0);
    grid.push_back(v);
    previous = v;
  }
  grid.push_back(2.0 * values.back());
  return grid;
}

}  // namespace equimetric
