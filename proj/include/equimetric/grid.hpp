#pragma once

#include <vector>

namespace equimetric {

/// Threshold grid for existence searches over a finite model: every distinct
/// positive finite value, the midpoint between consecutive distinct values
/// (0 included), and twice the largest value. Ascending.
///
/// Ball contents only change at realized values, so quantifiers over all
/// positive reals reduce to quantifiers over this grid.
std::vector<double> realized_grid(std::vector<double> values);

}  // namespace equimetric
