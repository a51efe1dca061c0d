#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "equimetric/gspace.hpp"
#include "equimetric/scenario.hpp"

namespace equimetric::testkit {

/// Dihedral group of order 2m as permutations of m points (m >= 3).
FiniteGroup dihedral_group(std::size_t m);

/// Left action of G on the cosets of H, as permutations of coset indices.
std::vector<std::vector<Point>> coset_action(const FiniteGroup& group, const Subgroup& h);

/// Random small G-space: cyclic or dihedral group of order <= 8 acting on a
/// disjoint union of coset spaces (<= 16 points), orbit-closed random edges
/// kept connected, and the invariant shortest-path metric of random
/// orbit-constant edge weights.
Scenario random_gspace(std::mt19937_64& rng);

/// Same G-space with points renamed by `perm` (new index = perm[old]).
Scenario relabel(const Scenario& scenario, const std::vector<Point>& perm);

/// Cheapest simple chain from a to b over an explicit weighted edge list,
/// by exhaustive depth-first enumeration with cost pruning.
double brute_force_chain(std::size_t n, const std::vector<std::vector<double>>& weight, Point a, Point b);

}  // namespace equimetric::testkit
