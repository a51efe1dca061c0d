#include "equimetric/group.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "equimetric/error.hpp"

namespace equimetric {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::NoInverse: return "NoInverse";
    case ErrorKind::GeneratorsDontGenerate: return "GeneratorsDontGenerate";
    case ErrorKind::NotAMetric: return "NotAMetric";
    case ErrorKind::BadAdjacency: return "BadAdjacency";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::IdentityNotIdentity: return "IdentityNotIdentity";
    case ErrorKind::NotHomomorphism: return "NotHomomorphism";
    case ErrorKind::NotGraphAutomorphism: return "NotGraphAutomorphism";
    case ErrorKind::StabilizerNotSubgroup: return "StabilizerNotSubgroup";
    case ErrorKind::NotIsometricAction: return "NotIsometricAction";
    case ErrorKind::DisconnectedQuotient: return "DisconnectedQuotient";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::NotLeftInvariant: return "NotLeftInvariant";
    case ErrorKind::GeneratorsNotInverseClosed: return "GeneratorsNotInverseClosed";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::IncompatibleGroupMetric: return "IncompatibleGroupMetric";
    case ErrorKind::UncoveredOrbit: return "UncoveredOrbit";
    case ErrorKind::NoOrbitalMetric: return "NoOrbitalMetric";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

FiniteGroup build_group(const MulTable& mul, std::optional<std::vector<Element>> generators) {
  const std::size_t n = mul.size();
  if (n == 0) throw Error(ErrorKind::NotSquare, "empty multiplication table");
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n) {
      throw Error(ErrorKind::NotSquare, "row " + std::to_string(a) + " has " + std::to_string(mul[a].size()) +
                                            " entries, expected " + std::to_string(n));
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (mul[a][b] >= n) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "mul(" + std::to_string(a) + "," + std::to_string(b) + ") = " + std::to_string(mul[a][b]));
      }
    }
  }

  std::optional<Element> identity;
  for (Element e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (Element g = 0; g < n && ok; ++g) ok = mul[e][g] == g && mul[g][e] == g;
    if (ok) identity = e;
  }
  if (!identity) throw Error(ErrorKind::NoIdentity, "no element acts as a two-sided unit");

  std::vector<Element> inv(n);
  for (Element g = 0; g < n; ++g) {
    std::optional<Element> found;
    for (Element h = 0; h < n && !found; ++h) {
      if (mul[h][g] == *identity && mul[g][h] == *identity) found = h;
    }
    if (!found) throw Error(ErrorKind::NoInverse, "element " + std::to_string(g) + " has no two-sided inverse");
    inv[g] = *found;
  }

  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c) {
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) {
          throw Error(ErrorKind::NonAssociative, "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" +
                                                     std::to_string(c) + " != " + std::to_string(a) + "*(" +
                                                     std::to_string(b) + "*" + std::to_string(c) + ")");
        }
      }
    }
  }

  FiniteGroup group;
  group.mul_ = mul;
  group.identity_ = *identity;
  group.inv_ = std::move(inv);
  if (generators) {
    for (Element g : *generators) {
      if (g >= n) throw Error(ErrorKind::IndexOutOfRange, "generator " + std::to_string(g));
    }
    if (group.closure(*generators).size() != n) {
      throw Error(ErrorKind::GeneratorsDontGenerate,
                  "generators reach " + std::to_string(group.closure(*generators).size()) + " of " +
                      std::to_string(n) + " elements");
    }
    group.generators_ = std::move(*generators);
  }
  return group;
}

bool FiniteGroup::is_subgroup(std::span<const Element> elements) const {
  if (elements.empty()) return false;
  std::vector<char> in(order(), 0);
  for (Element g : elements) {
    if (g >= order()) return false;
    in[g] = 1;
  }
  if (!in[identity_]) return false;
  for (Element a : elements) {
    if (!in[inv(a)]) return false;
    for (Element b : elements) {
      if (!in[mul(a, b)]) return false;
    }
  }
  return true;
}

bool FiniteGroup::is_normal(std::span<const Element> subgroup) const {
  std::vector<char> in(order(), 0);
  for (Element h : subgroup) in[h] = 1;
  for (Element g = 0; g < order(); ++g) {
    for (Element h : subgroup) {
      if (!in[conjugate(h, g)]) return false;
    }
  }
  return true;
}

Subgroup FiniteGroup::closure(std::span<const Element> elements) const {
  std::vector<char> in(order(), 0);
  std::vector<Element> members{identity_};
  in[identity_] = 1;
  std::queue<Element> frontier;
  frontier.push(identity_);
  // Right multiplication by generators reaches every product of generators;
  // in a finite group that is already the generated subgroup.
  while (!frontier.empty()) {
    const Element g = frontier.front();
    frontier.pop();
    for (Element s : elements) {
      const Element h = mul(g, s);
      if (!in[h]) {
        in[h] = 1;
        members.push_back(h);
        frontier.push(h);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<Subgroup> FiniteGroup::all_subgroups() const {
  std::set<Subgroup> found;
  std::vector<Subgroup> pending{closure({})};
  found.insert(pending.front());
  while (!pending.empty()) {
    Subgroup h = std::move(pending.back());
    pending.pop_back();
    for (Element g = 0; g < order(); ++g) {
      if (std::binary_search(h.begin(), h.end(), g)) continue;
      Subgroup gens = h;
      gens.push_back(g);
      Subgroup joined = closure(gens);
      if (found.insert(joined).second) pending.push_back(std::move(joined));
    }
  }
  std::vector<Subgroup> result(found.begin(), found.end());
  std::stable_sort(result.begin(), result.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
  return result;
}

FiniteGroup cyclic_group(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidParams, "cyclic group order must be positive");
  MulTable mul(k, std::vector<Element>(k));
  for (Element a = 0; a < k; ++a) {
    for (Element b = 0; b < k; ++b) mul[a][b] = (a + b) % k;
  }
  std::vector<Element> gens;
  if (k > 1) {
    gens.push_back(1);
    if (k - 1 != 1) gens.push_back(k - 1);
  }
  return build_group(mul, gens);
}

FiniteGroup permutation_group(std::span<const Permutation> generators, std::vector<Permutation>* elements) {
  if (generators.empty()) throw Error(ErrorKind::InvalidParams, "at least one generating permutation required");
  const std::size_t degree = generators.front().size();
  Permutation id(degree);
  for (Point i = 0; i < degree; ++i) id[i] = i;

  auto compose = [](const Permutation& a, const Permutation& b) {
    Permutation c(b.size());
    for (Point i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
  };

  std::vector<Permutation> perms{id};
  std::map<Permutation, Element> index{{id, 0}};
  for (const Permutation& g : generators) {
    if (g.size() != degree) throw Error(ErrorKind::InvalidParams, "generating permutations differ in degree");
    if (!index.count(g)) {
      index.emplace(g, perms.size());
      perms.push_back(g);
    }
  }
  for (std::size_t i = 0; i < perms.size(); ++i) {
    for (const Permutation& s : generators) {
      Permutation p = compose(perms[i], s);
      if (!index.count(p)) {
        index.emplace(p, perms.size());
        perms.push_back(std::move(p));
      }
    }
  }

  const std::size_t n = perms.size();
  MulTable mul(n, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) mul[a][b] = index.at(compose(perms[a], perms[b]));
  }
  std::vector<Element> gens;
  for (const Permutation& g : generators) {
    const Element e = index.at(g);
    if (e != 0 && std::find(gens.begin(), gens.end(), e) == gens.end()) gens.push_back(e);
  }
  if (elements) *elements = perms;
  return build_group(mul, gens);
}

}  // namespace equimetric
