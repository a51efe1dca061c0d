#pragma once

#include <optional>
#include <span>
#include <vector>

#include "equimetric/types.hpp"

namespace equimetric {

using MulTable = std::vector<std::vector<Element>>;
using Subgroup = std::vector<Element>;  // sorted element list
using Permutation = std::vector<Point>;

/// A finite group given by its multiplication table. Immutable once built.
class FiniteGroup {
 public:
  std::size_t order() const noexcept { return mul_.size(); }
  Element mul(Element a, Element b) const { return mul_[a][b]; }
  Element identity() const noexcept { return identity_; }
  Element inv(Element g) const { return inv_[g]; }
  const std::vector<Element>& generators() const noexcept { return generators_; }
  const MulTable& table() const noexcept { return mul_; }

  Element conjugate(Element h, Element g) const { return mul(mul(g, h), inv(g)); }  // g h g^-1

  bool is_subgroup(std::span<const Element> elements) const;
  bool is_normal(std::span<const Element> subgroup) const;
  /// Smallest subgroup containing the given elements (sorted).
  Subgroup closure(std::span<const Element> elements) const;
  /// Every subgroup, sorted by (size, elements).
  std::vector<Subgroup> all_subgroups() const;

 private:
  friend FiniteGroup build_group(const MulTable&, std::optional<std::vector<Element>>);

  MulTable mul_;
  Element identity_ = 0;
  std::vector<Element> inv_;
  std::vector<Element> generators_;
};

/// Validates the group axioms in a fixed order (shape, range, identity,
/// inverses, associativity, generation) and throws Error on the first failure.
FiniteGroup build_group(const MulTable& mul, std::optional<std::vector<Element>> generators = std::nullopt);

/// Cyclic group Z_k as addition mod k. Generators {1, k-1} (inverse closed).
FiniteGroup cyclic_group(std::size_t k);

/// Group generated by permutations of a finite set under composition
/// ((a*b)(x) = a(b(x))). Element 0 is the identity and elements 1..m are the
/// given generators, in order, when they are distinct and non-trivial; `elements`
/// receives the permutation realized by each group element.
FiniteGroup permutation_group(std::span<const Permutation> generators, std::vector<Permutation>* elements);

}  // namespace equimetric
