#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <functional>
#include <numeric>

#include "equimetric/error.hpp"
#include "equimetric/orbital.hpp"
#include "equimetric/scenario.hpp"
#include "support.hpp"

using namespace equimetric;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

// Word length by breadth-first search from the identity.
std::vector<double> word_lengths(const FiniteGroup& g, const std::vector<Element>& gens) {
  std::vector<double> len(g.order(), -1.0);
  std::deque<Element> queue{g.identity()};
  len[g.identity()] = 0.0;
  while (!queue.empty()) {
    const Element a = queue.front();
    queue.pop_front();
    for (Element s : gens) {
      const Element b = g.mul(a, s);
      if (len[b] < 0.0) {
        len[b] = len[a] + 1.0;
        queue.push_back(b);
      }
    }
  }
  return len;
}

double coset_oracle(const FiniteGroup& g, const GroupMetric& m, const Subgroup& k, Element g1, Element g2) {
  double best = kInfinity;
  for (Element u : k) {
    for (Element v : k) best = std::min(best, m(g.mul(g1, u), g.mul(g2, v)));
  }
  return best;
}

FiniteGroup c4_word() { return build_group(cyclic_group(4).table(), std::vector<Element>{1, 3}); }

struct Built {
  Scenario scenario;
  Quotient quotient;
  SliceFamily family;
  OrbitalMetric orbital;
};

Built build(Scenario sc, GroupMetricSpec spec = {}) {
  Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), QuotientMode::Graph);
  SliceFamily f = build_slice_family(sc.gspace, q);
  GroupMetric gm = group_metric(sc.gspace.group(), spec, q.stabilizer_of);
  OrbitalMetric o = build_orbital_metric(sc.gspace, q, f, gm);
  return {std::move(sc), std::move(q), std::move(f), std::move(o)};
}

}  // namespace

TEST(GroupMetric, DiscreteIsBiinvariant) {
  FiniteGroup d4 = testkit::dihedral_group(4);
  const auto subgroups = d4.all_subgroups();
  GroupMetric m = group_metric(d4, {GroupMetricKind::Discrete, 1.0, std::nullopt}, subgroups);
  for (Element g = 1; g < d4.order(); ++g) EXPECT_EQ(m(d4.identity(), g), 1.0);
  for (const Subgroup& k : subgroups) {
    EXPECT_TRUE(m.flagged_right_invariant(k));
    EXPECT_TRUE(is_right_invariant(d4, m.table, k, 0.0));
  }
  EXPECT_EQ(group_metric(d4, {GroupMetricKind::Discrete, 2.5, std::nullopt})(0, 3), 2.5);
  EXPECT_THROW(group_metric(d4, {GroupMetricKind::Discrete, 0.0, std::nullopt}), Error);
}

TEST(GroupMetric, WordMetricMatchesBreadthFirstSearch) {
  FiniteGroup c4 = c4_word();
  GroupMetric m = group_metric(c4, {GroupMetricKind::Word, 1.0, std::nullopt});
  EXPECT_EQ(m(0, 2), 2.0);
  for (FiniteGroup g : {c4, cyclic_group(6), testkit::dihedral_group(4), testkit::dihedral_group(3)}) {
    GroupMetric w = group_metric(g, {GroupMetricKind::Word, 1.0, std::nullopt});
    const auto len = word_lengths(g, g.generators());
    for (Element a = 0; a < g.order(); ++a) {
      for (Element b = 0; b < g.order(); ++b) EXPECT_EQ(w(a, b), len[g.mul(g.inv(a), b)]);
    }
  }
}

TEST(GroupMetric, ExplicitTableOnTwoElements) {
  FiniteGroup z2 = cyclic_group(2);
  DistanceTable t(2);
  t(0, 1) = t(1, 0) = 2.0;
  GroupMetric m = group_metric(z2, {GroupMetricKind::Explicit, 1.0, t}, z2.all_subgroups());
  EXPECT_EQ(m(0, 1), 2.0);
  for (const Subgroup& k : z2.all_subgroups()) EXPECT_TRUE(m.flagged_right_invariant(k));
}

TEST(GroupMetric, ExplicitTableMustBeLeftInvariant) {
  FiniteGroup c3 = cyclic_group(3);
  DistanceTable t(3, 1.0);
  for (Element g = 0; g < 3; ++g) t(g, g) = 0.0;
  t(0, 1) = t(1, 0) = 1.5;
  EXPECT_EQ(kind_of([&] { group_metric(c3, {GroupMetricKind::Explicit, 1.0, t}); }), ErrorKind::NotLeftInvariant);
}

TEST(GroupMetric, WordGeneratorsMustBeInverseClosed) {
  FiniteGroup c4 = build_group(cyclic_group(4).table(), std::vector<Element>{1});
  EXPECT_EQ(kind_of([&] { group_metric(c4, {GroupMetricKind::Word, 1.0, std::nullopt}); }),
            ErrorKind::GeneratorsNotInverseClosed);
}

TEST(CosetMetric, ExtremeSubgroups) {
  FiniteGroup d4 = testkit::dihedral_group(4);
  GroupMetric m = group_metric(d4, {GroupMetricKind::Word, 1.0, std::nullopt});
  Subgroup whole(d4.order());
  std::iota(whole.begin(), whole.end(), 0);
  for (Element a = 0; a < d4.order(); ++a) {
    for (Element b = 0; b < d4.order(); ++b) {
      EXPECT_EQ(coset_distance(d4, m, Subgroup{0}, a, b), m(a, b));
      EXPECT_EQ(coset_distance(d4, m, whole, a, b), 0.0);
    }
  }
}

TEST(CosetMetric, CyclicFourHalfTurnCoset) {
  FiniteGroup c4 = c4_word();
  GroupMetric m = group_metric(c4, {GroupMetricKind::Word, 1.0, std::nullopt});
  EXPECT_EQ(coset_distance(c4, m, Subgroup{0, 2}, 0, 1), 1.0);
  EXPECT_EQ(coset_oracle(c4, m, Subgroup{0, 2}, 0, 1), 1.0);
}

TEST(CosetMetric, RejectsNonSubgroup) {
  FiniteGroup c4 = c4_word();
  GroupMetric m = group_metric(c4, {GroupMetricKind::Word, 1.0, std::nullopt});
  EXPECT_EQ(kind_of([&] { CosetMetric(c4, m, Subgroup{0, 1}); }), ErrorKind::NotASubgroup);
}

TEST(CosetMetric, FormsAgreeUnderRightInvariance) {
  for (FiniteGroup g : {c4_word(), cyclic_group(6), testkit::dihedral_group(4)}) {
    const auto subgroups = g.all_subgroups();
    for (GroupMetricKind kind : {GroupMetricKind::Word, GroupMetricKind::Discrete}) {
      GroupMetric m = group_metric(g, {kind, 1.0, std::nullopt}, subgroups);
      for (const Subgroup& k : subgroups) {
        CosetMetric debug(g, m, k, true);
        for (Element a = 0; a < g.order(); ++a) {
          for (Element b = 0; b < g.order(); ++b) {
            const double value = debug(a, b);
            EXPECT_EQ(debug.full_form(a, b), coset_oracle(g, m, k, a, b));
            EXPECT_EQ(value, coset_oracle(g, m, k, a, b));
            if (debug.right_invariant()) EXPECT_EQ(debug.full_form(a, b), debug.reduced_form(a, b));
            EXPECT_LE(value, m(a, b));
          }
        }
      }
    }
  }
}

TEST(Orbital, ReflectionDiscrete) {
  Built b = build(reflection_scenario(2, 1.0));
  EXPECT_EQ(b.orbital(1, 3), 1.0);
  EXPECT_EQ(b.orbital(2, 2), 0.0);
  for (Point x = 0; x < 5; ++x) {
    for (Point y = 0; y < 5; ++y) {
      if (!b.quotient.same_orbit(x, y)) EXPECT_EQ(b.orbital(x, y), 0.0);
    }
  }
}

TEST(Orbital, CircleDiscrete) {
  Built b = build(circle_scenario(12, 3));
  EXPECT_DOUBLE_EQ(b.orbital(0, 4), 1.0);
  // Free action, discrete scale 1: every chart distance between distinct points is 1.
  for (const Chart& c : b.orbital.charts) {
    for (Point a = 0; a < 12; ++a) {
      for (Point y = 0; y < 12; ++y) {
        if (a != y && b.quotient.same_orbit(a, y) && !std::isnan(c.table(a, y))) EXPECT_EQ(c.table(a, y), 1.0);
      }
    }
  }
  EXPECT_TRUE(verify_orbital_properties(b.scenario.gspace, b.quotient, b.family, b.orbital).all_pass());
}

TEST(Orbital, CircleSmallDisplacementWitness) {
  Built b = build(circle_scenario(12, 3));
  const double delta = std::min(1.0, M_PI / 6) / 2;
  const std::vector<double> grid{delta};
  const auto& gs = b.scenario.gspace;
  for (Point x = 0; x < 12; ++x) {
    for (double eps : {0.5, 1.0, 1.5}) {
      EXPECT_EQ(small_displacement_witness(gs, b.quotient, b.family, b.orbital, x, eps, grid), delta);
      // Oracle: only the identity is within delta, so every displacement is zero.
      for (Point y : subslice_ball(b.family, b.quotient, x, delta).members()) {
        for (Element g = 0; g < gs.group().order(); ++g) {
          if (b.orbital.base(g, gs.group().identity()) < delta) EXPECT_LT(b.orbital(y, *gs.act(g, y)), eps);
        }
      }
    }
  }
}

TEST(Orbital, DiskFixedPointSubcontinuity) {
  Built b = build(disk_scenario(3, 3));
  const auto& gs = b.scenario.gspace;
  const std::vector<double> grid{0.25, 1.0, 4.0};
  EXPECT_EQ(subcontinuity_witness(gs, b.quotient, b.family, b.orbital, 4, grid, 1e-9), 0.25);
  for (Element g1 = 0; g1 < 4; ++g1) {
    for (Element g2 = 0; g2 < 4; ++g2) EXPECT_EQ(b.orbital(*gs.act(g1, 4), *gs.act(g2, 4)), 0.0);
  }
  EXPECT_TRUE(verify_orbital_properties(gs, b.quotient, b.family, b.orbital).all_pass());
}

TEST(Orbital, ChartDistanceBoundedByGroupMetric) {
  for (Scenario sc : {circle_scenario(12, 3), reflection_scenario(2, 1.0), disk_scenario(3, 3), dihedral_scenario(8)}) {
    Built b = build(std::move(sc));
    const auto& gs = b.scenario.gspace;
    for (const Chart& c : b.orbital.charts) {
      for (Point y : c.slice.members()) {
        for (Element g1 = 0; g1 < gs.group().order(); ++g1) {
          for (Element g2 = 0; g2 < gs.group().order(); ++g2) {
            const double dy = chart_distance(gs, b.orbital.base, y, *gs.act(g1, y), *gs.act(g2, y));
            EXPECT_LE(dy, b.orbital.base(g1, g2));
            EXPECT_LE(chart_distance(gs, b.orbital.base, c.center, *gs.act(g1, c.center), *gs.act(g2, c.center)),
                      dy + 1e-12);
          }
        }
      }
    }
  }
}

TEST(Orbital, InvariantAndMetricOnRandomSpaces) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    Scenario sc = testkit::random_gspace(rng);
    Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), QuotientMode::Graph);
    SliceFamily f = build_slice_family(sc.gspace, q);
    GroupMetric gm = group_metric(sc.gspace.group(), {}, q.stabilizer_of);
    OrbitalMetric o = build_orbital_metric(sc.gspace, q, f, gm);
    const auto& gs = sc.gspace;
    for (Element g : gs.total_elements()) {
      for (Point x = 0; x < gs.n_points(); ++x) {
        for (Point y = 0; y < gs.n_points(); ++y) EXPECT_NEAR(o(*gs.act(g, x), *gs.act(g, y)), o(x, y), 1e-12);
      }
    }
    for (Orbit k = 0; k < q.n_orbits; ++k) {
      double sum = 0.0;
      for (const Chart& c : o.charts) sum += c.weight[k];
      EXPECT_NEAR(sum, 1.0, 1e-12);
      for (Point a : q.members[k]) {
        for (Point b2 : q.members[k]) EXPECT_EQ(o(a, b2) == 0.0, a == b2);
      }
    }
    VerificationReport r = verify_orbital_properties(gs, q, f, o);
    for (const Check& c : r.checks()) EXPECT_NE(c.status, Status::Fail) << c.name;
  }
}

TEST(Orbital, IncompatibleGroupMetricRejected) {
  // Symmetric group on three points acting naturally; stabilizers are
  // non-normal reflections and the word metric is not right invariant under all of them.
  std::vector<Permutation> gens{{1, 2, 0}, {2, 0, 1}, {0, 2, 1}};
  std::vector<Permutation> elements;
  FiniteGroup s3 = permutation_group(gens, &elements);
  DistanceTable d(3, 1.0);
  for (Point i = 0; i < 3; ++i) d(i, i) = 0.0;
  std::vector<PartialMap> maps;
  for (const Permutation& p : elements) maps.emplace_back(std::vector<std::optional<Point>>(p.begin(), p.end()));
  SampledGSpace gs = bind_action(SampledSpace(d, {{0, 1}, {1, 2}, {0, 2}}), s3, maps);
  GroupMetric word = group_metric(gs.group(), {GroupMetricKind::Word, 1.0, std::nullopt});

  bool some_bad = false;
  for (Point z = 0; z < 3; ++z) {
    const Subgroup& k = gs.stabilizer(z);
    bool right = true;
    for (Element a = 0; a < 6; ++a) {
      for (Element b = 0; b < 6; ++b) {
        for (Element u : k) right = right && word(gs.group().mul(a, u), gs.group().mul(b, u)) == word(a, b);
      }
    }
    some_bad = some_bad || (!right && !gs.group().is_normal(k));
  }
  ASSERT_TRUE(some_bad);

  Quotient q = quotient_metric(gs, compute_orbits(gs), QuotientMode::Graph);
  SliceFamily f = build_slice_family(gs, q);
  EXPECT_EQ(kind_of([&] { build_orbital_metric(gs, q, f, word); }), ErrorKind::IncompatibleGroupMetric);
  GroupMetric discrete = group_metric(gs.group(), {});
  EXPECT_NO_THROW(build_orbital_metric(gs, q, f, discrete));
}
