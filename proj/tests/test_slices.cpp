#include <gtest/gtest.h>

#include "equimetric/error.hpp"
#include "equimetric/slices.hpp"
#include "equimetric/scenario.hpp"
#include "support.hpp"

using namespace equimetric;

namespace {

struct Built {
  Scenario scenario;
  Quotient quotient;
  SliceFamily family;
};

Built build(Scenario sc, QuotientMode mode = QuotientMode::Graph) {
  Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), mode);
  SliceFamily f = build_slice_family(sc.gspace, q);
  return {std::move(sc), std::move(q), std::move(f)};
}

PointSet set_of(std::size_t n, std::initializer_list<Point> pts) {
  PointSet s(n);
  for (Point p : pts) s.insert(p);
  return s;
}

bool witness_present(const SampledGSpace& gs, const std::vector<PointSet>& slices, const SliceLogEntry& e) {
  if (e.condition == "orbit-meets-once") return slices[e.witness[0]].contains(e.witness[1]);
  if (e.condition == "translate-disjoint") {
    const PointSet& sx = slices[e.witness[0]];
    return gs.image(*e.element, sx).intersects(sx);
  }
  if (e.condition == "neighbor-separation") {
    return slices[e.witness[0]].contains(e.witness[1]) && slices[e.witness[1]].intersects(slices[e.witness[2]]);
  }
  return false;
}

}  // namespace

TEST(Slices, CircleSliceIsThreeArc) {
  Built b = build(circle_scenario(12, 3));
  EXPECT_EQ(b.family.slice_of[0], set_of(12, {11, 0, 1}));
  EXPECT_TRUE(verify_slice_family(b.scenario.gspace, b.quotient, b.family).all_pass());
  EXPECT_FALSE(b.family.degenerate());
}

TEST(Slices, ReflectionSlices) {
  Built b = build(reflection_scenario(2, 1.0));
  // Index 2 is the origin, index 3 is t = 1.
  EXPECT_TRUE(set_of(5, {1, 2, 3}).is_subset_of(b.family.slice_of[2]));
  EXPECT_EQ(b.family.slice_of[3], set_of(5, {3}));
  EXPECT_TRUE(verify_slice_family(b.scenario.gspace, b.quotient, b.family).all_pass());
}

TEST(Slices, TrivialGroupSliceIsWholeComponent) {
  DistanceTable d(4);
  for (Point i = 0; i < 4; ++i) {
    for (Point j = 0; j < 4; ++j) d(i, j) = std::abs(double(i) - double(j));
  }
  SampledGSpace gs = bind_action(SampledSpace(d, {{0, 1}, {1, 2}, {2, 3}}), cyclic_group(1), {PartialMap::identity(4)});
  Quotient q = quotient_metric(gs, compute_orbits(gs), QuotientMode::Graph);
  SliceFamily f = build_slice_family(gs, q);
  for (Point x = 0; x < 4; ++x) EXPECT_EQ(f.slice_of[x].size(), 4u);
  EXPECT_TRUE(verify_slice_family(gs, q, f).all_pass());
}

TEST(Slices, OversizedCircleSliceReportsTranslate) {
  Built b = build(circle_scenario(12, 3));
  SliceFamily bad = b.family;
  bad.slice_of[0] = set_of(12, {0, 1, 2, 3, 4});
  VerificationReport r = verify_slice_family(b.scenario.gspace, b.quotient, bad);
  EXPECT_FALSE(r.all_pass());
  const Check* t = r.find("slices.translate-disjoint");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->status, Status::Fail);
  EXPECT_NE(std::find(t->witnesses.begin(), t->witnesses.end(), "x=0,g=1"), t->witnesses.end());
  EXPECT_EQ(r.find("slices.orbit-meets-once")->status, Status::Fail);
}

TEST(Slices, SingletonFamilyPassesWithAdvisory) {
  for (Scenario sc : {circle_scenario(12, 3), reflection_scenario(2, 1.0), dihedral_scenario(8)}) {
    Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), QuotientMode::Graph);
    SliceFamily f = singleton_family(sc.gspace, q);
    VerificationReport r = verify_slice_family(sc.gspace, q, f);
    EXPECT_TRUE(r.all_pass());
    EXPECT_EQ(r.find("slices.degenerate-family")->status, Status::Advisory);
  }
}

TEST(Subslice, CircleBalls) {
  Built b = build(circle_scenario(12, 3));
  EXPECT_EQ(subslice_ball(b.family, b.quotient, 0, 0.55), set_of(12, {11, 0, 1}));
  EXPECT_EQ(subslice_ball(b.family, b.quotient, 0, 0.5), set_of(12, {0}));
  for (Point x = 0; x < 12; ++x) {
    EXPECT_EQ(subslice(b.family, b.quotient, x, std::vector<char>(4, 1)), b.family.slice_of[x]);
  }
  std::vector<char> without_own(4, 1);
  without_own[0] = 0;
  try {
    subslice(b.family, b.quotient, 0, without_own);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyResult);
  }
}

TEST(Subslice, EquivariantUnderTotalElements) {
  for (Scenario sc : {circle_scenario(12, 3), disk_scenario(3, 3), dihedral_scenario(8), reflection_scenario(2, 1.0)}) {
    Built b = build(std::move(sc));
    const auto& gs = b.scenario.gspace;
    for (double eps : {0.3, 0.55, 1.1, 10.0}) {
      for (Point x = 0; x < gs.n_points(); ++x) {
        for (Element g : gs.total_elements()) {
          const Point gx = *gs.act(g, x);
          EXPECT_EQ(gs.image(g, b.family.slice_of[x]), b.family.slice_of[gx]);
          EXPECT_EQ(gs.image(g, subslice_ball(b.family, b.quotient, x, eps)),
                    subslice_ball(b.family, b.quotient, gx, eps));
        }
        for (Element h : gs.stabilizer(x)) EXPECT_EQ(gs.image(h, b.family.slice_of[x]), b.family.slice_of[x]);
      }
    }
  }
}

TEST(Slices, ShrinkingBallsAreNested) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    Scenario sc = testkit::random_gspace(rng);
    Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), QuotientMode::Graph);
    for (Point x = 0; x < sc.gspace.n_points(); ++x) {
      const auto radii = candidate_radii(q, q.orbit_of[x]);
      for (std::size_t i = 1; i < radii.size(); ++i) {
        EXPECT_GT(radii[i - 1], radii[i]);
        EXPECT_TRUE(ball_slice(sc.gspace, q, x, {radii[i], false})
                        .is_subset_of(ball_slice(sc.gspace, q, x, {radii[i - 1], false})));
      }
    }
  }
}

TEST(Slices, RecordedViolationsAbsentAfterShrink) {
  std::mt19937_64 rng(13);
  std::vector<Scenario> cases{circle_scenario(12, 3), dihedral_scenario(8), disk_scenario(3, 3)};
  for (int rep = 0; rep < 40; ++rep) cases.push_back(testkit::random_gspace(rng));
  for (Scenario& sc : cases) {
    Built b = build(std::move(sc));
    const auto& gs = b.scenario.gspace;
    for (const SliceLogEntry& e : b.family.construction_log) {
      if (e.condition.empty() || e.condition == "conservative-shrink") continue;
      // The entry's state is the family right after this shrink.
      std::vector<PointSet> after(gs.n_points());
      for (Point x = 0; x < gs.n_points(); ++x) after[x] = ball_slice(gs, b.quotient, x, e.state[b.quotient.orbit_of[x]]);
      // Orbits not yet scanned start at their top candidate, so only check the
      // final family and the shrunk orbit's own witness.
      if (e.condition == "neighbor-separation") {
        EXPECT_FALSE(witness_present(gs, after, e)) << e.condition;
      }
      EXPECT_FALSE(witness_present(gs, b.family.slice_of, e)) << e.condition;
      EXPECT_TRUE(e.state[e.orbit].singleton || e.tried.singleton || e.state[e.orbit].radius < e.tried.radius);
    }
  }
}

TEST(Slices, RandomSpacesPassVerification) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    Scenario sc = testkit::random_gspace(rng);
    for (QuotientMode mode : {QuotientMode::Graph, QuotientMode::Isometric}) {
      Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), mode);
      SliceFamily f = build_slice_family(sc.gspace, q);
      VerificationReport r = verify_slice_family(sc.gspace, q, f);
      for (const Check& c : r.checks()) {
        EXPECT_NE(c.status, Status::Fail) << c.name << " " << (c.witnesses.empty() ? "" : c.witnesses.front());
      }
    }
  }
}

TEST(Slices, ConservativeShrinkStillValid) {
  Scenario sc = circle_scenario(12, 3);
  Quotient q = quotient_metric(sc.gspace, compute_orbits(sc.gspace), QuotientMode::Graph);
  SliceFamily f = build_slice_family(sc.gspace, q, SliceOptions{8.0});
  EXPECT_TRUE(verify_slice_family(sc.gspace, q, f).all_pass());
  EXPECT_THROW(build_slice_family(sc.gspace, q, SliceOptions{0.0}), Error);
}
