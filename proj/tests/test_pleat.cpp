#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "hypbend/pleated.hpp"
#include "hypbend/polygonal.hpp"
#include "hypbend/seqlab.hpp"
#include "oracles.hpp"

using namespace hypbend;

namespace {

constexpr double kPi = std::numbers::pi;

PleatedSurface one_leaf(double w, int side = 1, double s = 0.5) {
  return build_pleated(BendingData(FiniteLamination2({orthogonal_leaf("l", s, w)}), side));
}

// Rotation by angle about the geodesic orthogonal to the x-axis at distance s
// (the rotation axis is the y direction carried out to x = s).
oracle::M4 oracle_fold(double s, double angle) {
  return oracle::boost(Eigen::Vector3d(1, 0, 0), s) * oracle::spatial_rotation(Eigen::Vector3d(0, 1, 0), angle) *
         oracle::boost(Eigen::Vector3d(1, 0, 0), -s);
}

}  // namespace

TEST(Build, EmptyLaminationIsIdentity) {
  const auto ps = build_pleated(BendingData(FiniteLamination2()));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> r(0.0, 3.0), a(0.0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    const auto p = MinkowskiPoint::from_polar(r(rng), a(rng));
    EXPECT_LT((ps.evaluate(p).coords() - p.coords()).norm(), 1e-12);
  }
}

TEST(Build, RejectsBadWeights) {
  EXPECT_THROW(BendingData(FiniteLamination2({orthogonal_leaf("l", 0.5, 3.5)})), ValidationError);
  EXPECT_THROW(BendingData(FiniteLamination2({orthogonal_leaf("l", 0.5, 1.0)}), 0), ValidationError);
}

TEST(Build, OneLeafAngleAndFoldOracle) {
  for (int side : {1, -1}) {
    const auto ps = one_leaf(0.9, side);
    ASSERT_EQ(ps.tree().node_count(), 2u);
    EXPECT_NEAR(plane_angle(ps.flat_plane(0), ps.flat_plane(1)), 0.9, 1e-12);
    // The far side is rotated about the leaf by 0.9, towards H+ of the base plane.
    const auto p = MinkowskiPoint::from_polar(1.5, 0.2);
    const Vec4 image = ps.evaluate(p).coords();
    const Vec4 plus = oracle_fold(0.5, 0.9) * p.coords(), minus = oracle_fold(0.5, -0.9) * p.coords();
    const Vec4 expected = (side * plus[3] < 0.0) ? plus : minus;
    EXPECT_LT((image - expected).norm(), 1e-9) << "side " << side;
    EXPECT_LT(side * image[3], 0.0);
  }
}

TEST(Build, AllPiImagesArePlanar) {
  const FiniteLamination2 lam({orthogonal_leaf("a", -0.5, kPi), orthogonal_leaf("b", 0.5, kPi),
                               Leaf2::make("c", 1.2, 1.9, kPi)});
  const auto ps = build_pleated(BendingData(lam));
  for (std::size_t n = 0; n < ps.tree().node_count(); ++n) {
    for (const auto& q : ps.sample_component(n)) EXPECT_LE(std::abs(ps.evaluate(q).z()), 1e-9);
  }
  EXPECT_LE(coplanarity_residual(ps), 1e-9);
}

TEST(Evaluate, BaseComponentFixedAndLeafCoherent) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lam = corpus::random_convex_lamination(rng, 8);
    const auto ps = build_pleated(BendingData(lam));
    for (const auto& q : ps.sample_component(ps.base_node())) {
      EXPECT_LT((ps.evaluate(q).coords() - q.coords()).norm(), 1e-9);
    }
    // Edge coherence: both adjacent maps agree along every leaf.
    for (std::size_t l = 0; l < lam.size(); ++l) {
      const auto& g = lam.leaves()[l].geodesic();
      const auto& ml = ps.component_map(ps.tree().left_of(l));
      const auto& mr = ps.component_map(ps.tree().right_of(l));
      for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const auto p = g.point_at(s);
        const auto a = ml.apply(p);
        EXPECT_LT((a.coords() - mr.apply(p).coords()).norm() / a.t(), 1e-9);
        EXPECT_NO_THROW(ps.evaluate(p));
      }
    }
  }
}

TEST(Evaluate, PathIsometricOnComponents) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ps = build_pleated(BendingData(corpus::random_convex_lamination(rng, 6)));
    for (std::size_t n = 0; n < ps.tree().node_count(); ++n) {
      const auto pts = ps.sample_component(n);
      for (std::size_t i = 0; i + 1 < pts.size(); i += 3) {
        EXPECT_NEAR(hyp_dist(ps.evaluate(pts[i]), ps.evaluate(pts[i + 1])), hyp_dist(pts[i], pts[i + 1]), 1e-8);
      }
    }
  }
}

TEST(SupportPlanes, InteriorAndLeafPoints) {
  const auto ps = one_leaf(0.9);
  const auto interior = support_planes_at(ps, MinkowskiPoint::from_polar(2.0, 0.0));
  ASSERT_TRUE(interior.is_single());
  const auto node = ps.tree().locate(MinkowskiPoint::from_polar(2.0, 0.0));
  EXPECT_LT((interior.front().normal() - ps.flat_plane(node).normal()).norm(), 1e-12);

  const auto on_leaf = support_planes_at(ps, MinkowskiPoint::from_polar(0.5, 0.0));
  ASSERT_FALSE(on_leaf.is_single());
  EXPECT_NEAR(plane_angle(on_leaf.front(), on_leaf.back()), 0.9, 1e-12);
  for (int i = 0; i <= 20; ++i) {
    const auto u = on_leaf.at(0.9 * i / 20.0);
    EXPECT_LE(ps.support_violation(u), 1e-8);
    for (std::size_t n = 0; n < 2; ++n) {
      for (const auto& q : ps.sample_component(n)) EXPECT_LE(u.signed_value(ps.evaluate(q)), 1e-8);
    }
  }
}

TEST(SupportPlanes, NonConvexRejected) {
  const FiniteLamination2 lam({Leaf2::make("a", -1.0, 1.0, 3.0), Leaf2::make("b", -0.6, 0.6, 3.0),
                               Leaf2::make("c", -0.3, 0.3, 3.0)});
  const auto ps = build_pleated(BendingData(lam));
  EXPECT_THROW(support_planes_at(ps, MinkowskiPoint::basepoint()), UnsupportedError);
}

TEST(Convexity, Examples) {
  for (int side : {1, -1}) {
    const auto r = is_convex(one_leaf(0.9, side));
    EXPECT_TRUE(r.convex);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_GE(r.witness_margin, kWitnessMargin);
  }
  const auto pi = is_convex(one_leaf(kPi));
  EXPECT_TRUE(pi.condition1);
  EXPECT_FALSE(pi.condition2);
  EXPECT_FALSE(pi.convex);

  const FiniteLamination2 nested({Leaf2::make("a", -1.0, 1.0, 3.0), Leaf2::make("b", -0.6, 0.6, 3.0),
                                  Leaf2::make("c", -0.3, 0.3, 3.0)});
  const auto bad = is_convex(build_pleated(BendingData(nested)));
  EXPECT_FALSE(bad.condition1);
  EXPECT_FALSE(bad.convex);
  EXPECT_TRUE(bad.violated_pair.has_value());
  EXPECT_GT(bad.worst_violation, 1e-8);
}

TEST(Convexity, WitnessIsInterior) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ps = build_pleated(BendingData(corpus::random_convex_lamination(rng, 10)));
    const auto r = is_convex(ps);
    ASSERT_TRUE(r.convex);
    ASSERT_TRUE(r.witness.has_value());
    for (std::size_t n = 0; n < ps.tree().node_count(); ++n) {
      EXPECT_LT(ps.flat_plane(n).signed_value(*r.witness), -kWitnessMargin * 0.999);
    }
  }
}

TEST(Convexity, LimitOfConvexFamilyIsConvexOrEven) {
  const std::vector<std::pair<double, double>> three = {{-0.5, 0.5}, {2.0, 2.6}, {3.5, 4.4}};
  const std::vector<std::pair<double, double>> one = {{-0.5, 0.5}};
  // Several leaves bent close to pi fold their flaps onto each other, so the
  // pi family is carried by a single leaf.
  for (double target : {0.4, 1.5, kPi}) {
    const auto& chords = target == kPi ? one : three;
    auto weights = [&](double w) { return std::vector<double>(chords.size(), w); };
    for (int n : {1, 4, 16, 64}) {
      const double w = target * (1.0 - 0.5 / n);
      EXPECT_TRUE(is_convex(build_pleated(BendingData(corpus::make_lamination(chords, weights(w))))).convex)
          << target << " " << n;
    }
    const auto limit = build_pleated(BendingData(corpus::make_lamination(chords, weights(target))));
    EXPECT_TRUE(is_convex(limit).convex || is_even(limit)) << target;
  }
}

TEST(Even, Examples) {
  EXPECT_TRUE(is_even(one_leaf(kPi)));
  EXPECT_FALSE(is_even(one_leaf(kPi - 1e-3)));
  EXPECT_FALSE(is_even(one_leaf(0.9)));
  EXPECT_FALSE(is_even(build_pleated(BendingData(FiniteLamination2()))));
  const FiniteLamination2 mixed({orthogonal_leaf("a", -0.5, kPi), orthogonal_leaf("b", 0.5, 3.0)});
  EXPECT_FALSE(is_even(build_pleated(BendingData(mixed))));
}

TEST(BendingMeasure, Examples) {
  const FiniteLamination2 lam({orthogonal_leaf("a", -0.5, 0.2), orthogonal_leaf("b", 0.5, 0.9)});
  const auto ps = build_pleated(BendingData(lam));
  const Arc2 none(MinkowskiPoint::from_polar(0.1, 1.5), MinkowskiPoint::from_polar(0.3, 1.7));
  EXPECT_EQ(bending_measure(ps, none), 0.0);
  const Arc2 both(MinkowskiPoint::from_polar(1.5, kPi), MinkowskiPoint::from_polar(1.5, 0.0));
  EXPECT_EQ(bending_measure(ps, both), 0.2 + 0.9);
}

TEST(BendingMeasure, AgreesWithFineApproximation) {
  const auto ps = one_leaf(0.9);
  const Arc2 k(MinkowskiPoint::from_polar(1.0, kPi), MinkowskiPoint::from_polar(2.0, 0.1));
  const auto r = approx_report(ps, k, 1e-3, default_sample_spacing());
  EXPECT_NEAR(r.angle_sum, bending_measure(ps, k), 1e-9);
}

TEST(BendingMeasure, ExactOnRandomInstances) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lam = corpus::random_convex_lamination(rng, 12);
    const auto ps = build_pleated(BendingData(lam));
    const auto k = corpus::random_arc(rng, lam);
    double sum = 0.0;
    for (const auto& c : crossings(k, lam)) sum += lam.leaves()[c.leaf_index].weight();
    EXPECT_EQ(bending_measure(ps, k), sum);
    EXPECT_EQ(bending_measure(ps, k), arc_measure(k, lam));
  }
}

TEST(ChordComparison, EmptyLamination) {
  const auto ps = build_pleated(BendingData(FiniteLamination2()));
  const auto c = chord_comparison(ps, MinkowskiPoint::from_polar(1.0, 0.0), MinkowskiPoint::from_polar(2.0, 2.0));
  EXPECT_NEAR(c.intrinsic_length, c.chord_length, 1e-12);
  EXPECT_NEAR(c.exterior_angle_sum, 0.0, 1e-12);
  EXPECT_NEAR(c.turning_sum, 0.0, 1e-12);
}

TEST(ChordComparison, RatioTendsToOne) {
  const auto a = MinkowskiPoint::from_polar(1.0, kPi), b = MinkowskiPoint::from_polar(2.0, 0.0);
  double prev = 0.0;
  for (double eps : {0.3, 0.1, 0.03}) {
    const auto c = chord_comparison(one_leaf(eps), a, b);
    EXPECT_LE(c.chord_length, c.intrinsic_length);
    const double ratio = c.chord_length / c.intrinsic_length;
    EXPECT_GT(ratio, prev);
    prev = ratio;
  }
  EXPECT_GT(prev, 0.999);
  EXPECT_THROW(chord_comparison(one_leaf(1.6), a, b), OutOfRegimeError);
}

TEST(ChordComparison, RandomInRegime) {
  std::mt19937_64 rng(36);
  int checked = 0;
  while (checked < 100) {
    const auto lam = corpus::random_convex_lamination(rng, 6, 0.05);
    const auto ps = build_pleated(BendingData(lam));
    const auto k = corpus::random_arc(rng, lam);
    if (bending_measure(ps, k) >= kPi / 2.0) continue;
    const auto c = chord_comparison(ps, k.from(), k.to());
    EXPECT_LE(c.chord_length, c.intrinsic_length + 1e-12);
    EXPECT_LE(c.exterior_angle_sum, c.bending + 1e-9);
    ++checked;
  }
}
