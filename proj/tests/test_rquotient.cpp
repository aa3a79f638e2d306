#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "hypbend/rquotient.hpp"

using namespace hypbend;

namespace {

constexpr double kPi = std::numbers::pi;

AbstractLamination random_abstract(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 5), eighths(1, 48), coin(0, 1);
  std::vector<AbstractLeaf> leaves;
  const int m = count(rng);
  for (int i = 0; i < m; ++i) {
    // Ids come from a small alphabet so random pairs share leaves.
    leaves.push_back({"l" + std::to_string(i), coin(rng) == 1, eighths(rng) / 8.0});
  }
  return AbstractLamination(std::move(leaves));
}

}  // namespace

TEST(Truncate, Examples) {
  const AbstractLamination low({{"a", true, 1.0}, {"b", false, 2.0}});
  EXPECT_EQ(truncate(low).canonical(), low);
  const AbstractLamination high({{"a", true, 4.0}, {"b", false, 4.0}});
  EXPECT_EQ(truncate(high).canonical().find("a")->weight, kPi);
  EXPECT_EQ(truncate(high).canonical().find("b")->weight, 4.0);
}

TEST(REquivalence, Examples) {
  const AbstractLamination a({{"c", true, 3.5}, {"d", false, 0.3}});
  const AbstractLamination b({{"c", true, 5.0}, {"d", false, 0.3}});
  EXPECT_TRUE(r_equivalent(a, a));
  EXPECT_TRUE(r_equivalent(a, b));
  EXPECT_FALSE(r_equivalent(AbstractLamination({{"c", true, 3.0}}), AbstractLamination({{"c", true, 3.1}})));
}

TEST(PiPart, Modes) {
  EXPECT_TRUE(pi_part(AbstractLamination({{"o", false, 5.0}}), PiMode::AtLeast).empty());
  const AbstractLamination lam({{"p", true, kPi}, {"q", true, 3.5}, {"o", false, 4.0}});
  EXPECT_EQ(pi_part(lam, PiMode::AtLeast), (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(pi_part(lam, PiMode::StrictlyGreater), (std::set<std::string>{"q"}));
}

TEST(ArcIntegral, Examples) {
  const AbstractLamination lam({{"a", false, 0.3}});
  EXPECT_EQ(arc_integral(TestArc(), lam), 0.0);
  EXPECT_DOUBLE_EQ(arc_integral(TestArc({{"a", 2}}), lam), 0.6);
  EXPECT_DOUBLE_EQ(arc_integral(TestArc({{"a", 2}, {"zz", 3}}), lam), 0.6);
  EXPECT_THROW(TestArc({{"a", 0}}), ValidationError);
}

TEST(Laws, ExhaustiveOnRationalCorpus) {
  std::mt19937_64 rng(61);
  std::vector<AbstractLamination> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(random_abstract(rng));
  std::vector<TestArc> arcs;
  for (int i = 0; i < 5; ++i) {
    arcs.push_back(TestArc({{"l" + std::to_string(i), 1}}));
    arcs.push_back(TestArc({{"l" + std::to_string(i), 2}, {"l" + std::to_string((i + 1) % 5), 1}}));
  }
  for (const auto& a : corpus) {
    EXPECT_EQ(truncate(truncate(a).canonical()), truncate(a));
    EXPECT_TRUE(r_equivalent(a, a));
    for (const auto& k : arcs) EXPECT_LE(arc_integral(k, truncate(a).canonical()), arc_integral(k, a));
  }
  for (const auto& a : corpus) {
    for (const auto& b : corpus) {
      EXPECT_EQ(r_equivalent(a, b), r_equivalent(b, a));
      if (!r_equivalent(a, b)) continue;
      for (const auto& c : corpus) {
        if (r_equivalent(b, c)) EXPECT_TRUE(r_equivalent(a, c));
      }
    }
  }
}

TEST(QuotientConvergence, ConstantSequence) {
  const AbstractLamination lam({{"c", true, 2.0}, {"d", false, 0.3}});
  EXPECT_TRUE(quotient_convergence_check(std::vector<AbstractLamination>(20, lam), lam, fixtures::cd_arcs()).pass);
}

TEST(QuotientConvergence, TwoSidedApproachToPi) {
  const AbstractLamination limit({{"c", true, kPi}, {"d", false, 0.3}});
  for (double sign : {1.0, -1.0}) {
    const auto seq = fixtures::pi_family(sign, [](double) { return 0.3; });
    const auto r = quotient_convergence_check(seq, limit, fixtures::cd_arcs());
    EXPECT_TRUE(r.pass) << sign;
    EXPECT_TRUE(r.arcs[0].crosses_pi_part);
    EXPECT_TRUE(r.arcs[0].liminf_ok);
    // Well defined on the quotient: an R-equivalent candidate passes too.
    const AbstractLamination other({{"c", true, 4.5}, {"d", false, 0.3}});
    EXPECT_TRUE(quotient_convergence_check(seq, other, fixtures::cd_arcs()).pass);
  }
}

TEST(QuotientConvergence, WrongOpenWeightFailsWithWitness) {
  const AbstractLamination limit({{"c", true, kPi}, {"d", false, 0.3}});
  const auto seq = fixtures::pi_family(1.0, [](double n) { return 0.5 + 1.0 / n; });
  const auto r = quotient_convergence_check(seq, limit, fixtures::cd_arcs());
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, 1u);
}

TEST(Separation, Examples) {
  const std::vector<TestArc> pool = {TestArc({{"c", 1}}), TestArc({{"d", 1}}), TestArc({{"e", 1}}),
                                     TestArc({{"c", 1}, {"d", 1}})};
  const AbstractLamination a({{"c", true, kPi}, {"d", false, 0.3}});
  EXPECT_TRUE(separation_witness(truncate(a), truncate(a), pool).equal);

  const AbstractLamination b({{"c", true, kPi}, {"d", false, 0.5}});
  const auto s = separation_witness(truncate(a), truncate(b), pool);
  EXPECT_FALSE(s.equal);
  ASSERT_TRUE(s.arc.has_value());
  EXPECT_EQ(s.arc->crossings(), (std::vector<std::pair<std::string, int>>{{"d", 1}}));
  EXPECT_NEAR(s.gap, 0.2, 1e-15);

  const AbstractLamination c({{"c", true, 4.0}, {"e", true, 3.5}, {"d", false, 0.3}});
  const auto t = separation_witness(truncate(a), truncate(c), pool);
  ASSERT_TRUE(t.arc.has_value());
  EXPECT_EQ(t.arc->crossings(), (std::vector<std::pair<std::string, int>>{{"e", 1}}));

  EXPECT_THROW(separation_witness(truncate(a), truncate(b), {TestArc({{"c", 1}, {"d", 1}})}), CannotDecideError);
}

TEST(SupportInclusion, Examples) {
  const FiniteLamination2 lam({Leaf2::make("a", 0.0, 2.0, 1.0), Leaf2::make("b", 3.0, 4.5, 1.0)});
  const auto constant = support_inclusion_check(std::vector<FiniteLamination2>(12, lam), lam);
  EXPECT_EQ(constant.verdict, InclusionVerdict::Pass);
  for (double g : constant.gaps) EXPECT_LT(g, 1e-9);

  std::vector<FiniteLamination2> moving;
  for (int n = 1; n <= 4000; n *= 2) {
    const double h = 1.0 / n;
    moving.push_back(FiniteLamination2({Leaf2::make("a", h, 2.0 + h, 1.0), Leaf2::make("b", 3.0, 4.5, 1.0)}));
  }
  const auto r = support_inclusion_check(moving, lam, 3.0, 1e-1, 3);
  EXPECT_EQ(r.verdict, InclusionVerdict::Pass);
  // Gap ~ C/n once h e^R is small: halving h roughly halves the gap.
  for (std::size_t i = 5; i + 1 < r.gaps.size(); ++i) EXPECT_NEAR(r.gaps[i + 1] / r.gaps[i], 0.5, 0.1);

  const FiniteLamination2 missing({Leaf2::make("a", 0.0, 2.0, 1.0)});
  const auto f = support_inclusion_check(std::vector<FiniteLamination2>(12, missing), lam);
  EXPECT_EQ(f.verdict, InclusionVerdict::Fail);
  ASSERT_TRUE(f.witness.has_value());
  EXPECT_LT(Leaf2::make("b", 3.0, 4.5, 1.0).geodesic().distance_to(*f.witness), 1e-9);
}
