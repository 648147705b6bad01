#include <gtest/gtest.h>

#include "hyperdyn/continuity.hpp"
#include "hyperdyn/phase_space.hpp"
#include "hyperdyn/scenarios.hpp"
#include "oracle/brute_force.hpp"

using namespace hyperdyn;

namespace {

std::vector<AdmissibleFamily> corpus(std::uint64_t seed = 77, std::size_t count = 40) {
  return random_corpus(seed, count, 6, 4);
}

template <class F>
void for_subset_pairs(std::size_t n, F&& f) {
  const std::uint64_t top = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t a = 1; a <= top; ++a)
    for (std::uint64_t b = 1; b <= top; ++b) f(a, b);
}

}  // namespace

TEST(Hyperspace, RhoHAndOneSidedMatchOracleOnCorpus) {
  for (const auto& f : corpus()) {
    const auto o = oracle::from_explicit(f);
    const std::size_t n = o.n;
    for_subset_pairs(n, [&](std::uint64_t am, std::uint64_t bm) {
      const auto A = PointSet::from_mask(n, am), B = PointSet::from_mask(n, bm);
      const auto a = oracle::from_ps(A), b = oracle::from_ps(B);
      ASSERT_EQ(oracle::from_upset(rho_H(f, A, B), f.size()), oracle::rho_H(o, a, b));
      ASSERT_EQ(oracle::from_upset(rho_one_sided(f, A, B), f.size()), oracle::rho_one(o, a, b));
      for (int k = 1; k <= f.size(); ++k) ASSERT_EQ(in_ball_BH(f, B, A, k), oracle::in_ball(o, b, a, k) != 0);
    });
  }
}

TEST(Hyperspace, DiameterMatchesOracle) {
  for (const auto& f : corpus()) {
    const auto o = oracle::from_explicit(f);
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << o.n); ++m) {
      const auto Y = PointSet::from_mask(o.n, m);
      ASSERT_EQ(oracle::from_upset(diameter(f, Y), f.size()), oracle::diameter(o, oracle::from_ps(Y)));
    }
  }
}

TEST(Hyperspace, ChainDiameterMatchesOracleAboveAndBelowPairLimit) {
  const auto s = build_space(GridSpec::box({0.0, 0.0}, {1.0, 1.0}, 0.1));
  const auto f = build_eps_chain(s, 1.6, 5);
  const auto o = oracle::from_chain(f);
  Rng rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    oracle::Set Y(o.n, 0);
    const std::size_t want = trial < 6 ? 5 : 80;
    for (std::size_t i = 0; i < want; ++i) Y[rng.below(o.n)] = 1;
    ASSERT_EQ(oracle::from_upset(diameter(f, oracle::to_ps(Y)), f.size()), oracle::diameter(o, Y));
    oracle::Set Z(o.n, 0);
    for (std::size_t i = 0; i < (trial < 6 ? 4u : 300u); ++i) Z[rng.below(o.n)] = 1;
    ASSERT_EQ(oracle::from_upset(rho_H(f, oracle::to_ps(Y), oracle::to_ps(Z)), f.size()), oracle::rho_H(o, Y, Z));
  }
}

TEST(Hyperspace, VietorisMembershipMatchesOracle) {
  for (const auto& f : corpus(3, 15)) {
    const auto o = oracle::from_explicit(f);
    for (int k = 1; k <= f.size(); ++k) {
      const auto U = f.covering(k);
      for_subset_pairs(o.n, [&](std::uint64_t am, std::uint64_t bm) {
        const auto A = PointSet::from_mask(o.n, am), B = PointSet::from_mask(o.n, bm);
        ASSERT_EQ(vietoris_member(B, A, U), oracle::vietoris(o.coverings[k - 1], oracle::from_ps(A), oracle::from_ps(B)));
      });
    }
  }
}

TEST(Hyperspace, NoncompactnessCountsMatchOracle) {
  for (const auto& f : corpus(19, 30)) {
    const auto o = oracle::from_explicit(f);
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << o.n); ++m) {
      const auto Y = PointSet::from_mask(o.n, m);
      for (int k = 1; k <= f.size(); ++k) {
        const auto r = noncompactness(f, Y, k, 2);
        ASSERT_TRUE(r.alpha_exact && r.gamma_exact);
        ASSERT_EQ(r.alpha_count, oracle::alpha_count(o, oracle::from_ps(Y), k));
        ASSERT_EQ(r.gamma_count, oracle::gamma_count(o, oracle::from_ps(Y), k));
        ASSERT_EQ(r.alpha, r.alpha_count <= 2);
      }
    }
  }
}

TEST(Hyperspace, NoncompactnessGreedyBoundsAboveExact) {
  const auto s = build_space(GridSpec::box({0.0}, {2.0}, 0.1));
  const auto f = build_eps_chain(s, 0.8, 4);
  const auto Y = PointSet::full(s->size());
  const auto r = noncompactness(f, Y, 2, 100);
  EXPECT_FALSE(r.alpha_exact);
  EXPECT_GE(r.gamma_count, r.alpha_count);
  EXPECT_GE(r.alpha_count, 2u);  // two stars of width 1.4 are needed for a length of 2
  EXPECT_THROW(noncompactness(f, Y, 2, 0), UsageError);
}

TEST(Hyperspace, KuratowskiLimitsMatchOracle) {
  Rng rng(31);
  for (const auto& f : corpus(5, 25)) {
    const auto o = oracle::from_explicit(f);
    for (int t = 0; t < 20; ++t) {
      const auto seq = random_periodic_sequence(o.n, rng);
      const auto [b, e] = seq.tail_range();
      std::vector<oracle::Set> tail;
      for (std::size_t i = b; i < e; ++i) tail.push_back(oracle::from_ps(seq.terms()[i]));
      const auto [ls, li] = oracle::kuratowski(o, tail);
      const auto lim = kuratowski_limits_all(f, seq);
      ASSERT_EQ(oracle::from_ps(lim.LS), ls);
      ASSERT_EQ(oracle::from_ps(lim.LI), li);
      EXPECT_FALSE(lim.approximate);
    }
  }
}

TEST(Hyperspace, ObservedWindowIsApproximate) {
  const auto s = Space::make_points({{0.0}, {1.0}});
  const auto f = AdmissibleFamily::explicit_family(s, {Covering({PointSet::singleton(2, 0), PointSet::singleton(2, 1)})});
  SetSequence seq({PointSet::singleton(2, 0), PointSet::singleton(2, 1), PointSet::singleton(2, 1)},
                  TailSpec::observed(2));
  const auto lim = kuratowski_limits(f, seq, 1);
  EXPECT_TRUE(lim.approximate);
  ASSERT_TRUE(lim.window.has_value());
  EXPECT_EQ(*lim.window, 2u);
  EXPECT_EQ(lim.LS, PointSet::singleton(2, 1));
}

TEST(Hyperspace, SetSequenceRejectsBrokenPeriod) {
  EXPECT_THROW(SetSequence({PointSet::singleton(2, 0), PointSet::singleton(2, 1), PointSet::singleton(2, 1)},
                           TailSpec::periodic(0, 2)),
               UsageError);
  EXPECT_THROW(SetSequence({PointSet(2)}), UsageError);
}

TEST(Hyperspace, EmptySetsRejected) {
  const auto f = corpus(1, 1).front();
  const std::size_t n = f.space().size();
  EXPECT_THROW(rho_H(f, PointSet(n), PointSet::full(n)), UsageError);
  EXPECT_THROW(diameter(f, PointSet(n)), UsageError);
}

TEST(Hyperspace, MetricHausdorff) {
  const auto s = build_space(GridSpec::box({0.0}, {1.0}, 0.1));
  const auto A = PointSet::of(s->size(), {0u, 10u});
  const auto B = PointSet::of(s->size(), {0u});
  EXPECT_NEAR(metric_hausdorff(*s, A, B), 1.0, 1e-12);
  EXPECT_NEAR(metric_hausdorff(*s, A, A), 0.0, 1e-12);
}

TEST(Hyperspace, LineExampleThreshold) {
  // A = {0}, B = {0, 0.3} on the 0.1-grid of [0,1] with ε_1 = 0.8: 0.3 < ε_2 = 0.4 only.
  const auto s = build_space(GridSpec::box({0.0}, {1.0}, 0.1));
  const auto f = build_eps_chain(s, 0.8, 5);
  const auto A = PointSet::of(s->size(), {0u});
  const auto B = PointSet::of(s->size(), {0u, 3u});
  EXPECT_EQ(rho_H(f, A, B).threshold(), 2);
  EXPECT_TRUE(rho_one_sided(f, B, A).is_full());
  EXPECT_EQ(rho_one_sided(f, A, B).threshold(), 2);
}
