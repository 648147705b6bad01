#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyperdyn/phase_space.hpp"

using namespace hyperdyn;

TEST(PhaseSpace, BoxGridCountsAndCoords) {
  auto s = build_space(GridSpec::box({-2.0, -2.0}, {2.0, 2.0}, 0.05));
  EXPECT_EQ(s->size(), 81u * 81u);
  const auto i = snap(*s, {1.0, -0.5});
  EXPECT_NEAR(s->coords(i)[0], 1.0, 1e-12);
  EXPECT_NEAR(s->coords(i)[1], -0.5, 1e-12);
  EXPECT_NEAR(s->distance(snap(*s, {0.0, 0.0}), snap(*s, {0.3, 0.4})), 0.5, 1e-12);
}

TEST(PhaseSpace, SnapBoundaryPolicy) {
  auto s = build_space(GridSpec::box({0.0}, {1.0}, 0.1));
  EXPECT_EQ(snap(*s, {1.04}), 10u);
  EXPECT_THROW(snap(*s, {1.2}), DomainError);
  EXPECT_EQ(snap(*s, {1.2}, BoundaryPolicy::Clamp), 10u);
  EXPECT_EQ(snap(*s, {-7.0}, BoundaryPolicy::Clamp), 0u);
  EXPECT_THROW(snap(*s, {NAN}), DomainError);
  EXPECT_THROW(snap(*s, {0.1, 0.2}), UsageError);
}

TEST(PhaseSpace, TorusWraps) {
  GridSpec g = GridSpec::box({0.0}, {1.0}, 0.1);
  g.metric = MetricKind::Torus;
  g.periods = {1.0};
  auto s = build_space(g);
  EXPECT_EQ(s->size(), 10u);
  EXPECT_NEAR(s->distance(0, 9), 0.1, 1e-12);
  EXPECT_EQ(snap(*s, {1.0}), 0u);
  EXPECT_EQ(snap(*s, {-0.1}), 9u);
}

TEST(PhaseSpace, TorusPeriodMustDivide) {
  GridSpec g = GridSpec::box({0.0}, {1.0}, 0.3);
  g.metric = MetricKind::Torus;
  g.periods = {1.0};
  EXPECT_THROW(build_space(g), UsageError);
}

TEST(PhaseSpace, CircleGroupArcDistance) {
  auto s = build_space(GridSpec::circle_group(360));
  EXPECT_EQ(s->size(), 360u);
  const double step = 2.0 * std::numbers::pi / 360.0;
  EXPECT_NEAR(s->distance(0, 359), step, 1e-9);
  EXPECT_NEAR(s->distance(0, 180), std::numbers::pi, 1e-9);
}

TEST(PhaseSpace, DiscreteGroupWordMetric) {
  GridSpec g;
  g.metric = MetricKind::DiscreteGroup;
  const std::size_t n = 6;
  g.group_table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g.group_table[a][b] = (a + b) % n;
  g.generators = {1};
  auto s = build_space(g);
  EXPECT_EQ(s->distance(0, 3), 3.0);
  EXPECT_EQ(s->distance(1, 5), 2.0);
  g.generators = {2};
  EXPECT_THROW(build_space(g), UsageError);
}

TEST(PhaseSpace, PointCapEnforced) {
  GridSpec g = GridSpec::box({0.0, 0.0}, {1.0, 1.0}, 0.01);
  g.max_points = 1000;
  EXPECT_THROW(build_space(g), ResourceError);
}

TEST(PhaseSpace, BadBoundsRejected) {
  EXPECT_THROW(build_space(GridSpec::box({1.0}, {0.0}, 0.1)), UsageError);
  EXPECT_THROW(build_space(GridSpec::box({0.0}, {1.0}, 0.0)), UsageError);
}

TEST(PhaseSpace, EpsChainValidates) {
  auto s = build_space(GridSpec::box({0.0}, {1.0}, 0.1));
  EXPECT_NO_THROW(build_eps_chain(s, 0.8, 5));
  EXPECT_THROW(build_eps_chain(s, -1.0, 5), UsageError);
}
