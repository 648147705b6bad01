#include <gtest/gtest.h>

#include <set>

#include "hyperdyn/point_set.hpp"
#include "hyperdyn/random.hpp"

using hyperdyn::PointIndex;
using hyperdyn::PointSet;

TEST(PointSet, BasicMembership) {
  PointSet s(130);
  EXPECT_TRUE(s.empty());
  s.insert(0);
  s.insert(64);
  s.insert(129);
  EXPECT_EQ(s.count(), 3u);
  EXPECT_TRUE(s.contains(64));
  EXPECT_FALSE(s.contains(63));
  s.erase(64);
  EXPECT_EQ(s.indices(), (std::vector<PointIndex>{0, 129}));
  EXPECT_EQ(*s.first(), 0u);
}

TEST(PointSet, FullHasNoStrayBits) {
  for (std::size_t n : {1u, 63u, 64u, 65u, 200u}) {
    const auto f = PointSet::full(n);
    EXPECT_EQ(f.count(), n);
    EXPECT_TRUE((f - f).empty());
  }
}

TEST(PointSet, MaskRoundTrip) {
  const auto s = PointSet::from_mask(6, 0b101101);
  EXPECT_EQ(s.indices(), (std::vector<PointIndex>{0, 2, 3, 5}));
  EXPECT_EQ(s.low_mask(), 0b101101u);
}

TEST(PointSet, AlgebraMatchesStdSet) {
  hyperdyn::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(150);
    PointSet a(n), b(n);
    std::set<PointIndex> sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.coin()) a.insert(static_cast<PointIndex>(i)), sa.insert(static_cast<PointIndex>(i));
      if (rng.coin()) b.insert(static_cast<PointIndex>(i)), sb.insert(static_cast<PointIndex>(i));
    }
    std::set<PointIndex> u, x, d;
    for (auto v : sa) {
      u.insert(v);
      if (sb.count(v)) x.insert(v);
      else d.insert(v);
    }
    for (auto v : sb) u.insert(v);
    auto as_set = [](const PointSet& p) {
      auto v = p.indices();
      return std::set<PointIndex>(v.begin(), v.end());
    };
    EXPECT_EQ(as_set(a | b), u);
    EXPECT_EQ(as_set(a & b), x);
    EXPECT_EQ(as_set(a - b), d);
    EXPECT_EQ(a.intersects(b), !x.empty());
    EXPECT_EQ(a.subset_of(b), d.empty());
    const auto miss = a.first_not_in(b);
    EXPECT_EQ(miss.has_value(), !d.empty());
    if (miss) EXPECT_EQ(*miss, *d.begin());
  }
}

TEST(PointSet, MismatchedUniverseThrows) {
  PointSet a(5), b(6);
  EXPECT_THROW(a |= b, hyperdyn::UsageError);
}
