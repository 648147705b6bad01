#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/space.hpp"

namespace hyperdyn {

inline constexpr std::size_t kDefaultMaxPoints = 200000;

struct GridSpec {
  std::size_t dimension = 1;
  std::vector<double> lower{0.0};
  std::vector<double> upper{1.0};
  double h = 0.1;
  MetricKind metric = MetricKind::Euclidean;
  /// Torus: per-axis period (0 = not periodic). CircleGroup uses 2π on its single axis.
  std::vector<double> periods;
  /// DiscreteGroup: multiplication table (row a, column b gives a·b) and generators.
  std::vector<std::vector<std::size_t>> group_table;
  std::vector<std::size_t> generators;
  std::size_t max_points = kDefaultMaxPoints;

  static GridSpec box(std::vector<double> lower, std::vector<double> upper, double h) {
    GridSpec g;
    g.dimension = lower.size();
    g.lower = std::move(lower);
    g.upper = std::move(upper);
    g.h = h;
    return g;
  }
  static GridSpec circle_group(std::size_t n) {
    GridSpec g;
    g.dimension = 1;
    g.metric = MetricKind::CircleGroup;
    g.lower = {0.0};
    g.upper = {2.0 * std::numbers::pi};
    g.periods = {2.0 * std::numbers::pi};
    g.h = 2.0 * std::numbers::pi / static_cast<double>(n);
    return g;
  }
};

namespace detail {

inline std::size_t axis_count(double lo, double hi, double h, bool periodic) {
  const double span = hi - lo;
  if (!std::isfinite(span) || span < 0.0) throw UsageError("axis bounds must be finite with lower <= upper");
  const double q = span / h;
  if (q > 1e9) throw ResourceError("axis point count overflow");
  if (periodic) {
    const double r = std::round(q);
    if (r < 1.0 || std::fabs(q - r) > 1e-9 * std::max(1.0, r))
      throw UsageError("period must be an integer multiple of h");
    return static_cast<std::size_t>(r);
  }
  return static_cast<std::size_t>(std::floor(q + 1e-9)) + 1;
}

inline SpacePtr build_group_space(const GridSpec& spec) {
  const auto& t = spec.group_table;
  const std::size_t n = t.size();
  if (n == 0) throw UsageError("group table is empty");
  if (n > spec.max_points) throw ResourceError("group size exceeds the point cap");
  for (const auto& row : t) {
    if (row.size() != n) throw UsageError("group table must be square");
    for (auto v : row)
      if (v >= n) throw UsageError("group table entry out of range");
  }
  std::size_t e = n;
  for (std::size_t a = 0; a < n && e == n; ++a) {
    bool id = true;
    for (std::size_t b = 0; b < n && id; ++b) id = t[a][b] == b && t[b][a] == b;
    if (id) e = a;
  }
  if (e == n) throw UsageError("group table has no identity");
  std::vector<std::size_t> inv(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] == e) inv[a] = b;
  for (auto v : inv)
    if (v == n) throw UsageError("group table has an element without inverse");
  if (spec.generators.empty()) throw UsageError("discrete group needs generators");
  // Word length from the identity over generators and their inverses.
  std::vector<long> len(n, -1);
  std::deque<std::size_t> q{e};
  len[e] = 0;
  while (!q.empty()) {
    const std::size_t a = q.front();
    q.pop_front();
    for (auto g : spec.generators) {
      if (g >= n) throw UsageError("generator out of range");
      for (std::size_t s : {g, inv[g]}) {
        const std::size_t b = t[a][s];
        if (len[b] < 0) {
          len[b] = len[a] + 1;
          q.push_back(b);
        }
      }
    }
  }
  for (auto l : len)
    if (l < 0) throw UsageError("generators do not generate the group");
  std::vector<double> dist(n * n);
  std::vector<std::vector<double>> coords(n);
  for (std::size_t a = 0; a < n; ++a) {
    coords[a] = {static_cast<double>(a)};
    for (std::size_t b = 0; b < n; ++b) dist[a * n + b] = static_cast<double>(len[t[inv[a]][b]]);
  }
  return Space::make_table(std::move(coords), std::move(dist), MetricKind::DiscreteGroup);
}

}  // namespace detail

/// Lattice at spacing h over the grid's box, ordered row-major.
inline SpacePtr build_space(const GridSpec& spec) {
  if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw UsageError("h must be positive");
  if (spec.metric == MetricKind::DiscreteGroup) return detail::build_group_space(spec);
  if (spec.metric == MetricKind::Table) throw UsageError("table spaces are built from explicit distances");
  const std::size_t d = spec.dimension;
  if (d == 0 || spec.lower.size() != d || spec.upper.size() != d)
    throw UsageError("bounds must match the dimension");
  Lattice lat;
  lat.h = spec.h;
  lat.lower = spec.lower;
  lat.periodic.assign(d, false);
  std::vector<double> periods = spec.periods;
  if (spec.metric == MetricKind::CircleGroup) {
    if (d != 1) throw UsageError("circle group is one-dimensional");
    periods = {2.0 * std::numbers::pi};
  }
  if (spec.metric == MetricKind::Torus || spec.metric == MetricKind::CircleGroup) {
    if (periods.size() != d) throw UsageError("torus needs one period entry per axis");
  }
  double total = 1.0;
  for (std::size_t a = 0; a < d; ++a) {
    const bool per = (spec.metric == MetricKind::Torus || spec.metric == MetricKind::CircleGroup) && periods[a] > 0.0;
    lat.periodic[a] = per;
    const std::size_t c = per ? detail::axis_count(0.0, periods[a], spec.h, true)
                              : detail::axis_count(spec.lower[a], spec.upper[a], spec.h, false);
    lat.counts.push_back(c);
    total *= static_cast<double>(c);
  }
  if (total > static_cast<double>(spec.max_points))
    throw ResourceError("grid has " + std::to_string(static_cast<long long>(total)) + " points, cap is " +
                        std::to_string(spec.max_points));
  return Space::make_lattice(std::move(lat), spec.metric);
}

/// Validated ε-chain; throws ConstructionError carrying the validation summary.
inline AdmissibleFamily build_eps_chain(SpacePtr space, double eps1, int m) {
  auto f = AdmissibleFamily::chain(std::move(space), eps1, m);
  const auto report = validate_admissible(f);
  if (!report.ok()) throw ConstructionError("eps-chain failed validation: " + report.summary());
  return f;
}

enum class BoundaryPolicy { Error, Clamp };

/// Nearest point; ties go to the lower index. Periodic axes wrap.
inline PointIndex snap(const Space& space, std::span<const double> coords,
                       BoundaryPolicy policy = BoundaryPolicy::Error) {
  if (coords.size() != space.dim()) throw UsageError("coordinate dimension mismatch");
  if (const Lattice* lat = space.lattice()) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < lat->dim(); ++a) {
      double c = coords[a];
      if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
      const long n = static_cast<long>(lat->counts[a]);
      double q = (c - lat->lower[a]) / lat->h;
      if (lat->periodic[a]) {
        q = std::fmod(q, static_cast<double>(n));
        if (q < 0.0) q += static_cast<double>(n);
      }
      double fl = std::floor(q);
      long i = static_cast<long>(fl);
      if (q - fl > 0.5) ++i;
      if (lat->periodic[a]) {
        i %= n;
      } else if (i < 0 || i >= n) {
        const bool near = (i == -1 && q >= -0.5) || (i == n && q <= static_cast<double>(n) - 0.5);
        if (policy == BoundaryPolicy::Clamp || near)
          i = std::clamp(i, 0L, n - 1);
        else
          throw DomainError("coordinate " + std::to_string(c) + " outside the grid on axis " + std::to_string(a));
      }
      flat += static_cast<std::size_t>(i) * lat->strides[a];
    }
    return static_cast<PointIndex>(flat);
  }
  PointIndex best = 0;
  double best_d = INFINITY;
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto p = space.coords(static_cast<PointIndex>(i));
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) s += (p[a] - coords[a]) * (p[a] - coords[a]);
    if (s < best_d) {
      best_d = s;
      best = static_cast<PointIndex>(i);
    }
  }
  return best;
}

inline PointIndex snap(const Space& space, std::initializer_list<double> coords,
                       BoundaryPolicy policy = BoundaryPolicy::Error) {
  return snap(space, std::span<const double>(coords.begin(), coords.size()), policy);
}

}  // namespace hyperdyn
