#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdyn/errors.hpp"
#include "hyperdyn/point_set.hpp"

namespace hyperdyn {

enum class MetricKind { Euclidean, Torus, CircleGroup, DiscreteGroup, Table };

inline const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Torus: return "torus";
    case MetricKind::CircleGroup: return "circle_group";
    case MetricKind::DiscreteGroup: return "discrete_group";
    case MetricKind::Table: return "table";
  }
  return "unknown";
}

/// Regular grid: counts per axis, spacing h, optional periodic axes.
/// Points are ordered row-major (last axis varies fastest).
struct Lattice {
  std::vector<std::size_t> counts;
  std::vector<double> lower;
  double h = 0.0;
  std::vector<bool> periodic;
  std::vector<std::size_t> strides;

  std::size_t dim() const { return counts.size(); }

  void finalize() {
    strides.assign(counts.size(), 1);
    for (std::size_t a = counts.size(); a-- > 1;) strides[a - 1] = strides[a] * counts[a];
  }
  std::size_t size() const {
    std::size_t n = 1;
    for (auto c : counts) n *= c;
    return n;
  }
  long axis_index(PointIndex i, std::size_t a) const {
    return static_cast<long>((i / strides[a]) % counts[a]);
  }
  /// Offset along axis a, reduced to the minimal image on periodic axes.
  long axis_offset(long from, long to, std::size_t a) const {
    long o = to - from;
    if (periodic[a]) {
      const long n = static_cast<long>(counts[a]);
      o = ((o % n) + n) % n;
      if (o > n - o) o -= n;
    }
    return o;
  }
  /// Squared integer length of the minimal offset between two points.
  long offset_norm2(PointIndex i, PointIndex j) const {
    long s = 0;
    for (std::size_t a = 0; a < counts.size(); ++a) {
      const long o = axis_offset(axis_index(i, a), axis_index(j, a), a);
      s += o * o;
    }
    return s;
  }
  /// Lattice length h*sqrt(n2); every distance on a lattice goes through here so
  /// that ball tests and pair tests compare identical doubles.
  double length(long n2) const { return h * std::sqrt(static_cast<double>(n2)); }
};

/// Finite indexed point set with a metric.
class Space {
 public:
  static std::shared_ptr<const Space> make_lattice(Lattice lat, MetricKind kind) {
    lat.finalize();
    auto s = std::shared_ptr<Space>(new Space());
    s->kind_ = kind;
    s->n_ = lat.size();
    s->dim_ = lat.dim();
    s->coords_.resize(s->n_ * s->dim_);
    for (std::size_t i = 0; i < s->n_; ++i)
      for (std::size_t a = 0; a < s->dim_; ++a)
        s->coords_[i * s->dim_ + a] =
            lat.lower[a] + static_cast<double>(lat.axis_index(static_cast<PointIndex>(i), a)) * lat.h;
    s->lattice_ = std::move(lat);
    return s;
  }

  /// Space given by coordinates and a full distance table (row-major n*n).
  static std::shared_ptr<const Space> make_table(std::vector<std::vector<double>> coords,
                                                 std::vector<double> dist,
                                                 MetricKind kind = MetricKind::Table) {
    const std::size_t n = coords.size();
    if (n == 0) throw UsageError("space needs at least one point");
    if (dist.size() != n * n) throw UsageError("distance table must be n*n");
    const std::size_t d = coords[0].size();
    auto s = std::shared_ptr<Space>(new Space());
    s->kind_ = kind;
    s->n_ = n;
    s->dim_ = d;
    for (const auto& c : coords) {
      if (c.size() != d) throw UsageError("inconsistent coordinate dimension");
      s->coords_.insert(s->coords_.end(), c.begin(), c.end());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i * n + i] != 0.0) throw UsageError("metric(i,i) must be 0");
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = dist[i * n + j];
        if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("metric must be positive off the diagonal");
        if (a != dist[j * n + i]) throw UsageError("metric must be symmetric");
      }
    }
    s->table_ = std::move(dist);
    return s;
  }

  /// Euclidean space on explicit coordinates.
  static std::shared_ptr<const Space> make_points(const std::vector<std::vector<double>>& coords) {
    const std::size_t n = coords.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        if (coords[i].size() != coords[j].size()) throw UsageError("inconsistent coordinate dimension");
        for (std::size_t a = 0; a < coords[i].size(); ++a) {
          const double d = coords[i][a] - coords[j][a];
          s += d * d;
        }
        dist[i * n + j] = std::sqrt(s);
      }
    return make_table(coords, std::move(dist), MetricKind::Euclidean);
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  MetricKind metric_kind() const { return kind_; }
  const Lattice* lattice() const { return lattice_ ? &*lattice_ : nullptr; }

  std::span<const double> coords(PointIndex i) const {
    return std::span<const double>(coords_.data() + static_cast<std::size_t>(i) * dim_, dim_);
  }
  std::vector<double> point(PointIndex i) const {
    auto c = coords(i);
    return {c.begin(), c.end()};
  }

  double distance(PointIndex a, PointIndex b) const {
    if (lattice_) return lattice_->length(lattice_->offset_norm2(a, b));
    return table_[static_cast<std::size_t>(a) * n_ + b];
  }

  /// Grid spacing for lattices, smallest pairwise distance otherwise.
  double resolution() const {
    if (lattice_) return lattice_->h;
    double r = INFINITY;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) r = std::min(r, table_[i * n_ + j]);
    return n_ > 1 ? r : 0.0;
  }

  PointSet empty_set() const { return PointSet(n_); }
  PointSet full_set() const { return PointSet::full(n_); }

 private:
  Space() = default;

  MetricKind kind_ = MetricKind::Table;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::optional<Lattice> lattice_;
  std::vector<double> table_;
};

using SpacePtr = std::shared_ptr<const Space>;

}  // namespace hyperdyn
