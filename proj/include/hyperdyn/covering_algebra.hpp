#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyperdyn/errors.hpp"
#include "hyperdyn/point_set.hpp"
#include "hyperdyn/space.hpp"

namespace hyperdyn {

/// A covering of a finite space by nonempty members.
class Covering {
 public:
  Covering() = default;
  explicit Covering(std::vector<PointSet> members, int level_id = 0)
      : members_(std::move(members)), level_id_(level_id) {
    if (members_.empty()) throw UsageError("covering needs at least one member");
    const std::size_t n = members_.front().universe();
    PointSet all(n);
    for (const auto& m : members_) {
      if (m.universe() != n) throw UsageError("covering members over different spaces");
      if (m.empty()) throw UsageError("covering members must be nonempty");
      all |= m;
    }
    if (all.count() != n) throw UsageError("members do not cover the space");
  }

  const std::vector<PointSet>& members() const { return members_; }
  std::size_t universe() const { return members_.empty() ? 0 : members_.front().universe(); }
  int level_id() const { return level_id_; }

 private:
  std::vector<PointSet> members_;
  int level_id_ = 0;
};

inline void require_same_space(const Covering& a, const Covering& b) {
  if (a.universe() != b.universe()) throw UsageError("coverings over different spaces");
}

/// V ≤ U: every member of V lies in some member of U.
inline bool refines(const Covering& V, const Covering& U) {
  require_same_space(V, U);
  for (const auto& v : V.members()) {
    bool inside = false;
    for (const auto& u : U.members())
      if (v.subset_of(u)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

/// V ≤ ½U: every intersecting pair of V-members fits inside one U-member.
inline bool double_refines(const Covering& V, const Covering& U) {
  require_same_space(V, U);
  const auto& vm = V.members();
  for (std::size_t i = 0; i < vm.size(); ++i)
    for (std::size_t j = i; j < vm.size(); ++j) {
      if (!vm[i].intersects(vm[j])) continue;
      const PointSet uni = vm[i] | vm[j];
      bool inside = false;
      for (const auto& u : U.members())
        if (uni.subset_of(u)) {
          inside = true;
          break;
        }
      if (!inside) return false;
    }
  return true;
}

/// St[Y,U]: union of the members of U meeting Y.
inline PointSet star(const PointSet& Y, const Covering& U) {
  if (Y.universe() != U.universe()) throw UsageError("set and covering over different spaces");
  if (Y.empty()) throw UsageError("star of an empty set");
  PointSet out(Y.universe());
  for (const auto& m : U.members())
    if (m.intersects(Y)) out |= m;
  return out;
}

namespace detail {

struct FamilyCore {
  SpacePtr space;
  bool chain = true;
  int m = 0;
  std::vector<double> eps;
  bool discrete_finest = false;

  std::vector<Covering> coverings;
  std::vector<std::vector<PointSet>> point_star;
  std::vector<std::uint64_t> refines_above;
  std::vector<std::uint64_t> halves_above;

  std::vector<std::vector<int>> stencils;
  /// Offsets reachable through one ball center (B + B), built on first use.
  mutable std::vector<std::shared_ptr<const std::vector<int>>> star_stencils;
  std::vector<std::vector<std::vector<PointIndex>>> balls;

  mutable std::mutex cache_mu;
  mutable std::unordered_map<std::uint64_t, long> r2_cache;
  mutable std::unordered_map<std::uint64_t, int> pair_cache;
};

}  // namespace detail

/// Element of P(O): an upward-hereditary set of covering levels, stored as a
/// bitmask (bit k-1 is level k). Valid while its family is alive.
class UpSet {
 public:
  UpSet() = default;
  UpSet(const detail::FamilyCore* fam, std::uint64_t mask) : fam_(fam), mask_(mask) {}

  bool contains(int level) const {
    return level >= 1 && level <= 64 && ((mask_ >> (level - 1)) & 1u) != 0;
  }
  std::uint64_t mask() const { return mask_; }
  int family_size() const { return fam_ ? fam_->m : 0; }
  const detail::FamilyCore* family() const { return fam_; }
  bool is_full() const { return fam_ && mask_ == full_mask(fam_->m); }
  bool is_empty() const { return mask_ == 0; }
  /// Number of leading levels 1..t contained; the chain representation.
  int threshold() const { return std::countr_one(mask_); }

  static std::uint64_t full_mask(int m) {
    return m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  }

  friend bool operator==(const UpSet& a, const UpSet& b) {
    return a.fam_ == b.fam_ && a.mask_ == b.mask_;
  }

 private:
  const detail::FamilyCore* fam_ = nullptr;
  std::uint64_t mask_ = 0;
};

/// E1 ≺ E2 in the inverse-inclusion order, i.e. E1 ⊇ E2.
inline bool precedes(const UpSet& a, const UpSet& b) {
  if (a.family() != b.family()) throw UsageError("upsets from different families");
  return (b.mask() & ~a.mask()) == 0;
}

inline UpSet upset_meet(const UpSet& a, const UpSet& b) {
  if (a.family() != b.family()) throw UsageError("upsets from different families");
  return UpSet(a.family(), a.mask() & b.mask());
}

inline UpSet upset_join(const UpSet& a, const UpSet& b) {
  if (a.family() != b.family()) throw UsageError("upsets from different families");
  return UpSet(a.family(), a.mask() | b.mask());
}

/// nE = {U : ∃V ∈ E, V ≤ 1/2ⁿ U}.
inline UpSet upset_shift(const UpSet& e, int n) {
  if (n < 1) throw UsageError("shift needs n >= 1");
  const auto* f = e.family();
  if (!f) throw UsageError("upset without family");
  std::uint64_t cur = e.mask();
  for (int step = 0; step < n && cur; ++step) {
    std::uint64_t next = 0;
    for (std::uint64_t bits = cur; bits; bits &= bits - 1) next |= f->halves_above[std::countr_zero(bits)];
    cur = next;
  }
  return UpSet(f, cur);
}

struct ValidationReport {
  bool directed = true;
  std::vector<std::pair<int, int>> undirected_pairs;
  bool basis = true;
  std::vector<PointIndex> basis_violations;
  bool halving_checked = false;
  bool halving = true;
  std::vector<int> halving_violations;

  bool ok() const { return directed && basis && halving; }

  std::string summary() const {
    std::ostringstream os;
    os << "directedness " << (directed ? "pass" : "fail");
    for (auto [a, b] : undirected_pairs) os << " (" << a << "," << b << ")";
    os << "; basis " << (basis ? "pass" : "fail");
    if (!basis_violations.empty()) {
      os << " at points";
      for (std::size_t i = 0; i < basis_violations.size() && i < 8; ++i) os << ' ' << basis_violations[i];
      if (basis_violations.size() > 8) os << " ...";
    }
    if (halving_checked) {
      os << "; consecutive double-refinement " << (halving ? "pass" : "fail");
      for (int k : halving_violations) os << " " << k;
    }
    return os.str();
  }
};

/// Ordered finite family of coverings: an ε-ball chain or an explicit list.
class AdmissibleFamily {
 public:
  enum class Kind { Chain, Explicit };

  AdmissibleFamily() = default;

  /// Chain U_k = {B(c, ε_k)} with ε_k = eps1 / 2^{k-1}; not validated here.
  static AdmissibleFamily chain(SpacePtr space, double eps1, int m) {
    if (!space) throw UsageError("family needs a space");
    if (!(eps1 > 0.0) || !std::isfinite(eps1)) throw UsageError("eps1 must be positive");
    if (m < 1 || m > 64) throw UsageError("chain level count must be in 1..64");
    auto core = std::make_shared<detail::FamilyCore>();
    core->space = std::move(space);
    core->chain = true;
    core->m = m;
    for (int k = 0; k < m; ++k) core->eps.push_back(std::ldexp(eps1, -k));
    AdmissibleFamily f;
    f.core_ = core;
    f.build_chain_geometry();
    f.build_chain_relations();
    return f;
  }

  static AdmissibleFamily explicit_family(SpacePtr space, std::vector<Covering> coverings) {
    if (!space) throw UsageError("family needs a space");
    if (coverings.empty() || coverings.size() > 64)
      throw UsageError("explicit family needs 1..64 coverings");
    auto core = std::make_shared<detail::FamilyCore>();
    core->space = std::move(space);
    core->chain = false;
    core->m = static_cast<int>(coverings.size());
    const std::size_t n = core->space->size();
    for (std::size_t k = 0; k < coverings.size(); ++k) {
      if (coverings[k].universe() != n) throw UsageError("covering over a different space");
      coverings[k] = Covering(coverings[k].members(), static_cast<int>(k + 1));
    }
    core->coverings = std::move(coverings);
    core->point_star.resize(core->coverings.size());
    for (std::size_t k = 0; k < core->coverings.size(); ++k) {
      auto& table = core->point_star[k];
      table.assign(n, PointSet(n));
      for (const auto& mem : core->coverings[k].members())
        mem.for_each([&](PointIndex x) { table[x] |= mem; });
    }
    const int m = core->m;
    core->refines_above.assign(m, 0);
    core->halves_above.assign(m, 0);
    for (int v = 0; v < m; ++v)
      for (int u = 0; u < m; ++u) {
        if (refines(core->coverings[v], core->coverings[u])) core->refines_above[v] |= std::uint64_t{1} << u;
        if (double_refines(core->coverings[v], core->coverings[u]))
          core->halves_above[v] |= std::uint64_t{1} << u;
      }
    AdmissibleFamily f;
    f.core_ = core;
    return f;
  }

  Kind kind() const { return core().chain ? Kind::Chain : Kind::Explicit; }
  bool is_chain() const { return core().chain; }
  int size() const { return core().m; }
  const Space& space() const { return *core().space; }
  const SpacePtr& space_ptr() const { return core().space; }
  const detail::FamilyCore* id() const { return core_.get(); }

  double eps(int level) const {
    check_level(level);
    if (!is_chain()) throw UsageError("eps is defined for chain families only");
    return core().eps[level - 1];
  }
  const std::vector<double>& radii() const { return core().eps; }

  void check_level(int level) const {
    if (level < 1 || level > size())
      throw UsageError("covering level " + std::to_string(level) + " outside 1.." + std::to_string(size()));
  }

  /// Ball B(c, ε_k) of a chain family.
  PointSet ball(PointIndex c, int level) const {
    check_level(level);
    if (!is_chain()) throw UsageError("balls exist for chain families only");
    PointSet out(space().size());
    add_ball(c, level, out);
    return out;
  }

  PointSet star(const PointSet& Y, int level) const {
    check_level(level);
    if (Y.universe() != space().size()) throw UsageError("set over a different space");
    if (Y.empty()) throw UsageError("star of an empty set");
    const std::size_t n = space().size();
    if (!is_chain()) {
      PointSet out(n);
      const auto& table = core().point_star[level - 1];
      Y.for_each([&](PointIndex y) { out |= table[y]; });
      return out;
    }
    if (space().lattice()) {
      // Small sets go through B + B directly; large ones only when it is not much bigger than B.
      if (auto ss = star_stencil(level); ss && (Y.count() <= 16 || ss->size() <= 2 * core().stencils[level - 1].size())) {
        PointSet out(n);
        Y.for_each([&](PointIndex y) { add_offsets(y, *ss, out); });
        return out;
      }
    }
    PointSet mid(n);
    Y.for_each([&](PointIndex y) { add_ball(y, level, mid); });
    PointSet out(n);
    mid.for_each([&](PointIndex c) { add_ball(c, level, out); });
    return out;
  }

  PointSet star_point(PointIndex x, int level) const {
    return star(PointSet::singleton(space().size(), x), level);
  }

  /// Largest level j whose star at x is not {x}; 0 when every level is degenerate.
  int finest_nondegenerate_level(PointIndex x) const {
    for (int j = size(); j >= 1; --j)
      if (star_point(x, j).count() > 1) return j;
    return 0;
  }

  /// Level whose stars are all singletons, if any (the last such one); otherwise the last level.
  int finest_level() const {
    if (is_chain()) return size();
    const std::size_t n = space().size();
    for (int k = size(); k >= 1; --k) {
      bool discrete = true;
      for (std::size_t x = 0; x < n && discrete; ++x) discrete = core().point_star[k - 1][x].count() == 1;
      if (discrete) return k;
    }
    return size();
  }

  /// The covering at a level, materialized (chains: all balls, one per center).
  Covering covering(int level) const {
    check_level(level);
    if (!is_chain()) return core().coverings[level - 1];
    std::vector<PointSet> members;
    const std::size_t n = space().size();
    members.reserve(n);
    for (std::size_t c = 0; c < n; ++c) members.push_back(ball(static_cast<PointIndex>(c), level));
    return Covering(std::move(members), level);
  }

  bool refines_level(int v, int u) const {
    check_level(v);
    check_level(u);
    return ((core().refines_above[v - 1] >> (u - 1)) & 1u) != 0;
  }
  bool double_refines_level(int v, int u) const {
    check_level(v);
    check_level(u);
    return ((core().halves_above[v - 1] >> (u - 1)) & 1u) != 0;
  }

  UpSet full() const { return UpSet(id(), UpSet::full_mask(size())); }
  UpSet none() const { return UpSet(id(), 0); }
  UpSet upset_threshold(int t) const {
    if (t < 0 || t > size()) throw UsageError("threshold outside 0..m");
    return UpSet(id(), UpSet::full_mask(t));
  }
  /// Upward closure of a set of levels under refinement.
  UpSet upset_from_mask(std::uint64_t mask) const {
    mask &= UpSet::full_mask(size());
    std::uint64_t out = 0;
    for (std::uint64_t bits = mask; bits; bits &= bits - 1) out |= core().refines_above[std::countr_zero(bits)];
    return UpSet(id(), out);
  }

  /// ρ(x,y) = {U : y ∈ St[x,U]}.
  UpSet rho(PointIndex x, PointIndex y) const {
    const std::size_t n = space().size();
    if (x >= n || y >= n) throw UsageError("point index outside space");
    if (!is_chain()) {
      std::uint64_t mask = 0;
      for (int k = 0; k < size(); ++k)
        if (core().point_star[k][x].contains(y)) mask |= std::uint64_t{1} << k;
      return UpSet(id(), mask);
    }
    return upset_threshold(chain_pair_threshold(x, y));
  }

  ValidationReport validate() const {
    ValidationReport r;
    const auto& c = core();
    const std::size_t n = space().size();
    const int m = size();
    if (c.chain) {
      r.basis = c.discrete_finest;
      if (!r.basis)
        for (std::size_t x = 0; x < n; ++x)
          if (star_point(static_cast<PointIndex>(x), m).count() != 1) r.basis_violations.push_back(static_cast<PointIndex>(x));
      if (n <= 200) {
        r.halving_checked = true;
        for (int k = 1; k < m; ++k)
          if (!double_refines(covering(k + 1), covering(k))) {
            r.halving = false;
            r.halving_violations.push_back(k);
          }
      }
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        bool ok = false;
        for (int k = 0; k < m && !ok; ++k) ok = c.point_star[k][x].count() == 1;
        if (!ok) r.basis_violations.push_back(static_cast<PointIndex>(x));
      }
      r.basis = r.basis_violations.empty();
    }
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        const std::uint64_t need = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
        bool found = false;
        for (int w = 0; w < m && !found; ++w) found = (c.halves_above[w] & need) == need;
        if (!found) r.undirected_pairs.emplace_back(a + 1, b + 1);
      }
    r.directed = r.undirected_pairs.empty();
    return r;
  }

 private:
  const detail::FamilyCore& core() const {
    if (!core_) throw UsageError("empty admissible family");
    return *core_;
  }

  void build_chain_geometry() {
    auto& c = *core_;
    const Space& s = *c.space;
    if (const Lattice* lat = s.lattice()) {
      const std::size_t d = lat->dim();
      c.stencils.resize(c.m);
      for (int k = 0; k < c.m; ++k) {
        const double e = c.eps[k];
        std::vector<long> lo(d), hi(d);
        for (std::size_t a = 0; a < d; ++a) {
          const long n = static_cast<long>(lat->counts[a]);
          const double rr = std::floor(e / lat->h) + 1.0;
          const long r = rr > 1e9 ? 1000000000L : static_cast<long>(rr);
          if (lat->periodic[a]) {
            lo[a] = std::max(-r, -((n - 1) / 2));
            hi[a] = std::min(r, n / 2);
          } else {
            lo[a] = -std::min(r, n - 1);
            hi[a] = std::min(r, n - 1);
          }
        }
        std::vector<long> o(lo);
        auto& st = c.stencils[k];
        bool more = true;
        while (more) {
          long n2 = 0;
          for (std::size_t a = 0; a < d; ++a) n2 += o[a] * o[a];
          if (lat->length(n2) < e)
            for (std::size_t a = 0; a < d; ++a) st.push_back(static_cast<int>(o[a]));
          more = false;
          for (std::size_t a = d; a-- > 0;) {
            if (o[a] < hi[a]) {
              ++o[a];
              more = true;
              break;
            }
            o[a] = lo[a];
          }
        }
      }
      c.discrete_finest = c.stencils[c.m - 1].size() == d;
    } else {
      const std::size_t n = s.size();
      double min_d = INFINITY;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) min_d = std::min(min_d, s.distance(static_cast<PointIndex>(i), static_cast<PointIndex>(j)));
      c.discrete_finest = n <= 1 || !(min_d < c.eps[c.m - 1]);
      if (n <= 4096) {
        c.balls.assign(c.m, std::vector<std::vector<PointIndex>>(n));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double dij = s.distance(static_cast<PointIndex>(i), static_cast<PointIndex>(j));
            for (int k = 0; k < c.m && dij < c.eps[k]; ++k) c.balls[k][i].push_back(static_cast<PointIndex>(j));
          }
      }
    }
  }

  void build_chain_relations() {
    auto& c = *core_;
    const int m = c.m;
    c.refines_above.assign(m, 0);
    c.halves_above.assign(m, 0);
    for (int v = 0; v < m; ++v)
      for (int u = 0; u < m; ++u) {
        if (v >= u) c.refines_above[v] |= std::uint64_t{1} << u;
        if (v > u) c.halves_above[v] |= std::uint64_t{1} << u;
      }
    // A discrete finest level (singleton balls) double-refines every level, itself included.
    if (c.discrete_finest) c.halves_above[m - 1] = UpSet::full_mask(m);
  }

  /// B + B as a stencil for lattices with at most 4 axes; null otherwise. A star point
  /// y + o is reached through a center inside the grid whenever both ends are inside,
  /// since clamping a center into the box between them shortens both legs.
  std::shared_ptr<const std::vector<int>> star_stencil(int level) const {
    const auto& c = core();
    const Lattice* lat = c.space->lattice();
    if (!lat || lat->dim() > 4) return nullptr;
    std::lock_guard<std::mutex> lock(c.cache_mu);
    if (c.star_stencils.size() != static_cast<std::size_t>(c.m)) c.star_stencils.assign(c.m, nullptr);
    auto& slot = c.star_stencils[level - 1];
    if (slot) return slot;
    const std::size_t d = lat->dim();
    const auto& b = c.stencils[level - 1];
    std::unordered_set<std::uint64_t> seen;
    auto out = std::make_shared<std::vector<int>>();
    std::vector<long> o(d);
    for (std::size_t p = 0; p < b.size(); p += d)
      for (std::size_t q = 0; q < b.size(); q += d) {
        std::uint64_t key = 0;
        for (std::size_t a = 0; a < d; ++a) {
          long v = b[p + a] + b[q + a];
          if (lat->periodic[a]) {
            const long n = static_cast<long>(lat->counts[a]);
            v = ((v % n) + n) % n;
            if (v > n / 2) v -= n;
          }
          o[a] = v;
          key = (key << 16) | static_cast<std::uint64_t>(v + 32768);
        }
        if (seen.insert(key).second)
          for (std::size_t a = 0; a < d; ++a) out->push_back(static_cast<int>(o[a]));
      }
    slot = std::move(out);
    return slot;
  }

  void add_ball(PointIndex center, int level, PointSet& out) const {
    const auto& c = core();
    if (c.space->lattice()) {
      add_offsets(center, c.stencils[level - 1], out);
      return;
    }
    const Space& s = *c.space;
    if (!c.balls.empty()) {
      for (PointIndex j : c.balls[level - 1][center]) out.insert(j);
      return;
    }
    const double e = c.eps[level - 1];
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s.distance(center, static_cast<PointIndex>(j)) < e) out.insert(static_cast<PointIndex>(j));
  }

  void add_offsets(PointIndex center, const std::vector<int>& st, PointSet& out) const {
    const auto& c = core();
    const Space& s = *c.space;
    if (const Lattice* lat = s.lattice()) {
      const std::size_t d = lat->dim();
      long idx[8];
      if (d > 8) throw UsageError("lattices above 8 dimensions are not supported");
      for (std::size_t a = 0; a < d; ++a) idx[a] = lat->axis_index(center, a);
      for (std::size_t p = 0; p < st.size(); p += d) {
        std::size_t flat = 0;
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a) {
          long t = idx[a] + st[p + a];
          const long n = static_cast<long>(lat->counts[a]);
          if (lat->periodic[a]) {
            if (t < 0) t += n;
            else if (t >= n) t -= n;
          } else if (t < 0 || t >= n) {
            inside = false;
            break;
          }
          flat += static_cast<std::size_t>(t) * lat->strides[a];
        }
        if (inside) out.insert(static_cast<PointIndex>(flat));
      }
    }
  }

  int threshold_for_radius(double r) const {
    const auto& eps = core().eps;
    int t = 0;
    while (t < static_cast<int>(eps.size()) && r < eps[t]) ++t;
    return t;
  }

  /// max{k : ∃z, max(d(z,x), d(z,y)) < ε_k} for chain families.
  int chain_pair_threshold(PointIndex x, PointIndex y) const {
    const auto& c = core();
    const Space& s = *c.space;
    if (x == y) return size();
    if (const Lattice* lat = s.lattice()) {
      const std::size_t d = lat->dim();
      std::vector<long> o(d);
      bool any_periodic = false;
      for (std::size_t a = 0; a < d; ++a) {
        o[a] = lat->axis_offset(lat->axis_index(x, a), lat->axis_index(y, a), a);
        any_periodic = any_periodic || lat->periodic[a];
      }
      std::uint64_t key = 0;
      bool cacheable = d <= 4;
      for (std::size_t a = 0; a < d && cacheable; ++a) {
        if (std::labs(o[a]) >= 32768) cacheable = false;
        key = (key << 16) | static_cast<std::uint64_t>(o[a] + 32768);
      }
      if (cacheable) {
        std::lock_guard<std::mutex> lock(c.cache_mu);
        auto it = c.r2_cache.find(key);
        if (it != c.r2_cache.end()) return threshold_for_radius(lat->length(it->second));
      }
      long best = std::numeric_limits<long>::max();
      if (!any_periodic) {
        // The optimal center lies in the lattice box spanned by x and y.
        std::vector<long> lo(d), hi(d), z(d);
        for (std::size_t a = 0; a < d; ++a) {
          lo[a] = std::min(0L, o[a]);
          hi[a] = std::max(0L, o[a]);
          z[a] = lo[a];
        }
        while (true) {
          long n1 = 0, n2 = 0;
          for (std::size_t a = 0; a < d; ++a) {
            n1 += z[a] * z[a];
            n2 += (o[a] - z[a]) * (o[a] - z[a]);
          }
          best = std::min(best, std::max(n1, n2));
          std::size_t a = d;
          bool more = false;
          while (a > 0) {
            --a;
            if (z[a] < hi[a]) {
              ++z[a];
              more = true;
              break;
            }
            z[a] = lo[a];
          }
          if (!more) break;
        }
      } else {
        const std::size_t n = s.size();
        for (std::size_t zi = 0; zi < n; ++zi) {
          const auto z = static_cast<PointIndex>(zi);
          best = std::min(best, std::max(lat->offset_norm2(x, z), lat->offset_norm2(y, z)));
        }
      }
      if (cacheable) {
        std::lock_guard<std::mutex> lock(c.cache_mu);
        c.r2_cache.emplace(key, best);
      }
      return threshold_for_radius(lat->length(best));
    }
    const std::size_t n = s.size();
    const std::uint64_t key = static_cast<std::uint64_t>(std::min(x, y)) * n + std::max(x, y);
    {
      std::lock_guard<std::mutex> lock(c.cache_mu);
      auto it = c.pair_cache.find(key);
      if (it != c.pair_cache.end()) return it->second;
    }
    double best = INFINITY;
    for (std::size_t zi = 0; zi < n; ++zi) {
      const auto z = static_cast<PointIndex>(zi);
      best = std::min(best, std::max(s.distance(z, x), s.distance(z, y)));
    }
    const int t = threshold_for_radius(best);
    std::lock_guard<std::mutex> lock(c.cache_mu);
    c.pair_cache.emplace(key, t);
    return t;
  }

  std::shared_ptr<detail::FamilyCore> core_;
};

inline ValidationReport validate_admissible(const AdmissibleFamily& f) { return f.validate(); }

inline UpSet rho(const AdmissibleFamily& f, PointIndex x, PointIndex y) { return f.rho(x, y); }

/// How the unseen tail of a finite sequence is interpreted.
struct TailSpec {
  enum class Mode { Observed, EventuallyPeriodic };
  Mode mode = Mode::Observed;
  std::size_t window = 1;
  std::size_t preperiod = 0;
  std::size_t period = 1;

  static TailSpec observed(std::size_t window = 1) {
    TailSpec t;
    t.window = window;
    return t;
  }
  static TailSpec periodic(std::size_t preperiod, std::size_t period) {
    TailSpec t;
    t.mode = Mode::EventuallyPeriodic;
    t.preperiod = preperiod;
    t.period = period;
    return t;
  }
  bool exact() const { return mode == Mode::EventuallyPeriodic; }
};

struct ConvergenceDiagnostic {
  int depth = 0;
  /// Entry k-1: first index after which level k lies in every term.
  std::vector<std::optional<std::size_t>> first_index;
  bool attained = false;
  bool approximate = false;
  TailSpec tail;

  /// Largest d such that levels 1..d are all attained.
  int attained_depth() const {
    int d = 0;
    while (d < static_cast<int>(first_index.size()) && first_index[d]) ++d;
    return d;
  }
  std::optional<std::size_t> overall_index() const {
    if (!attained) return std::nullopt;
    std::size_t i = 0;
    for (const auto& f : first_index) i = std::max(i, *f);
    return i;
  }
};

inline ConvergenceDiagnostic converges_to_O(std::span<const UpSet> seq, int depth,
                                            TailSpec tail = TailSpec::observed()) {
  if (seq.empty()) throw UsageError("converges_to_O needs a nonempty sequence");
  const int m = seq.front().family_size();
  for (const auto& e : seq)
    if (e.family() != seq.front().family()) throw UsageError("sequence mixes families");
  if (depth < 0 || depth > m) throw UsageError("depth outside 0..m");
  std::size_t cycle_begin, cycle_end;
  if (tail.mode == TailSpec::Mode::EventuallyPeriodic) {
    if (tail.period == 0) throw UsageError("period must be positive");
    if (seq.size() < tail.preperiod + tail.period) throw UsageError("sequence shorter than preperiod + period");
    cycle_begin = tail.preperiod;
    cycle_end = tail.preperiod + tail.period;
  } else {
    if (tail.window == 0 || tail.window > seq.size()) throw UsageError("tail window outside 1..length");
    cycle_begin = seq.size() - tail.window;
    cycle_end = seq.size();
  }
  ConvergenceDiagnostic d;
  d.depth = depth;
  d.tail = tail;
  d.approximate = !tail.exact();
  d.first_index.resize(depth);
  bool all = true;
  for (int k = 1; k <= depth; ++k) {
    bool in_tail = true;
    for (std::size_t i = cycle_begin; i < cycle_end && in_tail; ++i) in_tail = seq[i].contains(k);
    if (!in_tail) {
      all = false;
      continue;
    }
    std::size_t first = 0;
    for (std::size_t i = cycle_begin; i-- > 0;)
      if (!seq[i].contains(k)) {
        first = i + 1;
        break;
      }
    d.first_index[k - 1] = first;
  }
  d.attained = all;
  return d;
}

}  // namespace hyperdyn
