#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/phase_space.hpp"
#include "hyperdyn/point_set.hpp"

namespace hyperdyn {

/// Parameter of a semigroup element (time, time pair, word length, ...).
using Label = std::vector<double>;

/// Label arithmetic used by the hypothesis checks. right_quotient(b, s) returns
/// a with a·s = b when it exists; leave it empty when quotients are unavailable.
struct LabelAlgebra {
  std::function<Label(const Label&, const Label&)> compose;
  std::function<std::optional<Label>(const Label&, const Label&)> right_quotient;
  std::function<bool(const Label&, int)> in_level;
  std::vector<Label> probes;
};

struct OrbitHit {
  PointIndex image;
  std::uint32_t element;
};

/// For one source point: every image cell with the deepest filter level reaching it
/// and one element (smallest index) attaining that level.
struct ProfileEntry {
  PointIndex image;
  int level;
  std::uint32_t element;
};
using Profile = std::vector<ProfileEntry>;

/// Sampled semigroup action with a filter chain A_1 ⊃ … ⊃ A_K; element e lies in
/// A_k exactly when element_level(e) >= k.
class SemigroupSample {
 public:
  using OrbitFn = std::function<void(PointIndex, std::vector<OrbitHit>&)>;
  using PointMap = std::function<std::vector<double>(std::span<const double>)>;

  /// Memo budget in stored profile entries.
  static constexpr std::size_t kDefaultMemo = std::size_t{1} << 24;

  SemigroupSample() = default;

  static SemigroupSample from_orbit_fn(SpacePtr space, OrbitFn fn, std::vector<int> element_level, int depth,
                                       std::vector<Label> labels = {}) {
    if (!space) throw UsageError("action needs a space");
    if (!fn) throw UsageError("action needs an orbit function");
    auto core = std::make_shared<Core>();
    core->space = std::move(space);
    core->fn = std::move(fn);
    core->levels = std::move(element_level);
    core->depth = depth;
    core->labels = std::move(labels);
    validate(*core);
    SemigroupSample s;
    s.core_ = std::move(core);
    return s;
  }

  /// Exact maps given as tables (maps[e][x] is the image of x under element e).
  static SemigroupSample from_tables(SpacePtr space, std::vector<std::vector<PointIndex>> maps,
                                     std::vector<int> element_level, int depth, std::vector<Label> labels = {}) {
    if (!space) throw UsageError("action needs a space");
    const std::size_t n = space->size();
    if (maps.size() != element_level.size()) throw UsageError("one filter level per element required");
    for (const auto& m : maps) {
      if (m.size() != n) throw UsageError("map table size differs from the space");
      for (auto v : m)
        if (v >= n) throw UsageError("map table entry outside the space");
    }
    auto tables = std::make_shared<const std::vector<std::vector<PointIndex>>>(std::move(maps));
    auto s = from_orbit_fn(
        std::move(space),
        [tables](PointIndex x, std::vector<OrbitHit>& out) {
          for (std::size_t e = 0; e < tables->size(); ++e)
            out.push_back({(*tables)[e][x], static_cast<std::uint32_t>(e)});
        },
        std::move(element_level), depth, std::move(labels));
    s.core_->sampled = false;
    return s;
  }

  /// Continuous maps snapped to the grid once per evaluation.
  static SemigroupSample from_maps(SpacePtr space, std::vector<PointMap> maps, std::vector<int> element_level,
                                   int depth, std::vector<Label> labels = {},
                                   BoundaryPolicy policy = BoundaryPolicy::Error) {
    if (maps.size() != element_level.size()) throw UsageError("one filter level per element required");
    auto fns = std::make_shared<const std::vector<PointMap>>(std::move(maps));
    const Space* sp = space.get();
    return from_orbit_fn(
        std::move(space),
        [fns, sp, policy](PointIndex x, std::vector<OrbitHit>& out) {
          const auto c = sp->coords(x);
          for (std::size_t e = 0; e < fns->size(); ++e) {
            const auto y = (*fns)[e](c);
            out.push_back({snap(*sp, y, policy), static_cast<std::uint32_t>(e)});
          }
        },
        std::move(element_level), depth, std::move(labels));
  }

  const Space& space() const { return *core().space; }
  const SpacePtr& space_ptr() const { return core().space; }
  int depth() const { return core().depth; }
  std::size_t element_count() const { return core().levels.size(); }
  int element_level(std::uint32_t e) const { return core().levels.at(e); }
  const std::vector<Label>& labels() const { return core().labels; }
  const Label& label(std::uint32_t e) const {
    if (core().labels.empty()) throw UsageError("action has no labels");
    return core().labels.at(e);
  }

  /// True when the action is a finite sample of a larger semigroup.
  bool sampled() const { return core().sampled; }
  void set_sampled(bool s) { mut().sampled = s; }
  const std::string& sampling_note() const { return core().note; }
  void set_sampling_note(std::string n) { mut().note = std::move(n); }

  void set_label_algebra(LabelAlgebra a) {
    auto& c = mut();
    if (!a.compose || !a.in_level) throw UsageError("label algebra needs compose and in_level");
    if (c.labels.empty()) throw UsageError("label algebra needs element labels");
    for (std::size_t e = 0; e < c.labels.size(); ++e)
      for (int k = 1; k <= c.depth; ++k)
        if (a.in_level(c.labels[e], k) != (c.levels[e] >= k))
          throw UsageError("label algebra disagrees with the filter level of element " + std::to_string(e));
    c.algebra = std::move(a);
  }
  const LabelAlgebra* label_algebra() const { return core().algebra ? &*core().algebra : nullptr; }

  void set_memo_capacity(std::size_t cap) { mut().memo_cap = cap; }

  /// Orbit profile of x; memoized.
  std::shared_ptr<const Profile> profile(PointIndex x) const {
    const auto& c = core();
    if (x >= c.space->size()) throw UsageError("point index outside space");
    {
      std::lock_guard<std::mutex> lock(c.mu);
      auto it = c.memo.find(x);
      if (it != c.memo.end()) return it->second;
    }
    std::vector<OrbitHit> hits;
    try {
      c.fn(x, hits);
    } catch (const DomainError& e) {
      throw DomainError("orbit of point " + std::to_string(x) + ": " + e.what());
    }
    std::unordered_map<PointIndex, std::size_t> slot;
    auto prof = std::make_shared<Profile>();
    for (const auto& h : hits) {
      if (h.element >= c.levels.size()) throw UsageError("orbit function reported an unknown element");
      const int lv = c.levels[h.element];
      auto [it, fresh] = slot.emplace(h.image, prof->size());
      if (fresh) {
        prof->push_back({h.image, lv, h.element});
        continue;
      }
      auto& e = (*prof)[it->second];
      if (lv > e.level || (lv == e.level && h.element < e.element)) {
        e.level = lv;
        e.element = h.element;
      }
    }
    std::sort(prof->begin(), prof->end(), [](const ProfileEntry& a, const ProfileEntry& b) { return a.image < b.image; });
    std::lock_guard<std::mutex> lock(c.mu);
    if (c.memo_entries + prof->size() > c.memo_cap) {
      c.memo.clear();
      c.memo_entries = 0;
    }
    if (c.memo.emplace(x, prof).second) c.memo_entries += prof->size();
    return prof;
  }

  /// A_k x.
  PointSet orbit(int k, PointIndex x) const {
    check_filter_level(k);
    PointSet out(space().size());
    const auto prof = profile(x);  // keeps the entry alive if another thread evicts it
    for (const auto& e : *prof)
      if (e.level >= k) out.insert(e.image);
    return out;
  }

  /// Deepest filter level reaching each image of Y (0 = unreached).
  std::vector<std::uint8_t> image_levels(const PointSet& Y) const {
    if (Y.universe() != space().size()) throw UsageError("set over a different space");
    std::vector<std::uint8_t> best(space().size(), 0);
    Y.for_each([&](PointIndex y) {
      const auto prof = profile(y);
      for (const auto& e : *prof) best[e.image] = std::max<std::uint8_t>(best[e.image], static_cast<std::uint8_t>(e.level));
    });
    return best;
  }

  /// A_k Y.
  PointSet image(int k, const PointSet& Y) const {
    check_filter_level(k);
    return level_set(image_levels(Y), k);
  }

  static PointSet level_set(const std::vector<std::uint8_t>& best, int k) {
    PointSet out(best.size());
    for (std::size_t i = 0; i < best.size(); ++i)
      if (best[i] >= k) out.insert(static_cast<PointIndex>(i));
    return out;
  }

  void check_filter_level(int k) const {
    if (k < 1 || k > depth())
      throw UsageError("filter level " + std::to_string(k) + " outside 1.." + std::to_string(depth()));
  }

 private:
  struct Core {
    SpacePtr space;
    OrbitFn fn;
    std::vector<int> levels;
    int depth = 0;
    std::vector<Label> labels;
    std::optional<LabelAlgebra> algebra;
    bool sampled = true;
    std::string note;
    std::size_t memo_cap = kDefaultMemo;
    mutable std::mutex mu;
    mutable std::unordered_map<PointIndex, std::shared_ptr<const Profile>> memo;
    mutable std::size_t memo_entries = 0;
  };

  static void validate(const Core& c) {
    if (c.depth < 1 || c.depth > 255) throw UsageError("filter depth must be in 1..255");
    if (c.levels.empty()) throw UsageError("action needs at least one element");
    if (!c.labels.empty() && c.labels.size() != c.levels.size()) throw UsageError("one label per element required");
    std::vector<bool> seen(c.depth + 1, false);
    for (int l : c.levels) {
      if (l < 1 || l > c.depth) throw UsageError("element filter level outside 1..depth");
      seen[l] = true;
    }
    // Strictly descending chain with nonempty members: every level must be some element's deepest.
    for (int k = 1; k <= c.depth; ++k)
      if (!seen[k]) throw UsageError("filter chain is not strictly descending at level " + std::to_string(k));
  }

  const Core& core() const {
    if (!core_) throw UsageError("empty semigroup sample");
    return *core_;
  }
  Core& mut() {
    if (!core_) throw UsageError("empty semigroup sample");
    // Settings are applied while building; a copied handle shares state on purpose.
    return *core_;
  }

  std::shared_ptr<Core> core_;
};

namespace detail {

inline void require_same(const SemigroupSample& a, const AdmissibleFamily& f) {
  if (a.space().size() != f.space().size()) throw UsageError("action and family over different spaces");
}

/// Largest j whose star at Y is strictly bigger than Y; 0 when there is none.
inline int finest_nondegenerate(const AdmissibleFamily& f, const PointSet& Y) {
  for (int j = f.size(); j >= 1; --j)
    if (!(f.star(Y, j) == Y)) return j;
  return 0;
}

}  // namespace detail

/// Where a witness search runs: from `finest` down to `coarsest`.
struct WitnessOptions {
  bool allow_degenerate = false;
  std::optional<int> coarsest_level;
};

struct LevelRange {
  int finest = 0;
  int coarsest = 0;
  bool degenerate = false;
};

inline LevelRange witness_range(const AdmissibleFamily& f, int nondegenerate, int target, const WitnessOptions& o) {
  LevelRange r;
  r.finest = o.allow_degenerate ? f.size() : nondegenerate;
  if (r.finest == 0) r.finest = f.size();
  r.degenerate = r.finest > nondegenerate;
  r.coarsest = std::clamp(o.coarsest_level.value_or(target), 1, r.finest);
  return r;
}

/// Runs `test(j)` from the finest level coarser; returns the coarsest passing level of
/// the initial passing run, or nullopt when the finest level fails.
template <class Test>
std::optional<int> coarsest_passing(const AdmissibleFamily& f, const LevelRange& r, Test&& test) {
  std::optional<int> best;
  for (int j = r.finest; j >= r.coarsest; --j) {
    if (test(j)) {
      best = j;
    } else if (f.is_chain() || best) {
      break;
    }
  }
  return best;
}

inline PointSet orbit_K(const SemigroupSample& a, int k, PointIndex x) { return a.orbit(k, x); }

struct ProlongationResult {
  PointSet at_level;
  PointSet nested;
};

/// A_k St[x,U_j] and the intersection over levels 1..j.
inline ProlongationResult prolongation_D(const SemigroupSample& a, const AdmissibleFamily& f, int k, PointIndex x,
                                         int j) {
  detail::require_same(a, f);
  a.check_filter_level(k);
  f.check_level(j);
  ProlongationResult r;
  r.nested = PointSet::full(f.space().size());
  for (int jj = 1; jj <= j; ++jj) {
    PointSet img = a.image(k, f.star_point(x, jj));
    r.nested &= img;
    if (jj == j) r.at_level = std::move(img);
  }
  return r;
}

struct LimitResult {
  PointSet set;
  ConvergenceDiagnostic diagnostic;
};

/// L_F(x) = ⋂_k A_k x; diagnostic tracks ρ_H(A_k x, L) along the chain.
inline LimitResult limit_L(const SemigroupSample& a, const AdmissibleFamily& f, PointIndex x) {
  detail::require_same(a, f);
  std::vector<PointSet> terms;
  PointSet acc = PointSet::full(f.space().size());
  for (int k = 1; k <= a.depth(); ++k) {
    terms.push_back(a.orbit(k, x));
    acc &= terms.back();
  }
  if (acc.empty()) throw DomainError("limit set at point " + std::to_string(x) + " is empty");
  SetSequence seq(std::move(terms), TailSpec::observed(1));
  auto d = hausdorff_converges(f, seq, acc, f.size());
  return {std::move(acc), std::move(d)};
}

/// J_F(x) at star depth `depth`; diagnostic along the diagonal (min(n,K), min(n,depth)).
inline LimitResult prolongational_J(const SemigroupSample& a, const AdmissibleFamily& f, PointIndex x, int depth) {
  detail::require_same(a, f);
  f.check_level(depth);
  const int K = a.depth();
  std::vector<std::vector<std::uint8_t>> by_level(depth);
  for (int j = 1; j <= depth; ++j) by_level[j - 1] = a.image_levels(f.star_point(x, j));
  PointSet acc = PointSet::full(f.space().size());
  for (int j = 1; j <= depth; ++j) acc &= SemigroupSample::level_set(by_level[j - 1], K);
  if (acc.empty()) throw DomainError("prolongational limit at point " + std::to_string(x) + " is empty");
  std::vector<PointSet> terms;
  for (int n = 1; n <= std::max(K, depth); ++n)
    terms.push_back(SemigroupSample::level_set(by_level[std::min(n, depth) - 1], std::min(n, K)));
  SetSequence seq(std::move(terms), TailSpec::observed(1));
  auto d = hausdorff_converges(f, seq, acc, f.size());
  return {std::move(acc), std::move(d)};
}

/// ω(Y,F) = ⋂_k A_k Y.
inline PointSet omega_set(const SemigroupSample& a, const PointSet& Y) {
  if (Y.empty()) throw UsageError("Y must be nonempty");
  return a.image(a.depth(), Y);
}

/// Points x with A_i x ⊂ St[Y,U_k] for some sampled filter level i.
inline PointSet attraction_domain(const SemigroupSample& a, const AdmissibleFamily& f, const PointSet& Y, int k,
                                  const PointSet* candidates = nullptr) {
  detail::require_same(a, f);
  detail::require_nonempty(f, Y, "Y");
  const PointSet target = f.star(Y, k);
  const PointSet cand = candidates ? *candidates : PointSet::full(f.space().size());
  PointSet out(f.space().size());
  const int K = a.depth();
  cand.for_each([&](PointIndex x) {
    const auto prof = a.profile(x);
    for (const auto& e : *prof)
      if (e.level >= K && !target.contains(e.image)) return;
    out.insert(x);
  });
  return out;
}

struct StabilityFailure {
  PointIndex point = 0;   // tested point of Y (or neighborhood point for eventual stability)
  PointIndex from = 0;    // star point whose orbit escapes
  std::uint32_t element = 0;
  PointIndex escaped = 0;
  int level = 0;          // witness level at which the escape was seen
};

struct PointStability {
  PointIndex point = 0;
  std::optional<int> witness_level;
  std::optional<int> filter_level;
};

struct StabilityReport {
  int target_level = 0;
  bool holds = false;
  /// Coarsest level that works for the whole set (uniform form).
  std::optional<int> witness_level;
  std::vector<PointStability> points;
  std::vector<StabilityFailure> failures;
  bool approximate = false;
  bool degenerate = false;
};

namespace detail {

/// First profile entry with level >= min_level outside `target`, if any.
inline const ProfileEntry* escape(const Profile& p, const PointSet& target, int min_level) {
  for (const auto& e : p)
    if (e.level >= min_level && !target.contains(e.image)) return &e;
  return nullptr;
}

}  // namespace detail

/// S St[y,U_j] ⊂ St[Y,U_k] for each y ∈ Y (S sampled as A_1).
inline StabilityReport is_stable(const SemigroupSample& a, const AdmissibleFamily& f, const PointSet& Y, int k,
                                 const WitnessOptions& opts = {}) {
  detail::require_same(a, f);
  detail::require_nonempty(f, Y, "Y");
  f.check_level(k);
  StabilityReport r;
  r.target_level = k;
  r.approximate = a.sampled();
  const PointSet target = f.star(Y, k);
  std::unordered_map<PointIndex, const ProfileEntry*> esc;
  std::vector<std::shared_ptr<const Profile>> keep;
  auto escape_of = [&](PointIndex z) -> const ProfileEntry* {
    auto it = esc.find(z);
    if (it != esc.end()) return it->second;
    keep.push_back(a.profile(z));
    const ProfileEntry* e = detail::escape(*keep.back(), target, 1);
    esc.emplace(z, e);
    return e;
  };
  r.holds = true;
  int uniform = 0;
  Y.for_each([&](PointIndex y) {
    const auto range = witness_range(f, f.finest_nondegenerate_level(y), k, opts);
    r.degenerate = r.degenerate || range.degenerate;
    std::optional<StabilityFailure> fail;
    auto w = coarsest_passing(f, range, [&](int j) {
      bool ok = true;
      f.star_point(y, j).for_each([&](PointIndex z) {
        if (!ok) return;
        if (const ProfileEntry* e = escape_of(z)) {
          ok = false;
          if (!fail) fail = StabilityFailure{y, z, e->element, e->image, j};
        }
      });
      return ok;
    });
    r.points.push_back({y, w, std::nullopt});
    if (w) {
      uniform = std::max(uniform, *w);
    } else {
      r.holds = false;
      if (fail) r.failures.push_back(*fail);
    }
  });
  if (r.holds) r.witness_level = uniform;
  return r;
}

/// Some neighborhood St[Y,U_j] whose points each enter St[Y,U_k] along a filter level.
inline StabilityReport is_eventually_stable(const SemigroupSample& a, const AdmissibleFamily& f, const PointSet& Y,
                                            int k, const WitnessOptions& opts = {}) {
  detail::require_same(a, f);
  detail::require_nonempty(f, Y, "Y");
  f.check_level(k);
  StabilityReport r;
  r.target_level = k;
  r.approximate = a.sampled();
  const PointSet target = f.star(Y, k);
  const int K = a.depth();
  std::unordered_map<PointIndex, int> entry;  // filter level of entry, K+1 when never
  std::unordered_map<PointIndex, StabilityFailure> why;
  auto entry_level = [&](PointIndex x) {
    auto it = entry.find(x);
    if (it != entry.end()) return it->second;
    int worst = 0;
    const ProfileEntry* deep = nullptr;
    const auto prof = a.profile(x);
    for (const auto& e : *prof)
      if (!target.contains(e.image) && e.level > worst) {
        worst = e.level;
        deep = &e;
      }
    const int i = worst + 1;
    if (i > K && deep) why.emplace(x, StabilityFailure{x, x, deep->element, deep->image, 0});
    entry.emplace(x, i);
    return i;
  };
  const auto range = witness_range(f, detail::finest_nondegenerate(f, Y), k, opts);
  r.degenerate = range.degenerate;
  std::optional<StabilityFailure> fail;
  auto w = coarsest_passing(f, range, [&](int j) {
    bool ok = true;
    f.star(Y, j).for_each([&](PointIndex x) {
      if (ok && entry_level(x) > K) {
        ok = false;
        if (!fail) {
          fail = why.at(x);
          fail->level = j;
        }
      }
    });
    return ok;
  });
  r.holds = w.has_value();
  r.witness_level = w;
  if (w) {
    f.star(Y, *w).for_each([&](PointIndex x) { r.points.push_back({x, w, entry_level(x)}); });
  } else if (fail) {
    r.failures.push_back(*fail);
  }
  return r;
}

struct MinimalityReport {
  bool holds = false;
  std::optional<PointIndex> witness;
  PointSet missing;
  PointSet extra;
  bool approximate = false;
};

/// M = A_1 x for every x ∈ M.
inline MinimalityReport is_minimal(const SemigroupSample& a, const PointSet& M) {
  if (M.empty()) throw UsageError("M must be nonempty");
  MinimalityReport r;
  r.approximate = a.sampled();
  r.holds = true;
  for (PointIndex x : M.indices()) {
    const PointSet o = a.orbit(1, x);
    if (!(o == M)) {
      r.holds = false;
      r.witness = x;
      r.missing = M - o;
      r.extra = o - M;
      break;
    }
  }
  return r;
}

struct HypothesisResult {
  bool holds = false;
  bool established = true;
  /// Failing probe label and filter level.
  std::optional<std::pair<Label, int>> witness;
  std::string note;
};

struct HypothesesReport {
  HypothesisResult H1, H2, H3;
  bool approximate = true;
  int levels_checked = 0;
};

/// H1: s A_j ⊂ A_i; H2: A_j s ⊂ A_i; H3: A_j ⊂ A_i s. Probes s and the members of A_j are
/// the sampled labels; levels i run over the upper half of the chain so that j can be deeper.
inline HypothesesReport check_hypotheses(const SemigroupSample& a) {
  const LabelAlgebra* alg = a.label_algebra();
  if (!alg) throw UsageError("action has no label algebra; composition is unavailable");
  if (alg->probes.empty()) throw UsageError("label algebra has no probes");
  HypothesesReport r;
  const int K = a.depth();
  const int top = std::max(1, (K + 1) / 2);
  r.levels_checked = top;
  const auto& labels = a.labels();
  auto members = [&](int j) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < labels.size(); ++e)
      if (a.element_level(e) >= j) out.push_back(e);
    return out;
  };
  std::vector<std::vector<std::uint32_t>> level_members(K + 1);
  for (int j = 1; j <= K; ++j) level_members[j] = members(j);

  auto run = [&](HypothesisResult& res, auto&& contained) {
    res.holds = true;
    for (const auto& s : alg->probes) {
      for (int i = 1; i <= top; ++i) {
        bool found = false;
        for (int j = i; j <= K && !found; ++j) {
          bool all = true;
          for (auto e : level_members[j])
            if (!contained(s, labels[e], i)) {
              all = false;
              break;
            }
          found = all;
        }
        if (!found) {
          res.holds = false;
          res.witness = std::make_pair(s, i);
          return;
        }
      }
    }
  };
  run(r.H1, [&](const Label& s, const Label& b, int i) { return alg->in_level(alg->compose(s, b), i); });
  run(r.H2, [&](const Label& s, const Label& b, int i) { return alg->in_level(alg->compose(b, s), i); });
  if (!alg->right_quotient) {
    r.H3.holds = false;
    r.H3.established = false;
    r.H3.note = "right quotients unavailable for these labels; not established";
  } else {
    run(r.H3, [&](const Label& s, const Label& b, int i) {
      const auto q = alg->right_quotient(b, s);
      return q && alg->in_level(*q, i);
    });
  }
  return r;
}

struct LimitCompactReport {
  int level = 0;
  std::size_t budget = 1;
  std::vector<Noncompactness> profile;
  std::optional<int> first_feasible;
  bool surrogate = true;
};

/// Budgeted γ feasibility of A_i Y across filter levels.
inline LimitCompactReport limit_compact_diagnostic(const SemigroupSample& a, const AdmissibleFamily& f,
                                                   const PointSet& Y, int level, std::size_t budget = 1) {
  detail::require_same(a, f);
  detail::require_nonempty(f, Y, "Y");
  f.check_level(level);
  LimitCompactReport r;
  r.level = level;
  r.budget = budget;
  const auto best = a.image_levels(Y);
  for (int i = 1; i <= a.depth(); ++i) {
    r.profile.push_back(noncompactness(f, SemigroupSample::level_set(best, i), level, budget));
    if (!r.first_feasible && r.profile.back().gamma) r.first_feasible = i;
  }
  return r;
}

}  // namespace hyperdyn
