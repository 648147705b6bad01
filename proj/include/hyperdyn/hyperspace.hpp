#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/point_set.hpp"

namespace hyperdyn {

namespace detail {

inline void require_nonempty(const AdmissibleFamily& f, const PointSet& s, const char* what) {
  if (s.universe() != f.space().size()) throw UsageError(std::string(what) + " is over a different space");
  if (s.empty()) throw UsageError(std::string(what) + " must be nonempty");
}

/// Inputs up to this many point pairs use cached pair values instead of stars.
inline constexpr std::size_t kPairwiseLimit = 256;

/// y ∈ St[x, U_level] without materializing the star.
inline bool in_star(const AdmissibleFamily& f, PointIndex x, PointIndex y, int level) {
  return f.rho(x, y).contains(level);
}

}  // namespace detail

/// ρ(x,A) = ⋃_{a∈A} ρ(x,a) = {U : St[x,U] meets A}.
inline UpSet rho_point_to_set(const AdmissibleFamily& f, PointIndex x, const PointSet& A) {
  detail::require_nonempty(f, A, "A");
  if (A.count() <= detail::kPairwiseLimit) {
    std::uint64_t mask = 0;
    A.for_each([&](PointIndex a) { mask |= f.rho(x, a).mask(); });
    return UpSet(f.id(), mask);
  }
  if (f.is_chain()) {
    if (A.contains(x)) return f.full();
    for (int k = f.size(); k >= 1; --k)
      if (f.star_point(x, k).intersects(A)) return f.upset_threshold(k);
    return f.none();
  }
  std::uint64_t mask = 0;
  for (int k = 1; k <= f.size(); ++k)
    if (f.star_point(x, k).intersects(A)) mask |= std::uint64_t{1} << (k - 1);
  return UpSet(f.id(), mask);
}

/// ρ_A(B) = ⋂_{b∈B} ρ(b,A) = {U : B ⊂ St[A,U]}.
inline UpSet rho_one_sided(const AdmissibleFamily& f, const PointSet& A, const PointSet& B) {
  detail::require_nonempty(f, A, "A");
  detail::require_nonempty(f, B, "B");
  if (B.subset_of(A)) return f.full();
  if (A.count() * B.count() <= detail::kPairwiseLimit) {
    const auto as = A.indices();
    std::uint64_t mask = UpSet::full_mask(f.size());
    B.for_each([&](PointIndex b) {
      std::uint64_t near = 0;
      for (PointIndex a : as) near |= f.rho(b, a).mask();
      mask &= near;
    });
    return UpSet(f.id(), mask);
  }
  if (f.is_chain()) {
    for (int k = f.size(); k >= 1; --k)
      if (B.subset_of(f.star(A, k))) return f.upset_threshold(k);
    return f.none();
  }
  std::uint64_t mask = 0;
  for (int k = 1; k <= f.size(); ++k)
    if (B.subset_of(f.star(A, k))) mask |= std::uint64_t{1} << (k - 1);
  return UpSet(f.id(), mask);
}

/// ρ_H(A,B) = ρ_A(B) ∩ ρ_B(A).
inline UpSet rho_H(const AdmissibleFamily& f, const PointSet& A, const PointSet& B) {
  return upset_meet(rho_one_sided(f, A, B), rho_one_sided(f, B, A));
}

/// B ∈ B_H(A, U_level): A ⊂ St[B,U] and B ⊂ St[A,U].
inline bool in_ball_BH(const AdmissibleFamily& f, const PointSet& B, const PointSet& A, int level) {
  f.check_level(level);
  detail::require_nonempty(f, A, "A");
  detail::require_nonempty(f, B, "B");
  return A.subset_of(f.star(B, level)) && B.subset_of(f.star(A, level));
}

/// Members of U meeting A.
inline std::vector<PointSet> vietoris_members(const PointSet& A, const Covering& U) {
  std::vector<PointSet> out;
  for (const auto& m : U.members())
    if (m.intersects(A)) out.push_back(m);
  return out;
}

/// B ∈ ⟨[A,U]⟩: B lies in the union of [A,U] and meets each of its members.
inline bool vietoris_member(const PointSet& B, const PointSet& A, const Covering& U) {
  if (A.universe() != U.universe() || B.universe() != U.universe())
    throw UsageError("sets and covering over different spaces");
  if (A.empty() || B.empty()) throw UsageError("vietoris_member needs nonempty sets");
  PointSet uni(U.universe());
  for (const auto& m : U.members()) {
    if (!m.intersects(A)) continue;
    if (!m.intersects(B)) return false;
    uni |= m;
  }
  return B.subset_of(uni);
}

/// D(Y) = ⋂_{x,y∈Y} ρ(x,y).
inline UpSet diameter(const AdmissibleFamily& f, const PointSet& Y) {
  detail::require_nonempty(f, Y, "Y");
  const auto pts = Y.indices();
  if (f.is_chain()) {
    int t = f.size();
    if (pts.size() <= 64) {
      for (std::size_t i = 0; i < pts.size() && t > 0; ++i)
        for (std::size_t j = i + 1; j < pts.size() && t > 0; ++j) t = std::min(t, f.rho(pts[i], pts[j]).threshold());
      return f.upset_threshold(t);
    }
    for (PointIndex y : pts) {
      while (t > 0 && !Y.subset_of(f.star_point(y, t))) --t;
      if (t == 0) break;
    }
    return f.upset_threshold(t);
  }
  std::uint64_t mask = UpSet::full_mask(f.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) mask &= f.rho(pts[i], pts[j]).mask();
  return UpSet(f.id(), mask);
}

/// Largest Hausdorff-metric distance between two point sets under the space metric.
inline double metric_hausdorff(const Space& s, const PointSet& A, const PointSet& B) {
  if (A.empty() || B.empty()) throw UsageError("metric_hausdorff needs nonempty sets");
  auto directed = [&](const PointSet& P, const PointSet& Q) {
    double worst = 0.0;
    const auto q = Q.indices();
    P.for_each([&](PointIndex p) {
      double best = INFINITY;
      for (PointIndex r : q) best = std::min(best, s.distance(p, r));
      worst = std::max(worst, best);
    });
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

struct Noncompactness {
  bool alpha = false;
  bool gamma = false;
  std::size_t alpha_count = 0;
  std::size_t gamma_count = 0;
  bool alpha_exact = true;
  bool gamma_exact = true;
};

namespace detail {

inline constexpr std::size_t kExactLimit = 16;

/// Minimal number of masks whose union is `full` (BFS over masks, |universe| <= 16).
inline std::size_t exact_set_cover(std::vector<std::uint32_t> cands, std::uint32_t full) {
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<std::uint32_t> keep;
  for (auto c : cands) {
    bool dominated = false;
    for (auto d : cands)
      if (d != c && (c & ~d) == 0) {
        dominated = true;
        break;
      }
    if (!dominated && c) keep.push_back(c);
  }
  std::vector<std::uint8_t> dist(std::size_t{full} + 1, 0xff);
  std::vector<std::uint32_t> frontier{0};
  dist[0] = 0;
  for (std::uint8_t step = 1; !frontier.empty(); ++step) {
    std::vector<std::uint32_t> next;
    for (auto s : frontier)
      for (auto c : keep) {
        const std::uint32_t t = (s | c) & full;
        if (dist[t] != 0xff) continue;
        dist[t] = step;
        if (t == full) return step;
        next.push_back(t);
      }
    frontier.swap(next);
  }
  return full == 0 ? 0 : std::numeric_limits<std::size_t>::max();
}

/// Minimal clique cover of a graph on n <= 16 vertices given adjacency masks.
inline std::size_t exact_clique_cover(const std::vector<std::uint32_t>& adj) {
  const std::size_t n = adj.size();
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  std::vector<std::uint8_t> clique(std::size_t{1} << n, 0);
  clique[0] = 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    clique[s] = clique[rest] && ((adj[v] & rest) == rest);
  }
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0xff);
  best[0] = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t others = s & ~low;
    // Enumerate cliques containing the lowest vertex inside s.
    for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
      const std::uint32_t c = sub | low;
      if (clique[c] && best[s & ~c] != 0xff) best[s] = std::min<std::uint8_t>(best[s], best[s & ~c] + 1);
      if (sub == 0) break;
    }
  }
  return best[full];
}

}  // namespace detail

/// Budgeted star (α) and diameter-partition (γ) covering numbers of Y at one level.
inline Noncompactness noncompactness(const AdmissibleFamily& f, const PointSet& Y, int level,
                                     std::size_t budget) {
  if (budget < 1) throw UsageError("budget must be at least 1");
  f.check_level(level);
  detail::require_nonempty(f, Y, "Y");
  Noncompactness r;
  const auto pts = Y.indices();
  const std::size_t n = pts.size();
  const PointSet cand_set = f.star(Y, level);
  const auto cands = cand_set.indices();
  if (n <= detail::kExactLimit) {
    std::vector<std::uint32_t> traces;
    traces.reserve(cands.size());
    for (PointIndex x : cands) {
      std::uint32_t t = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (detail::in_star(f, x, pts[i], level)) t |= 1u << i;
      traces.push_back(t);
    }
    r.alpha_count = detail::exact_set_cover(std::move(traces), n == 32 ? ~0u : ((1u << n) - 1));
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i == j || detail::in_star(f, pts[i], pts[j], level)) adj[i] |= 1u << j;
    r.gamma_count = detail::exact_clique_cover(adj);
  } else {
    r.alpha_exact = false;
    r.gamma_exact = false;
    PointSet uncovered = Y;
    std::vector<PointSet> traces;
    traces.reserve(cands.size());
    for (PointIndex x : cands) {
      PointSet t(Y.universe());
      for (PointIndex y : pts)
        if (detail::in_star(f, x, y, level)) t.insert(y);
      traces.push_back(std::move(t));
    }
    while (!uncovered.empty()) {
      std::size_t best = 0, best_gain = 0;
      for (std::size_t c = 0; c < traces.size(); ++c) {
        const std::size_t gain = (traces[c] & uncovered).count();
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      uncovered -= traces[best];
      ++r.alpha_count;
    }
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      std::vector<std::size_t> clique{i};
      used[i] = true;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (used[j]) continue;
        bool ok = true;
        for (auto c : clique)
          if (!detail::in_star(f, pts[c], pts[j], level)) {
            ok = false;
            break;
          }
        if (ok) {
          clique.push_back(j);
          used[j] = true;
        }
      }
      ++r.gamma_count;
    }
  }
  r.alpha = r.alpha_count <= budget;
  r.gamma = r.gamma_count <= budget;
  return r;
}

/// Finite sequence of nonempty sets with a declared tail interpretation.
class SetSequence {
 public:
  SetSequence(std::vector<PointSet> terms, TailSpec tail = TailSpec::observed())
      : terms_(std::move(terms)), tail_(tail) {
    if (terms_.empty()) throw UsageError("set sequence needs at least one term");
    const std::size_t n = terms_.front().universe();
    for (const auto& t : terms_) {
      if (t.universe() != n) throw UsageError("sequence terms over different spaces");
      if (t.empty()) throw UsageError("sequence terms must be nonempty");
    }
    if (tail_.mode == TailSpec::Mode::EventuallyPeriodic) {
      if (tail_.period == 0) throw UsageError("period must be positive");
      if (terms_.size() < tail_.preperiod + tail_.period)
        throw UsageError("sequence shorter than preperiod + period");
      for (std::size_t i = tail_.preperiod + tail_.period; i < terms_.size(); ++i)
        if (!(terms_[i] == terms_[i - tail_.period]))
          throw UsageError("term " + std::to_string(i) + " breaks the declared period");
    } else if (tail_.window == 0 || tail_.window > terms_.size()) {
      throw UsageError("tail window longer than the sequence");
    }
  }

  const std::vector<PointSet>& terms() const { return terms_; }
  const TailSpec& tail() const { return tail_; }
  std::size_t size() const { return terms_.size(); }

  /// Index range [begin, end) whose terms recur forever (or the observed window).
  std::pair<std::size_t, std::size_t> tail_range() const {
    if (tail_.mode == TailSpec::Mode::EventuallyPeriodic)
      return {tail_.preperiod, tail_.preperiod + tail_.period};
    return {terms_.size() - tail_.window, terms_.size()};
  }

 private:
  std::vector<PointSet> terms_;
  TailSpec tail_;
};

struct KuratowskiLimits {
  PointSet LS;
  PointSet LI;
  bool approximate = false;
  std::optional<std::size_t> window;
};

/// LS/LI at one level: x is in LS when St[x,U] meets terms frequently, in LI when residually.
inline KuratowskiLimits kuratowski_limits(const AdmissibleFamily& f, const SetSequence& seq, int level) {
  f.check_level(level);
  const std::size_t n = f.space().size();
  if (seq.terms().front().universe() != n) throw UsageError("sequence over a different space");
  auto [b, e] = seq.tail_range();
  KuratowskiLimits r{PointSet(n), PointSet::full(n), !seq.tail().exact(), std::nullopt};
  if (!seq.tail().exact()) r.window = seq.tail().window;
  for (std::size_t i = b; i < e; ++i) {
    // St[x,U] meets F iff x ∈ St[F,U] (stars of points are symmetric).
    const PointSet s = f.star(seq.terms()[i], level);
    r.LS |= s;
    r.LI &= s;
  }
  return r;
}

/// LS/LI over every level at once: the neighborhood-basis form on a finite space.
inline KuratowskiLimits kuratowski_limits_all(const AdmissibleFamily& f, const SetSequence& seq) {
  KuratowskiLimits r = kuratowski_limits(f, seq, 1);
  for (int k = 2; k <= f.size(); ++k) {
    const auto lk = kuratowski_limits(f, seq, k);
    r.LS &= lk.LS;
    r.LI &= lk.LI;
  }
  return r;
}

/// converges_to_O applied to ρ_H(F_n, target).
inline ConvergenceDiagnostic hausdorff_converges(const AdmissibleFamily& f, const SetSequence& seq,
                                                 const PointSet& target, int depth) {
  detail::require_nonempty(f, target, "target");
  std::vector<UpSet> vals;
  std::size_t upto = seq.size();
  if (seq.tail().exact()) upto = seq.tail().preperiod + seq.tail().period;
  vals.reserve(upto);
  for (std::size_t i = 0; i < upto; ++i) vals.push_back(rho_H(f, seq.terms()[i], target));
  return converges_to_O(vals, depth, seq.tail());
}

}  // namespace hyperdyn
