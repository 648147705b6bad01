#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/dynamics.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/point_set.hpp"
#include "hyperdyn/random.hpp"

namespace hyperdyn {

/// Point-to-set map over a finite space with memoized, nonempty values.
class SetValuedMap {
 public:
  using Fn = std::function<PointSet(PointIndex)>;

  SetValuedMap() = default;
  SetValuedMap(std::string name, std::size_t universe, Fn fn, bool approximate = false)
      : state_(std::make_shared<State>()) {
    if (!fn) throw UsageError("set-valued map needs an evaluator");
    state_->name = std::move(name);
    state_->n = universe;
    state_->fn = std::move(fn);
    state_->approximate = approximate;
  }

  static SetValuedMap table(std::string name, std::vector<PointSet> values) {
    if (values.empty()) throw UsageError("table map needs values");
    const std::size_t n = values.size();
    for (const auto& v : values)
      if (v.universe() != n) throw UsageError("table values over a different space");
    auto vals = std::make_shared<const std::vector<PointSet>>(std::move(values));
    return SetValuedMap(std::move(name), n, [vals](PointIndex x) { return vals->at(x); });
  }
  static SetValuedMap constant(std::string name, PointSet value) {
    const std::size_t n = value.universe();
    return SetValuedMap(std::move(name), n, [value](PointIndex) { return value; });
  }
  static SetValuedMap orbit(const SemigroupSample& a, int k) {
    a.check_filter_level(k);
    return SetValuedMap("K_A" + std::to_string(k), a.space().size(), [a, k](PointIndex x) { return a.orbit(k, x); },
                        a.sampled());
  }
  static SetValuedMap prolongation(const SemigroupSample& a, const AdmissibleFamily& f, int k, int j) {
    return SetValuedMap("D_A" + std::to_string(k) + "@" + std::to_string(j), a.space().size(),
                        [a, f, k, j](PointIndex x) { return prolongation_D(a, f, k, x, j).at_level; }, a.sampled());
  }
  static SetValuedMap limit(const SemigroupSample& a, const AdmissibleFamily& f) {
    return SetValuedMap("L_F", a.space().size(), [a, f](PointIndex x) { return limit_L(a, f, x).set; }, a.sampled());
  }
  static SetValuedMap prolongational(const SemigroupSample& a, const AdmissibleFamily& f, int depth) {
    return SetValuedMap("J_F@" + std::to_string(depth), a.space().size(),
                        [a, f, depth](PointIndex x) { return prolongational_J(a, f, x, depth).set; }, a.sampled());
  }
  static SetValuedMap union_of(const SetValuedMap& a, const SetValuedMap& b) {
    if (a.universe() != b.universe()) throw UsageError("maps over different spaces");
    return SetValuedMap(a.name() + "∪" + b.name(), a.universe(), [a, b](PointIndex x) { return a(x) | b(x); },
                        a.approximate() || b.approximate());
  }

  PointSet operator()(PointIndex x) const {
    const auto& s = state();
    if (x >= s.n) throw UsageError("point index outside space");
    {
      std::lock_guard<std::mutex> lock(s.mu);
      auto it = s.memo.find(x);
      if (it != s.memo.end()) return it->second;
    }
    PointSet v = s.fn(x);
    if (v.universe() != s.n) throw UsageError("map value over a different space");
    if (v.empty()) throw DomainError("map " + s.name + " is empty at point " + std::to_string(x));
    std::lock_guard<std::mutex> lock(s.mu);
    s.memo.emplace(x, v);
    return v;
  }

  const std::string& name() const { return state().name; }
  std::size_t universe() const { return state().n; }
  bool approximate() const { return state().approximate; }

 private:
  struct State {
    std::string name;
    std::size_t n = 0;
    Fn fn;
    bool approximate = false;
    mutable std::mutex mu;
    mutable std::unordered_map<PointIndex, PointSet> memo;
  };
  const State& state() const {
    if (!state_) throw UsageError("empty set-valued map");
    return *state_;
  }
  std::shared_ptr<State> state_;
};

struct ContinuityCounterexample {
  PointIndex y = 0;  // neighbor of x
  PointIndex z = 0;  // escaping (USC) or missed (LSC) value point
  int level = 0;     // witness level at which it was found
};

struct SemicontinuityResult {
  bool holds = false;
  std::optional<int> witness_level;
  std::optional<ContinuityCounterexample> counterexample;
  bool degenerate = false;
  bool approximate = false;
};

namespace detail {

template <class Test>
SemicontinuityResult semicontinuity(const SetValuedMap& F, const AdmissibleFamily& f, PointIndex x, int k,
                                    const WitnessOptions& opts, Test&& test) {
  if (F.universe() != f.space().size()) throw UsageError("map and family over different spaces");
  f.check_level(k);
  SemicontinuityResult r;
  r.approximate = F.approximate();
  const auto range = witness_range(f, f.finest_nondegenerate_level(x), k, opts);
  r.degenerate = range.degenerate;
  r.witness_level = coarsest_passing(f, range, [&](int j) {
    bool ok = true;
    f.star_point(x, j).for_each([&](PointIndex y) {
      if (!ok) return;
      if (auto z = test(y)) {
        ok = false;
        if (!r.counterexample) r.counterexample = ContinuityCounterexample{y, *z, j};
      }
    });
    return ok;
  });
  r.holds = r.witness_level.has_value();
  if (r.holds) r.counterexample.reset();
  return r;
}

}  // namespace detail

/// Some j with F(y) ⊂ St[F(x),U_k] for all y ∈ St[x,U_j].
inline SemicontinuityResult usc_at(const SetValuedMap& F, const AdmissibleFamily& f, PointIndex x, int k,
                                   const WitnessOptions& opts = {}) {
  f.check_level(k);
  const PointSet target = f.star(F(x), k);
  return detail::semicontinuity(F, f, x, k, opts,
                                [&](PointIndex y) { return F(y).first_not_in(target); });
}

/// Some j with F(x) ⊂ St[F(y),U_k] for all y ∈ St[x,U_j].
inline SemicontinuityResult lsc_at(const SetValuedMap& F, const AdmissibleFamily& f, PointIndex x, int k,
                                   const WitnessOptions& opts = {}) {
  f.check_level(k);
  const PointSet fx = F(x);
  return detail::semicontinuity(F, f, x, k, opts,
                                [&](PointIndex y) { return fx.first_not_in(f.star(F(y), k)); });
}

struct ContinuityVerdict {
  PointIndex x = 0;
  int level = 0;
  SemicontinuityResult usc;
  SemicontinuityResult lsc;
  bool continuous = false;
};

inline ContinuityVerdict hausdorff_continuous_at(const SetValuedMap& F, const AdmissibleFamily& f, PointIndex x,
                                                 int k, const WitnessOptions& opts = {}) {
  ContinuityVerdict v;
  v.x = x;
  v.level = k;
  v.usc = usc_at(F, f, x, k, opts);
  v.lsc = lsc_at(F, f, x, k, opts);
  v.continuous = v.usc.holds && v.lsc.holds;
  return v;
}

struct ContinuityReport {
  std::string map_name;
  std::vector<ContinuityVerdict> entries;

  bool all_continuous() const {
    return std::all_of(entries.begin(), entries.end(), [](const ContinuityVerdict& v) { return v.continuous; });
  }
};

inline ContinuityReport continuity_report(const SetValuedMap& F, const AdmissibleFamily& f,
                                          const std::vector<PointIndex>& points, const std::vector<int>& levels,
                                          const WitnessOptions& opts = {}) {
  ContinuityReport r;
  r.map_name = F.name();
  for (PointIndex x : points)
    for (int k : levels) r.entries.push_back(hausdorff_continuous_at(F, f, x, k, opts));
  return r;
}

// ---------------------------------------------------------------------------
// Theorem harness

enum class Theorem { KA_LSC, K_EQ, T1, T2, T7, T10, PK_KP, T5, UNION_USC };

inline constexpr std::array<std::pair<Theorem, std::string_view>, 9> kTheoremNames{{
    {Theorem::KA_LSC, "KA_LSC"},
    {Theorem::K_EQ, "K_EQ"},
    {Theorem::T1, "T1"},
    {Theorem::T2, "T2"},
    {Theorem::T7, "T7"},
    {Theorem::T10, "T10"},
    {Theorem::PK_KP, "PK_KP"},
    {Theorem::T5, "T5"},
    {Theorem::UNION_USC, "UNION_USC"},
}};

inline std::string_view to_string(Theorem t) {
  for (auto [k, n] : kTheoremNames)
    if (k == t) return n;
  return "?";
}

inline Theorem parse_theorem(std::string_view name) {
  for (auto [k, n] : kTheoremNames)
    if (n == name) return k;
  throw UsageError("unknown theorem name '" + std::string(name) + "'");
}

/// Continuum properties of a modeled system, declared rather than inferred.
struct ScenarioFlags {
  bool locally_compact = true;
  bool locally_connected = true;
  bool connected_filter_sets = false;
  bool cocompact_filter = false;
  bool H1 = false;
  bool H2 = false;
  bool H3 = false;
};

/// Everything a theorem check needs from a scenario.
struct TheoremContext {
  std::string scenario;
  AdmissibleFamily family;
  SemigroupSample action;
  std::vector<PointIndex> points;
  std::vector<int> levels;
  ScenarioFlags flags;
  bool exact = false;
  std::string approximation_cause;
  WitnessOptions witness;
  /// Small explicit families for the set-level theorems (PK_KP, T5).
  std::vector<AdmissibleFamily> corpus;
  std::size_t sequences_per_family = 40;
  /// Cap on points drawn from a set when a condition must hold on all of it.
  std::size_t set_sample = 12;
  std::uint64_t seed = 1;
};

struct TheoremCheck {
  std::string subject;
  int level = 0;
  bool hypotheses_met = true;
  bool equivalence = false;
  bool lhs = false;
  bool rhs = false;
  bool agree = true;
  bool approximate = false;
  std::string cause;
  std::string detail;
};

struct TheoremReport {
  std::string name;
  std::string scenario;
  std::vector<TheoremCheck> checks;
  std::size_t exact_failures = 0;
  std::size_t approximate_disagreements = 0;
  std::size_t unmet_disagreements = 0;

  bool passed() const { return exact_failures == 0; }
};

namespace detail {

/// Evenly spaced deterministic subsample of at most `cap` members.
inline std::vector<PointIndex> sample_members(const PointSet& s, std::size_t cap) {
  auto all = s.indices();
  if (all.size() <= cap) return all;
  std::vector<PointIndex> out;
  for (std::size_t i = 0; i < cap; ++i) out.push_back(all[i * all.size() / cap]);
  return out;
}

inline void finalize_check(TheoremReport& rep, TheoremCheck c) {
  c.agree = c.equivalence ? (c.lhs == c.rhs) : (!c.lhs || c.rhs);
  if (!c.agree) {
    if (!c.hypotheses_met)
      ++rep.unmet_disagreements;
    else if (c.approximate)
      ++rep.approximate_disagreements;
    else
      ++rep.exact_failures;
  }
  rep.checks.push_back(std::move(c));
}

inline std::string point_subject(const TheoremContext& ctx, PointIndex x) {
  std::ostringstream os;
  os << "x=" << x << " (";
  const auto c = ctx.family.space().coords(x);
  for (std::size_t a = 0; a < c.size(); ++a) os << (a ? "," : "") << c[a];
  os << ")";
  return os.str();
}

inline std::vector<int> filter_levels_to_test(const SemigroupSample& a) {
  std::vector<int> v{1};
  if (a.depth() > 1) v.push_back(a.depth());
  return v;
}

inline std::string describe(const SemicontinuityResult& r, const char* what) {
  std::ostringstream os;
  os << what << ' ';
  if (r.holds)
    os << "witness j=" << *r.witness_level;
  else if (r.counterexample)
    os << "counterexample y=" << r.counterexample->y << " z=" << r.counterexample->z << " at j=" << r.counterexample->level;
  else
    os << "no witness";
  return os.str();
}

/// V from the T5 refinement construction for (A, U): the common refinement of the V_i.
inline Covering vietoris_refinement(const PointSet& A, const Covering& U) {
  const std::size_t n = A.universe();
  std::vector<PointSet> hit;
  for (const auto& m : U.members())
    if (m.intersects(A)) hit.push_back(m);
  const PointSet rest = PointSet::full(n) - A;
  std::vector<PointSet> cur{PointSet::full(n)};
  for (std::size_t i = 0; i < hit.size(); ++i) {
    const PointIndex xi = *(hit[i] & A).first();
    const PointSet without = PointSet::full(n) - PointSet::singleton(n, xi);
    std::vector<PointSet> Vi;
    for (std::size_t j = 0; j < hit.size(); ++j) {
      PointSet m = j == i ? hit[j] : (hit[j] & without);
      if (!m.empty()) Vi.push_back(std::move(m));
    }
    if (!rest.empty()) Vi.push_back(rest);
    std::vector<PointSet> next;
    for (const auto& c : cur)
      for (const auto& v : Vi) {
        PointSet m = c & v;
        if (m.empty()) continue;
        if (std::find(next.begin(), next.end(), m) == next.end()) next.push_back(std::move(m));
      }
    cur.swap(next);
  }
  return Covering(std::move(cur));
}

inline bool in_ball_cover(const PointSet& B, const PointSet& A, const Covering& V) {
  return A.subset_of(star(B, V)) && B.subset_of(star(A, V));
}

}  // namespace detail

/// ⟨[A,U]⟩ ⊂ B_H(A,U) for all B, and B_H(A,V) ⊂ ⟨[A,U]⟩ for the constructed V; exhaustive.
struct VietorisSandwichResult {
  std::size_t pairs = 0;
  std::size_t inner_violations = 0;   // B ∈ ⟨[A,U]⟩ but not in B_H(A,U)
  std::size_t outer_violations = 0;   // B ∈ B_H(A,V) but not in ⟨[A,U]⟩
  std::size_t family_level_found = 0; // (A,U) with some family level V satisfying the inclusion
  std::string first_violation;
};

inline VietorisSandwichResult check_vietoris_sandwich(const AdmissibleFamily& f) {
  const std::size_t n = f.space().size();
  if (n > 12) throw UsageError("exhaustive Vietoris check needs at most 12 points");
  VietorisSandwichResult r;
  const std::uint64_t top = (std::uint64_t{1} << n) - 1;
  for (int u = 1; u <= f.size(); ++u) {
    const Covering U = f.covering(u);
    for (std::uint64_t am = 1; am <= top; ++am) {
      const PointSet A = PointSet::from_mask(n, am);
      const Covering V = detail::vietoris_refinement(A, U);
      ++r.pairs;
      std::vector<bool> level_ok(f.size() + 1, true);
      for (std::uint64_t bm = 1; bm <= top; ++bm) {
        const PointSet B = PointSet::from_mask(n, bm);
        const bool viet = vietoris_member(B, A, U);
        if (viet && !in_ball_BH(f, B, A, u)) {
          if (r.first_violation.empty())
            r.first_violation = "inner: U=" + std::to_string(u) + " A=" + std::to_string(am) + " B=" + std::to_string(bm);
          ++r.inner_violations;
        }
        if (detail::in_ball_cover(B, A, V) && !viet) {
          if (r.first_violation.empty())
            r.first_violation = "outer: U=" + std::to_string(u) + " A=" + std::to_string(am) + " B=" + std::to_string(bm);
          ++r.outer_violations;
        }
        for (int v = 1; v <= f.size(); ++v)
          if (level_ok[v] && in_ball_BH(f, B, A, v) && !viet) level_ok[v] = false;
      }
      for (int v = 1; v <= f.size(); ++v)
        if (level_ok[v]) {
          ++r.family_level_found;
          break;
        }
    }
  }
  return r;
}

/// Random eventually periodic sequence over an n-point space; half get a constant tail.
inline SetSequence random_periodic_sequence(std::size_t n, Rng& rng) {
  if (n == 0 || n > 63) throw UsageError("random sequences need 1..63 points");
  const std::uint64_t top = (std::uint64_t{1} << n) - 1;
  auto draw = [&] { return PointSet::from_mask(n, 1 + rng.below(top)); };
  const std::size_t pre = rng.below(4);
  const std::size_t period = 1 + rng.below(4);
  const bool constant_tail = rng.coin();
  std::vector<PointSet> terms;
  for (std::size_t i = 0; i < pre; ++i) terms.push_back(draw());
  const PointSet c = draw();
  for (std::size_t i = 0; i < period; ++i) terms.push_back(constant_tail ? c : draw());
  for (std::size_t i = 0; i < period; ++i) terms.push_back(terms[pre + i]);
  return SetSequence(std::move(terms), TailSpec::periodic(pre, period));
}

/// Exact Kuratowski limit K = LS = LI versus Hausdorff convergence to LS at full depth.
struct KuratowskiHausdorffCase {
  bool kuratowski = false;
  bool hausdorff = false;
};

inline KuratowskiHausdorffCase kuratowski_vs_hausdorff(const AdmissibleFamily& f, const SetSequence& seq) {
  const auto lim = kuratowski_limits_all(f, seq);
  KuratowskiHausdorffCase c;
  c.kuratowski = lim.LS == lim.LI && !lim.LS.empty();
  const PointSet K = lim.LS.empty() ? seq.terms().back() : lim.LS;
  c.hausdorff = hausdorff_converges(f, seq, K, f.size()).attained;
  return c;
}

inline TheoremReport verify_theorem(Theorem thm, const TheoremContext& ctx) {
  TheoremReport rep;
  rep.name = std::string(to_string(thm));
  rep.scenario = ctx.scenario;
  const auto& f = ctx.family;
  const auto& a = ctx.action;
  const bool approx = !ctx.exact;
  const std::string cause = approx ? ctx.approximation_cause : std::string();
  const auto& wo = ctx.witness;

  auto base = [&](std::string subject, int level) {
    TheoremCheck c;
    c.subject = std::move(subject);
    c.level = level;
    c.approximate = approx;
    c.cause = cause;
    return c;
  };
  auto mark_subsampled = [&](TheoremCheck& c, std::size_t used, std::size_t total) {
    if (used < total) {
      c.approximate = true;
      if (!c.cause.empty()) c.cause += "; ";
      c.cause += "condition checked on " + std::to_string(used) + " of " + std::to_string(total) + " points";
    }
  };

  switch (thm) {
    case Theorem::KA_LSC: {
      for (int i : detail::filter_levels_to_test(a)) {
        const auto K = SetValuedMap::orbit(a, i);
        for (PointIndex x : ctx.points)
          for (int k : ctx.levels) {
            auto c = base(detail::point_subject(ctx, x) + " A_" + std::to_string(i), k);
            const auto r = lsc_at(K, f, x, k, wo);
            c.lhs = true;
            c.rhs = r.holds;
            c.detail = detail::describe(r, "lsc");
            detail::finalize_check(rep, std::move(c));
          }
      }
      break;
    }
    case Theorem::K_EQ: {
      const bool converse = ctx.flags.locally_compact && ctx.flags.connected_filter_sets;
      for (int i : detail::filter_levels_to_test(a)) {
        const auto K = SetValuedMap::orbit(a, i);
        for (PointIndex x : ctx.points)
          for (int k : ctx.levels) {
            auto c = base(detail::point_subject(ctx, x) + " A_" + std::to_string(i), k);
            c.equivalence = converse;
            const auto u = usc_at(K, f, x, k, wo);
            const int j = u.holds ? *u.witness_level : witness_range(f, f.finest_nondegenerate_level(x), k, wo).finest;
            const PointSet D = prolongation_D(a, f, i, x, j).at_level;
            c.lhs = u.holds;
            c.rhs = in_ball_BH(f, D, K(x), k);
            c.detail = detail::describe(u, "usc") + "; D at j=" + std::to_string(j) + (c.rhs ? " matches" : " differs");
            detail::finalize_check(rep, std::move(c));
          }
      }
      break;
    }
    case Theorem::T1: {
      const auto K = SetValuedMap::orbit(a, 1);
      for (PointIndex x : ctx.points)
        for (int k : ctx.levels) {
          auto c = base(detail::point_subject(ctx, x), k);
          const PointSet Y = K(x);
          const auto sample = detail::sample_members(Y, ctx.set_sample);
          mark_subsampled(c, sample.size(), Y.count());
          c.lhs = true;
          for (PointIndex y : sample)
            if (!usc_at(K, f, y, k, wo).holds) {
              c.lhs = false;
              c.detail = "K_S not usc at " + std::to_string(y) + "; ";
              break;
            }
          const auto st = is_stable(a, f, Y, k, wo);
          c.rhs = st.holds;
          c.detail += st.holds ? "stable, witness j=" + std::to_string(*st.witness_level) : "not stable";
          detail::finalize_check(rep, std::move(c));
        }
      break;
    }
    case Theorem::T2: {
      const auto& fl = ctx.flags;
      const bool converse = fl.locally_compact && fl.locally_connected && fl.cocompact_filter && fl.connected_filter_sets;
      std::vector<SetValuedMap> Ks;
      for (int i = 1; i <= a.depth(); ++i) Ks.push_back(SetValuedMap::orbit(a, i));
      const auto L = SetValuedMap::limit(a, f);
      for (PointIndex x : ctx.points)
        for (int k : ctx.levels) {
          auto c = base(detail::point_subject(ctx, x), k);
          c.equivalence = converse;
          c.lhs = true;
          int j = 0;
          for (int i = 1; i <= a.depth(); ++i) {
            const auto u = usc_at(Ks[i - 1], f, x, k, wo);
            if (!u.holds) {
              c.lhs = false;
              c.detail = "K_A" + std::to_string(i) + " not usc; ";
              break;
            }
            j = std::max(j, *u.witness_level);
          }
          if (!c.lhs) j = witness_range(f, f.finest_nondegenerate_level(x), k, wo).finest;
          const PointSet J = prolongational_J(a, f, x, j).set;
          c.rhs = in_ball_BH(f, J, L(x), k);
          c.detail += "J at depth " + std::to_string(j) + (c.rhs ? " matches L" : " differs from L");
          detail::finalize_check(rep, std::move(c));
        }
      break;
    }
    case Theorem::T7: {
      const auto& fl = ctx.flags;
      const bool hyp = fl.locally_compact && fl.connected_filter_sets && fl.H1 && fl.H3;
      const auto L = SetValuedMap::limit(a, f);
      for (PointIndex x : ctx.points)
        for (int k : ctx.levels) {
          auto c = base(detail::point_subject(ctx, x), k);
          c.equivalence = true;
          c.hypotheses_met = hyp;
          const PointSet Lx = L(x);
          const auto sample = detail::sample_members(Lx, ctx.set_sample);
          mark_subsampled(c, sample.size(), Lx.count());
          c.lhs = true;
          for (PointIndex y : sample)
            if (!usc_at(L, f, y, k, wo).holds) {
              c.lhs = false;
              c.detail = "L not usc at " + std::to_string(y) + "; ";
              break;
            }
          const auto mn = is_minimal(a, Lx);
          const auto ev = is_eventually_stable(a, f, Lx, k, wo);
          c.rhs = mn.holds && ev.holds;
          c.detail += std::string(mn.holds ? "minimal" : "not minimal") + ", " +
                      (ev.holds ? "eventually stable" : "not eventually stable");
          if (!hyp) c.detail += "; hypotheses not met";
          detail::finalize_check(rep, std::move(c));
        }
      break;
    }
    case Theorem::T10: {
      const auto& fl = ctx.flags;
      const bool hyp = fl.locally_compact && fl.connected_filter_sets && fl.H1 && fl.H2 && fl.H3;
      const auto L = SetValuedMap::limit(a, f);
      for (int k : ctx.levels) {
        auto c = base("sampled points", k);
        c.equivalence = true;
        c.hypotheses_met = hyp;
        mark_subsampled(c, ctx.points.size(), f.space().size());
        c.lhs = true;
        c.rhs = true;
        std::string why;
        for (PointIndex x : ctx.points) {
          if (c.lhs && !hausdorff_continuous_at(L, f, x, k, wo).continuous) {
            c.lhs = false;
            why += "L not continuous at " + std::to_string(x) + "; ";
          }
          if (c.rhs && !is_eventually_stable(a, f, L(x), k, wo).holds) {
            c.rhs = false;
            why += "L(" + std::to_string(x) + ") not eventually stable; ";
          }
        }
        c.detail = why.empty() ? "continuous and eventually stable at every sampled point" : why;
        if (!hyp) c.detail += "hypotheses not met";
        detail::finalize_check(rep, std::move(c));
      }
      break;
    }
    case Theorem::PK_KP: {
      Rng rng(ctx.seed);
      std::vector<AdmissibleFamily> fams = ctx.corpus;
      if (fams.empty() && f.space().size() <= 12) fams.push_back(f);
      if (fams.empty()) throw UsageError("PK_KP needs a small space or a corpus");
      for (std::size_t fi = 0; fi < fams.size(); ++fi) {
        for (std::size_t s = 0; s < ctx.sequences_per_family; ++s) {
          const auto seq = random_periodic_sequence(fams[fi].space().size(), rng);
          const auto r = kuratowski_vs_hausdorff(fams[fi], seq);
          TheoremCheck c;
          c.subject = "family " + std::to_string(fi) + " sequence " + std::to_string(s);
          c.level = fams[fi].size();
          c.equivalence = true;
          c.lhs = r.kuratowski;
          c.rhs = r.hausdorff;
          detail::finalize_check(rep, std::move(c));
        }
      }
      break;
    }
    case Theorem::T5: {
      std::vector<AdmissibleFamily> fams = ctx.corpus;
      if (fams.empty() && f.space().size() <= 12) fams.push_back(f);
      if (fams.empty()) throw UsageError("T5 needs a small space or a corpus");
      for (std::size_t fi = 0; fi < fams.size(); ++fi) {
        const auto r = check_vietoris_sandwich(fams[fi]);
        TheoremCheck c;
        c.subject = "family " + std::to_string(fi);
        c.lhs = true;
        c.rhs = r.inner_violations == 0 && r.outer_violations == 0;
        c.detail = std::to_string(r.pairs) + " (A,U) pairs; " + std::to_string(r.family_level_found) +
                   " with a family level V" + (r.first_violation.empty() ? "" : "; " + r.first_violation);
        detail::finalize_check(rep, std::move(c));
      }
      break;
    }
    case Theorem::UNION_USC: {
      const auto F1 = SetValuedMap::orbit(a, 1);
      const auto F2 = SetValuedMap::limit(a, f);
      const auto F = SetValuedMap::union_of(F1, F2);
      for (PointIndex x : ctx.points)
        for (int k : ctx.levels) {
          auto c = base(detail::point_subject(ctx, x), k);
          c.lhs = usc_at(F1, f, x, k, wo).holds && usc_at(F2, f, x, k, wo).holds;
          c.rhs = usc_at(F, f, x, k, wo).holds;
          detail::finalize_check(rep, std::move(c));
        }
      break;
    }
  }
  return rep;
}

inline TheoremReport verify_theorem(std::string_view name, const TheoremContext& ctx) {
  return verify_theorem(parse_theorem(name), ctx);
}

}  // namespace hyperdyn
