#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hyperdyn/continuity.hpp"
#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/dynamics.hpp"
#include "hyperdyn/phase_space.hpp"
#include "hyperdyn/random.hpp"

namespace hyperdyn {

/// A modeled system: grid, covering family, sampled action, declared properties and
/// the ground-truth limit set where one is known in closed form.
struct Scenario {
  std::string name;
  GridSpec grid;
  SpacePtr space;
  AdmissibleFamily family;
  SemigroupSample action;
  /// Every action of the scenario; action == actions[primary].
  std::vector<SemigroupSample> actions;
  std::size_t primary = 0;
  ScenarioFlags flags;
  bool exact = false;
  std::string approximation_cause;
  WitnessOptions witness;
  /// Target level used by stability and continuity checks.
  int target_level = 1;
  std::vector<PointIndex> sample_points;
  std::vector<PointIndex> theorem_points;
  std::vector<int> test_levels;
  std::map<std::string, double> constants;
  /// Cells of the true limit set from x, when known.
  std::function<PointSet(PointIndex)> expected_limit;
  /// Cells of the limit set as claimed in the literature, when it differs from expected_limit.
  std::function<PointSet(PointIndex)> claimed_limit;

  PointIndex at(std::initializer_list<double> c) const { return snap(*space, c); }

  TheoremContext theorem_context(std::uint64_t seed, std::size_t corpus_size = 6) const;
};

std::vector<AdmissibleFamily> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_points = 6,
                                            std::size_t max_coverings = 4);

namespace detail {

inline std::vector<PointIndex> snap_all(const Space& s, const std::vector<std::vector<double>>& pts) {
  std::vector<PointIndex> out;
  for (const auto& p : pts) out.push_back(snap(s, p));
  return out;
}

inline PointSet cells_where(const Space& s, const std::function<bool(std::span<const double>)>& pred) {
  PointSet out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (pred(s.coords(static_cast<PointIndex>(i)))) out.insert(static_cast<PointIndex>(i));
  return out;
}

inline double norm2d(std::span<const double> c) { return std::hypot(c[0], c[1]); }

}  // namespace detail

inline TheoremContext Scenario::theorem_context(std::uint64_t seed, std::size_t corpus_size) const {
  TheoremContext ctx;
  ctx.scenario = name;
  ctx.family = family;
  ctx.action = action;
  ctx.points = theorem_points;
  ctx.levels = test_levels;
  ctx.flags = flags;
  ctx.exact = exact;
  ctx.approximation_cause = approximation_cause;
  ctx.witness = witness;
  ctx.corpus = random_corpus(seed, corpus_size);
  ctx.seed = seed;
  return ctx;
}

// ---------------------------------------------------------------------------
// Contraction semigroups x ↦ p + L(x - p), one ℕ-action per fixed point.

struct ContractionParams {
  double L = 0.5;
  std::vector<std::vector<double>> fixed_points = [] {
    std::vector<std::vector<double>> v;
    for (int i = 0; i < 50; ++i) v.push_back({0.02 * i});
    return v;
  }();
  GridSpec grid = GridSpec::box({0.0}, {1.0}, 0.01);
  double eps1 = 0.8;
  int levels = 8;
  int elements = 40;
  int filter_depth = 30;
  std::size_t primary = 25;
  /// Stability target ε; δ = ε(1 - L)/2.
  double epsilon = 0.2;
  int target_level = 3;
};

inline LabelAlgebra naturals_algebra(int depth) {
  LabelAlgebra a;
  a.compose = [](const Label& x, const Label& y) { return Label{x[0] + y[0]}; };
  a.right_quotient = [](const Label& b, const Label& s) -> std::optional<Label> {
    if (b[0] - s[0] < 1.0) return std::nullopt;
    return Label{b[0] - s[0]};
  };
  a.in_level = [depth](const Label& x, int k) { return std::min(static_cast<int>(x[0]), depth) >= k; };
  a.probes = {{1.0}, {2.0}, {3.0}};
  return a;
}

inline Scenario scenario_contraction(const ContractionParams& p = {}) {
  if (!(p.L > 0.0 && p.L < 1.0)) throw UsageError("contraction factor must lie in (0, 1)");
  if (p.fixed_points.empty()) throw UsageError("contraction needs fixed points");
  if (p.primary >= p.fixed_points.size()) throw UsageError("primary fixed point out of range");
  if (p.elements < p.filter_depth) throw UsageError("need at least as many elements as filter levels");
  Scenario s;
  s.name = "contraction";
  s.grid = p.grid;
  s.space = build_space(p.grid);
  s.family = build_eps_chain(s.space, p.eps1, p.levels);
  const std::size_t d = s.space->dim();
  std::vector<int> levels;
  std::vector<Label> labels;
  for (int n = 1; n <= p.elements; ++n) {
    levels.push_back(std::min(n, p.filter_depth));
    labels.push_back({static_cast<double>(n)});
  }
  for (const auto& fp : p.fixed_points) {
    if (fp.size() != d) throw UsageError("fixed point dimension differs from the grid");
    std::vector<SemigroupSample::PointMap> maps;
    for (int n = 1; n <= p.elements; ++n) {
      const double Ln = std::pow(p.L, n);
      maps.push_back([fp, Ln](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t a = 0; a < x.size(); ++a) y[a] = fp[a] + Ln * (x[a] - fp[a]);
        return y;
      });
    }
    auto act = SemigroupSample::from_maps(s.space, std::move(maps), levels, p.filter_depth, labels);
    act.set_label_algebra(naturals_algebra(p.filter_depth));
    act.set_sampling_note("iterates 1.." + std::to_string(p.elements));
    s.actions.push_back(std::move(act));
  }
  s.primary = p.primary;
  s.action = s.actions[p.primary];
  s.flags = {.locally_compact = true, .locally_connected = true, .connected_filter_sets = false,
             .cocompact_filter = false, .H1 = true, .H2 = true, .H3 = true};
  s.exact = false;
  s.approximation_cause = "iterates truncated at n=" + std::to_string(p.elements) + " and snapped to the grid";
  s.target_level = p.target_level;
  s.constants = {{"L", p.L}, {"epsilon", p.epsilon}, {"delta", p.epsilon * (1.0 - p.L) / 2.0}};
  std::vector<std::vector<double>> pts;
  for (double v : {0.0, 0.13, 0.5, 0.77, 1.0}) pts.push_back(std::vector<double>(d, v));
  s.sample_points = detail::snap_all(*s.space, pts);
  s.theorem_points = s.sample_points;
  s.test_levels = {p.target_level};
  const PointIndex fixed = snap(*s.space, p.fixed_points[p.primary]);
  const std::size_t n = s.space->size();
  s.expected_limit = [fixed, n](PointIndex) { return PointSet::singleton(n, fixed); };
  return s;
}

// ---------------------------------------------------------------------------
// Multi-time action of S = ℝ₊² on the plane: (s,t)·(x,y) = (bˢx, bᵗy),
// filtered by A_i = S + (i-1)Δu.

struct MultitimeParams {
  double b = 0.5;
  GridSpec grid = GridSpec::box({-2.0, -2.0}, {2.0, 2.0}, 0.05);
  double step = 0.25;
  double horizon = 8.0;
  int filter_depth = 25;
  std::array<double, 2> direction{1.0, 0.0};
  double eps1 = 0.8;
  int levels = 8;
  int target_level = 3;
};

inline Scenario scenario_multitime(const MultitimeParams& p = {}) {
  if (!(p.b > 0.0 && p.b < 1.0)) throw UsageError("multi-time rate b must lie in (0, 1)");
  if (p.grid.dimension != 2) throw UsageError("multi-time scenario lives on a planar grid");
  for (double u : p.direction)
    if (u != 0.0 && u != 1.0) throw UsageError("filter direction components must be 0 or 1");
  if (p.direction[0] == 0.0 && p.direction[1] == 0.0) throw UsageError("filter direction must be nonzero");
  const double top = (p.filter_depth - 1) * p.step;
  if (top > p.horizon + 1e-9) throw UsageError("filter depth reaches past the time horizon");
  Scenario s;
  s.name = "multitime";
  s.grid = p.grid;
  s.space = build_space(p.grid);
  s.family = build_eps_chain(s.space, p.eps1, p.levels);
  const int steps = static_cast<int>(std::floor(p.horizon / p.step + 1e-9));
  const auto dir = p.direction;
  const double dt = p.step;
  const int K = p.filter_depth;
  auto level_of = [dir, dt, K](const Label& l) {
    int lv = K;
    for (int c = 0; c < 2; ++c) {
      if (dir[c] == 0.0) continue;
      if (l[c] < -1e-9) return 0;
      lv = std::min(lv, static_cast<int>(std::floor(l[c] / dt + 1e-9)) + 1);
    }
    return lv;
  };
  std::vector<int> levels;
  std::vector<Label> labels;
  std::vector<SemigroupSample::PointMap> maps;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const double sx = i * p.step, ty = j * p.step;
      labels.push_back({sx, ty});
      levels.push_back(level_of(labels.back()));
      const double fx = std::pow(p.b, sx), fy = std::pow(p.b, ty);
      maps.push_back([fx, fy](std::span<const double> x) { return std::vector<double>{fx * x[0], fy * x[1]}; });
    }
  s.action = SemigroupSample::from_maps(s.space, std::move(maps), std::move(levels), K, std::move(labels));
  LabelAlgebra alg;
  alg.compose = [](const Label& a, const Label& c) { return Label{a[0] + c[0], a[1] + c[1]}; };
  alg.right_quotient = [](const Label& bl, const Label& sl) -> std::optional<Label> {
    Label q{bl[0] - sl[0], bl[1] - sl[1]};
    if (q[0] < -1e-9 || q[1] < -1e-9) return std::nullopt;
    return q;
  };
  alg.in_level = [level_of](const Label& l, int k) { return level_of(l) >= k; };
  alg.probes = {{p.step, 0.0}, {0.0, p.step}, {p.step, p.step}};
  s.action.set_label_algebra(std::move(alg));
  s.action.set_sampling_note("times on a " + std::to_string(p.step) + " lattice up to " + std::to_string(p.horizon));
  s.actions = {s.action};
  const bool interior = dir[0] != 0.0 && dir[1] != 0.0;
  s.flags = {.locally_compact = true, .locally_connected = true, .connected_filter_sets = true,
             .cocompact_filter = false, .H1 = true, .H2 = true, .H3 = interior};
  s.exact = false;
  s.approximation_cause = "times sampled on a lattice and truncated at the horizon; images snapped to the grid";
  s.target_level = p.target_level;
  s.constants = {{"b", p.b}, {"step", p.step}, {"horizon", p.horizon}};
  s.sample_points = detail::snap_all(*s.space, {{1.0, 1.0}, {1.0, 0.0}, {-0.5, 0.8}, {1.5, -1.0}, {0.3, 0.3}});
  s.theorem_points = {s.sample_points[0], s.sample_points[2]};
  s.test_levels = {p.target_level};
  const SpacePtr sp = s.space;
  const double h = p.grid.h;
  // Constrained coordinates contract to 0; a free coordinate sweeps (0, c] since its time starts at 0.
  auto segment = [sp, h, dir](PointIndex x, double scale) {
    const auto c = sp->coords(x);
    std::array<double, 2> end{};
    for (int a = 0; a < 2; ++a) end[a] = dir[a] != 0.0 ? 0.0 : scale * c[a];
    return detail::cells_where(*sp, [=](std::span<const double> q) {
      for (int a = 0; a < 2; ++a)
        if (q[a] < std::min(0.0, end[a]) - h / 2 || q[a] > std::max(0.0, end[a]) + h / 2) return false;
      return true;
    });
  };
  s.expected_limit = [segment](PointIndex x) { return segment(x, 1.0); };
  const double bb = p.b;
  s.claimed_limit = [segment, bb](PointIndex x) { return segment(x, bb); };
  return s;
}

// ---------------------------------------------------------------------------
// Bang-bang control systems sampled over finite switching words.

struct ControlSampling {
  double u_min = 0.0;
  double u_max = 1.0;
  std::vector<double> branch_dwells{0.3, 0.7, 1.6, 3.2};
  int max_segments = 6;
  /// Dwell lattice on which images are recorded.
  double record_step = 0.05;
  double dt = 0.01;
  /// Extra words opening with a u_min run of this length (0 disables).
  double pad = 6.0;
  std::vector<double> filter_times{0.0, 2.0, 4.0, 6.0};
};

namespace detail {

inline int steps_of(double span, double step) {
  const double q = span / step;
  const double r = std::round(q);
  if (r < 1.0 || std::fabs(q - r) > 1e-9 * std::max(1.0, r)) throw UsageError("durations must be multiples of the step");
  return static_cast<int>(r);
}

/// Walks every word in a fixed order. `adv(state, u)` advances one record step and
/// `emit(state, t)` sees each recorded image with its total time.
template <class State, class Advance, class Emit>
void enumerate_words(const ControlSampling& cs, const State& start, Advance&& adv, Emit&& emit) {
  const std::array<double, 2> ctrl{cs.u_min, cs.u_max};
  double longest = 0.0;
  std::vector<int> branch;
  for (double d : cs.branch_dwells) {
    branch.push_back(steps_of(d, cs.record_step));
    longest = std::max(longest, d);
  }
  const int R = steps_of(longest, cs.record_step);
  auto expand = [&](auto&& self, const State& st, double t, int last, int depth) -> void {
    for (int ui = 0; ui < 2; ++ui) {
      if (ui == last) continue;
      State cur = st;
      for (int r = 1; r <= R; ++r) {
        adv(cur, ctrl[ui]);
        const double el = t + r * cs.record_step;
        emit(cur, el);
        if (depth + 1 < cs.max_segments && std::find(branch.begin(), branch.end(), r) != branch.end())
          self(self, cur, el, ui, depth + 1);
      }
    }
  };
  expand(expand, start, 0.0, -1, 0);
  if (cs.pad > 0.0) {
    State cur = start;
    const int n = steps_of(cs.pad, cs.record_step);
    for (int r = 0; r < n; ++r) adv(cur, cs.u_min);
    emit(cur, cs.pad);
    expand(expand, cur, cs.pad, -1, 1);
  }
}

inline int filter_level_at(const ControlSampling& cs, double t) {
  int lv = 0;
  for (double ft : cs.filter_times)
    if (t >= ft - 1e-9) ++lv;
  return lv;
}

inline void time_labels(const ControlSampling& cs, std::vector<int>& levels, std::vector<Label>& labels) {
  enumerate_words(cs, 0, [](int&, double) {}, [&](const int&, double t) {
    labels.push_back({t});
    levels.push_back(filter_level_at(cs, t));
  });
}

inline LabelAlgebra time_algebra(const ControlSampling& cs) {
  LabelAlgebra a;
  a.compose = [](const Label& x, const Label& y) { return Label{x[0] + y[0]}; };
  a.in_level = [cs](const Label& x, int k) { return filter_level_at(cs, x[0]) >= k; };
  a.probes = {{cs.branch_dwells.front()}, {cs.branch_dwells.back()}};
  return a;
}

inline void check_sampling(const ControlSampling& cs) {
  if (cs.filter_times.empty() || cs.filter_times.front() != 0.0) throw UsageError("first filter time must be 0");
  if (!std::is_sorted(cs.filter_times.begin(), cs.filter_times.end()) ||
      std::adjacent_find(cs.filter_times.begin(), cs.filter_times.end()) != cs.filter_times.end())
    throw UsageError("filter times must increase strictly");
  if (cs.max_segments < 1) throw UsageError("words need at least one segment");
  if (cs.branch_dwells.empty()) throw UsageError("need at least one branch dwell");
  steps_of(cs.record_step, cs.dt);
}

inline std::string sampling_note(const ControlSampling& cs, std::size_t count) {
  return std::to_string(count) + " bang-bang words, at most " + std::to_string(cs.max_segments) +
         " segments, recorded every " + std::to_string(cs.record_step);
}

}  // namespace detail

struct ControlParams {
  GridSpec grid = GridSpec::box({-2.0, -2.0}, {2.0, 2.0}, 0.05);
  ControlSampling sampling;
  double eps1 = 0.8;
  int levels = 8;
  int target_level = 3;
};

/// ẋ = (y − u x, −x), u ∈ [u_min, u_max].
inline Scenario scenario_control_spiral(ControlParams p = {}) {
  const auto& cs = p.sampling;
  detail::check_sampling(cs);
  if (p.grid.dimension != 2) throw UsageError("control scenario lives on a planar grid");
  Scenario s;
  s.name = "control_spiral";
  s.grid = p.grid;
  s.space = build_space(p.grid);
  s.family = build_eps_chain(s.space, p.eps1, p.levels);
  using Mat = std::array<double, 4>;
  auto mul = [](const Mat& a, const Mat& b) {
    return Mat{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
               a[2] * b[1] + a[3] * b[3]};
  };
  // One RK4 step of the linear field, as a matrix.
  auto rk4 = [&](double u) {
    const double h = cs.dt;
    const Mat A{-u * h, h, -h, 0.0};
    Mat term{1, 0, 0, 1}, sum{1, 0, 0, 1};
    for (int k = 1; k <= 4; ++k) {
      term = mul(A, term);
      for (int i = 0; i < 4; ++i) term[i] /= k;
      for (int i = 0; i < 4; ++i) sum[i] += term[i];
    }
    return sum;
  };
  const int sub = detail::steps_of(cs.record_step, cs.dt);
  std::map<double, Mat> step;
  for (double u : {cs.u_min, cs.u_max}) {
    Mat P = rk4(u), acc{1, 0, 0, 1};
    for (int i = 0; i < sub; ++i) acc = mul(P, acc);
    step[u] = acc;
  }
  auto mats = std::make_shared<std::vector<Mat>>();
  std::vector<int> levels;
  std::vector<Label> labels;
  detail::enumerate_words(
      cs, Mat{1, 0, 0, 1}, [&](Mat& m, double u) { m = mul(step.at(u), m); },
      [&](const Mat& m, double t) {
        mats->push_back(m);
        labels.push_back({t});
        levels.push_back(detail::filter_level_at(cs, t));
      });
  const Space* sp = s.space.get();
  const std::size_t count = mats->size();
  s.action = SemigroupSample::from_orbit_fn(
      s.space,
      [mats, sp](PointIndex x, std::vector<OrbitHit>& out) {
        const auto c = sp->coords(x);
        out.reserve(mats->size());
        for (std::size_t e = 0; e < mats->size(); ++e) {
          const Mat& m = (*mats)[e];
          const double y[2] = {m[0] * c[0] + m[1] * c[1], m[2] * c[0] + m[3] * c[1]};
          out.push_back({snap(*sp, std::span<const double>(y, 2), BoundaryPolicy::Clamp),
                         static_cast<std::uint32_t>(e)});
        }
      },
      std::move(levels), static_cast<int>(cs.filter_times.size()), std::move(labels));
  s.action.set_label_algebra(detail::time_algebra(cs));
  s.action.set_sampling_note(detail::sampling_note(cs, count));
  s.actions = {s.action};
  s.flags = {.locally_compact = true, .locally_connected = true, .connected_filter_sets = true,
             .cocompact_filter = false, .H1 = true, .H2 = true, .H3 = false};
  s.exact = false;
  s.approximation_cause = "finite switching words, RK4 with dt=" + std::to_string(cs.dt) +
                          ", images snapped (clamped at the box edge)";
  s.target_level = p.target_level;
  s.constants = {{"u_min", cs.u_min}, {"u_max", cs.u_max}, {"elements", static_cast<double>(count)}};
  std::vector<std::vector<double>> pts;
  for (double r : {0.25, 0.5, 0.75, 1.0, 1.25})
    for (int q = 0; q < 4; ++q) {
      const double a = q * std::numbers::pi / 2.0;
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
  s.sample_points = detail::snap_all(*s.space, pts);
  s.theorem_points = detail::snap_all(*s.space, {{1.0, 0.0}, {0.0, -0.5}});
  s.test_levels = {p.target_level};
  const SpacePtr space = s.space;
  s.expected_limit = [space](PointIndex x) {
    const double r = detail::norm2d(space->coords(x));
    return detail::cells_where(*space, [r](std::span<const double> q) { return detail::norm2d(q) <= r + 1e-9; });
  };
  return s;
}

namespace detail {

inline std::array<double, 2> disk_field(const std::array<double, 2>& v, double u) {
  const double x = v[0], y = v[1];
  const double r2 = x * x + y * y;
  return {y + u * x * (1.0 - r2), -x + u * y * (1.0 - r2)};
}

inline void disk_rk4(std::array<double, 2>& v, double u, double h) {
  auto add = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double s) {
    return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
  };
  const auto k1 = disk_field(v, u);
  const auto k2 = disk_field(add(v, k1, h / 2), u);
  const auto k3 = disk_field(add(v, k2, h / 2), u);
  const auto k4 = disk_field(add(v, k3, h), u);
  for (int i = 0; i < 2; ++i) v[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

}  // namespace detail

/// ẋ = X₀(x) + u X₁(x) with X₀ the rotation (y, −x) and X₁ = (1 − |x|²) x.
inline Scenario scenario_control_disk(ControlParams p = {}) {
  if (p.sampling.u_min == 0.0 && p.sampling.u_max == 1.0) {
    p.sampling.u_min = 1.0;
    p.sampling.u_max = 2.0;
  }
  const auto cs = p.sampling;
  detail::check_sampling(cs);
  if (p.grid.dimension != 2) throw UsageError("control scenario lives on a planar grid");
  Scenario s;
  s.name = "control_disk";
  s.grid = p.grid;
  s.space = build_space(p.grid);
  s.family = build_eps_chain(s.space, p.eps1, p.levels);
  std::vector<int> levels;
  std::vector<Label> labels;
  detail::time_labels(cs, levels, labels);
  const std::size_t count = levels.size();
  const Space* sp = s.space.get();
  const int sub = detail::steps_of(cs.record_step, cs.dt);
  s.action = SemigroupSample::from_orbit_fn(
      s.space,
      [cs, sp, sub](PointIndex x, std::vector<OrbitHit>& out) {
        const auto c = sp->coords(x);
        std::uint32_t e = 0;
        detail::enumerate_words(
            cs, std::array<double, 2>{c[0], c[1]},
            [&](std::array<double, 2>& v, double u) {
              for (int i = 0; i < sub; ++i) detail::disk_rk4(v, u, cs.dt);
            },
            [&](const std::array<double, 2>& v, double) {
              out.push_back({snap(*sp, std::span<const double>(v.data(), 2), BoundaryPolicy::Clamp), e++});
            });
      },
      std::move(levels), static_cast<int>(cs.filter_times.size()), std::move(labels));
  s.action.set_label_algebra(detail::time_algebra(cs));
  s.action.set_sampling_note(detail::sampling_note(cs, count));
  s.actions = {s.action};
  s.flags = {.locally_compact = true, .locally_connected = true, .connected_filter_sets = true,
             .cocompact_filter = false, .H1 = true, .H2 = true, .H3 = false};
  s.exact = false;
  s.approximation_cause = "finite switching words, RK4 with dt=" + std::to_string(cs.dt) +
                          ", images snapped (clamped at the box edge)";
  s.target_level = p.target_level;
  s.constants = {{"u_min", cs.u_min}, {"u_max", cs.u_max}, {"elements", static_cast<double>(count)}};
  s.sample_points = detail::snap_all(*s.space, {{1.5, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
  s.theorem_points = detail::snap_all(*s.space, {{1.0, 0.0}, {0.0, 0.0}});
  s.test_levels = {p.target_level};
  const SpacePtr space = s.space;
  const double tol = p.grid.h / std::sqrt(2.0);
  auto circle = [space, tol] {
    return detail::cells_where(*space, [tol](std::span<const double> q) {
      return std::fabs(detail::norm2d(q) - 1.0) <= tol;
    });
  };
  auto origin = [space] { return PointSet::singleton(space->size(), snap(*space, {0.0, 0.0})); };
  s.expected_limit = [space, circle, origin](PointIndex x) {
    return detail::norm2d(space->coords(x)) < 1e-12 ? origin() : circle();
  };
  s.claimed_limit = [space, circle, origin](PointIndex x) {
    return detail::norm2d(space->coords(x)) < 1.0 - 1e-12 ? origin() : circle();
  };
  return s;
}

// ---------------------------------------------------------------------------
// Coset space: the finite subgroup of k rotations acting on n points of the circle.

struct CosetParams {
  std::size_t n = 360;
  std::size_t k = 3;
  double eps1 = std::numbers::pi;
  int levels = 9;
  int max_test_level = 8;
};

inline Scenario scenario_coset(const CosetParams& p = {}) {
  if (p.k == 0 || p.n % p.k != 0) throw UsageError("subgroup order must divide the circle size");
  if (p.max_test_level < 1 || p.max_test_level > p.levels) throw UsageError("tested levels exceed the family");
  Scenario s;
  s.name = "coset";
  s.grid = GridSpec::circle_group(p.n);
  s.space = build_space(s.grid);
  s.family = build_eps_chain(s.space, p.eps1, p.levels);
  std::vector<std::vector<PointIndex>> maps;
  std::vector<Label> labels;
  const std::size_t shift = p.n / p.k;
  for (std::size_t r = 0; r < p.k; ++r) {
    std::vector<PointIndex> m(p.n);
    for (std::size_t x = 0; x < p.n; ++x) m[x] = static_cast<PointIndex>((x + r * shift) % p.n);
    maps.push_back(std::move(m));
    labels.push_back({static_cast<double>(r)});
  }
  s.action = SemigroupSample::from_tables(s.space, std::move(maps), std::vector<int>(p.k, 1), 1, std::move(labels));
  const double kk = static_cast<double>(p.k);
  LabelAlgebra alg;
  alg.compose = [kk](const Label& a, const Label& b) { return Label{std::fmod(a[0] + b[0], kk)}; };
  alg.right_quotient = [kk](const Label& b, const Label& a) -> std::optional<Label> {
    return Label{std::fmod(b[0] - a[0] + kk, kk)};
  };
  alg.in_level = [](const Label&, int k) { return k == 1; };
  for (std::size_t r = 1; r < p.k; ++r) alg.probes.push_back({static_cast<double>(r)});
  if (alg.probes.empty()) alg.probes.push_back({0.0});
  s.action.set_label_algebra(std::move(alg));
  s.actions = {s.action};
  s.flags = {.locally_compact = true, .locally_connected = true, .connected_filter_sets = p.k == 1,
             .cocompact_filter = true, .H1 = true, .H2 = true, .H3 = true};
  s.exact = true;
  s.target_level = 1;
  s.constants = {{"n", static_cast<double>(p.n)}, {"k", kk}};
  for (std::size_t x = 0; x < p.n; ++x) s.sample_points.push_back(static_cast<PointIndex>(x));
  s.theorem_points = s.sample_points;
  for (int l = 1; l <= p.max_test_level; ++l) s.test_levels.push_back(l);
  const SemigroupSample act = s.action;
  s.expected_limit = [act](PointIndex x) { return act.orbit(1, x); };
  return s;
}

// ---------------------------------------------------------------------------
// Random small instances for property tests and the set-level theorem corpus.

struct RandomInstance {
  SpacePtr space;
  AdmissibleFamily family;
};

/// Planar points with an explicit family of at most `max_coverings` coverings; the
/// singleton covering is always one of them so the family is admissible.
inline RandomInstance random_instance(Rng& rng, std::size_t n_points, std::size_t max_coverings = 4) {
  if (n_points == 0 || n_points > 64) throw UsageError("random instance needs 1..64 points");
  if (max_coverings == 0) throw UsageError("random instance needs at least one covering");
  std::vector<std::vector<double>> coords;
  while (coords.size() < n_points) {
    std::vector<double> c{static_cast<double>(rng.below(64)) / 64.0, static_cast<double>(rng.below(64)) / 64.0};
    if (std::find(coords.begin(), coords.end(), c) == coords.end()) coords.push_back(std::move(c));
  }
  RandomInstance out;
  out.space = Space::make_points(coords);
  const std::size_t n = n_points;
  const std::size_t count = 1 + rng.below(max_coverings);
  std::vector<Covering> covs;
  {
    std::vector<PointSet> single;
    for (std::size_t x = 0; x < n; ++x) single.push_back(PointSet::singleton(n, static_cast<PointIndex>(x)));
    covs.emplace_back(std::move(single));
  }
  while (covs.size() < count) {
    std::vector<PointSet> members;
    if (rng.coin()) {
      const double r = 0.05 + 0.6 * rng.unit();
      for (std::size_t c = 0; c < n; ++c) {
        PointSet b(n);
        for (std::size_t y = 0; y < n; ++y)
          if (out.space->distance(static_cast<PointIndex>(c), static_cast<PointIndex>(y)) < r)
            b.insert(static_cast<PointIndex>(y));
        if (std::find(members.begin(), members.end(), b) == members.end()) members.push_back(std::move(b));
      }
    } else {
      const std::size_t parts = 1 + rng.below(n);
      members.assign(parts, PointSet(n));
      for (std::size_t x = 0; x < n; ++x) members[rng.below(parts)].insert(static_cast<PointIndex>(x));
      std::erase_if(members, [](const PointSet& m) { return m.empty(); });
      const std::size_t extra = rng.below(3);
      for (std::size_t e = 0; e < extra; ++e) {
        PointSet m(n);
        for (std::size_t x = 0; x < n; ++x)
          if (rng.coin()) m.insert(static_cast<PointIndex>(x));
        if (!m.empty()) members.push_back(std::move(m));
      }
    }
    covs.emplace_back(std::move(members));
  }
  for (std::size_t i = covs.size(); i > 1; --i) std::swap(covs[i - 1], covs[rng.below(i)]);
  out.family = AdmissibleFamily::explicit_family(out.space, std::move(covs));
  return out;
}

inline std::vector<AdmissibleFamily> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_points,
                                                   std::size_t max_coverings) {
  Rng rng(seed);
  std::vector<AdmissibleFamily> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(random_instance(rng, 1 + rng.below(max_points), max_coverings).family);
  return out;
}

/// Random maps on a finite space with a filter of the given depth.
inline SemigroupSample random_action(const SpacePtr& space, Rng& rng, std::size_t elements, int depth) {
  if (elements < static_cast<std::size_t>(depth)) throw UsageError("need at least one element per filter level");
  const std::size_t n = space->size();
  std::vector<std::vector<PointIndex>> maps(elements, std::vector<PointIndex>(n));
  std::vector<int> levels;
  std::vector<Label> labels;
  for (std::size_t e = 0; e < elements; ++e) {
    for (auto& v : maps[e]) v = static_cast<PointIndex>(rng.below(n));
    levels.push_back(e < static_cast<std::size_t>(depth) ? static_cast<int>(e) + 1
                                                         : 1 + static_cast<int>(rng.below(depth)));
    labels.push_back({static_cast<double>(e)});
  }
  return SemigroupSample::from_tables(space, std::move(maps), std::move(levels), depth, std::move(labels));
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"contraction", "multitime", "control_spiral", "control_disk", "coset"};
  return names;
}

/// Built-in scenario with default parameters.
inline Scenario make_scenario(const std::string& name) {
  if (name == "contraction") return scenario_contraction();
  if (name == "multitime") return scenario_multitime();
  if (name == "control_spiral") return scenario_control_spiral();
  if (name == "control_disk") return scenario_control_disk();
  if (name == "coset") return scenario_coset();
  throw UsageError("unknown scenario '" + name + "'");
}

}  // namespace hyperdyn
