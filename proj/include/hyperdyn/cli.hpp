#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hyperdyn/continuity.hpp"
#include "hyperdyn/dynamics.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/hyperspace.hpp"
#include "hyperdyn/phase_space.hpp"
#include "hyperdyn/properties.hpp"
#include "hyperdyn/scenarios.hpp"

namespace hyperdyn::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kDomain = 3 };

struct Options {
  std::string command;
  std::filesystem::path config;
  std::filesystem::path out = ".";
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

// ---------------------------------------------------------------------------
// Typed access with path-qualified diagnostics.

class Cfg {
 public:
  Cfg(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  void only(std::initializer_list<const char*> keys) const {
    require_object();
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }) == keys.end())
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }
  bool has(const char* k) const { return j_.contains(k); }
  Cfg at(const char* k) const {
    if (!j_.contains(k)) fail(std::string("missing key '") + k + "'");
    return Cfg(j_.at(k), path_ + "." + k);
  }
  Cfg at(std::size_t i) const { return Cfg(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double num() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long>();
  }
  std::size_t count() const {
    const long v = integer();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> nums() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).num());
    return v;
  }
  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).count());
    return v;
  }

  double num(const char* k, double d) const { return has(k) ? at(k).num() : d; }
  int integer(const char* k, int d) const { return has(k) ? static_cast<int>(at(k).integer()) : d; }
  std::size_t count(const char* k, std::size_t d) const { return has(k) ? at(k).count() : d; }
  bool boolean(const char* k, bool d) const { return has(k) ? at(k).boolean() : d; }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

 private:
  const json& j_;
  std::string path_;
};

inline std::size_t max_points_from_env() {
  const char* v = std::getenv("HYPERDYN_MAX_POINTS");
  if (!v || !*v) return kDefaultMaxPoints;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw ConfigError("HYPERDYN_MAX_POINTS must be a positive integer");
  return static_cast<std::size_t>(n);
}

inline GridSpec parse_grid(const Cfg& c) {
  c.only({"lower", "upper", "h", "metric", "periods", "n"});
  const std::string metric = c.has("metric") ? c.at("metric").str() : "euclidean";
  GridSpec g;
  if (metric == "circle") {
    g = GridSpec::circle_group(c.at("n").count());
  } else {
    g = GridSpec::box(c.at("lower").nums(), c.at("upper").nums(), c.at("h").num());
    if (metric == "torus") {
      g.metric = MetricKind::Torus;
      g.periods = c.at("periods").nums();
    } else if (metric != "euclidean") {
      c.at("metric").fail("expected euclidean, torus or circle");
    }
  }
  g.max_points = max_points_from_env();
  return g;
}

inline void parse_flags(const Cfg& c, ScenarioFlags& f) {
  c.only({"locally_compact", "locally_connected", "connected_filter_sets", "cocompact_filter", "H1", "H2", "H3"});
  f.locally_compact = c.boolean("locally_compact", f.locally_compact);
  f.locally_connected = c.boolean("locally_connected", f.locally_connected);
  f.connected_filter_sets = c.boolean("connected_filter_sets", f.connected_filter_sets);
  f.cocompact_filter = c.boolean("cocompact_filter", f.cocompact_filter);
  f.H1 = c.boolean("H1", f.H1);
  f.H2 = c.boolean("H2", f.H2);
  f.H3 = c.boolean("H3", f.H3);
}

inline ControlParams parse_control(const Cfg& c, bool disk) {
  c.only({"grid", "u_min", "u_max", "branch_dwells", "max_segments", "record_step", "dt", "pad", "filter_times", "eps1",
          "levels", "target_level"});
  ControlParams p;
  if (disk) {
    p.sampling.u_min = 1.0;
    p.sampling.u_max = 2.0;
  }
  if (c.has("grid")) p.grid = parse_grid(c.at("grid"));
  p.grid.max_points = max_points_from_env();
  auto& s = p.sampling;
  s.u_min = c.num("u_min", s.u_min);
  s.u_max = c.num("u_max", s.u_max);
  if (!(s.u_min < s.u_max)) c.fail("u_min must be below u_max");
  if (c.has("branch_dwells")) s.branch_dwells = c.at("branch_dwells").nums();
  s.max_segments = c.integer("max_segments", s.max_segments);
  s.record_step = c.num("record_step", s.record_step);
  s.dt = c.num("dt", s.dt);
  s.pad = c.num("pad", s.pad);
  if (c.has("filter_times")) s.filter_times = c.at("filter_times").nums();
  p.eps1 = c.num("eps1", p.eps1);
  p.levels = c.integer("levels", p.levels);
  p.target_level = c.integer("target_level", p.target_level);
  return p;
}

inline Scenario parse_builtin(const std::string& name, const Cfg& c) {
  if (name == "contraction") {
    c.only({"L", "fixed_points", "grid", "eps1", "levels", "elements", "filter_depth", "primary", "epsilon",
            "target_level"});
    ContractionParams p;
    p.L = c.num("L", p.L);
    if (c.has("fixed_points")) {
      p.fixed_points.clear();
      const Cfg fp = c.at("fixed_points");
      for (std::size_t i = 0; i < fp.size(); ++i) p.fixed_points.push_back(fp.at(i).nums());
      if (p.fixed_points.empty()) fp.fail("need at least one fixed point");
      p.primary = std::min<std::size_t>(p.primary, p.fixed_points.size() - 1);
    }
    if (c.has("grid")) p.grid = parse_grid(c.at("grid"));
    p.grid.max_points = max_points_from_env();
    p.eps1 = c.num("eps1", p.eps1);
    p.levels = c.integer("levels", p.levels);
    p.elements = c.integer("elements", p.elements);
    p.filter_depth = c.integer("filter_depth", p.filter_depth);
    p.primary = c.count("primary", p.primary);
    p.epsilon = c.num("epsilon", p.epsilon);
    p.target_level = c.integer("target_level", p.target_level);
    return scenario_contraction(p);
  }
  if (name == "multitime") {
    c.only({"b", "grid", "step", "horizon", "filter_depth", "direction", "eps1", "levels", "target_level"});
    MultitimeParams p;
    p.b = c.num("b", p.b);
    if (c.has("grid")) p.grid = parse_grid(c.at("grid"));
    p.grid.max_points = max_points_from_env();
    p.step = c.num("step", p.step);
    p.horizon = c.num("horizon", p.horizon);
    p.filter_depth = c.integer("filter_depth", p.filter_depth);
    if (c.has("direction")) {
      const auto d = c.at("direction").nums();
      if (d.size() != 2) c.at("direction").fail("expected two components");
      p.direction = {d[0], d[1]};
    }
    p.eps1 = c.num("eps1", p.eps1);
    p.levels = c.integer("levels", p.levels);
    p.target_level = c.integer("target_level", p.target_level);
    return scenario_multitime(p);
  }
  if (name == "control_spiral") return scenario_control_spiral(parse_control(c, false));
  if (name == "control_disk") return scenario_control_disk(parse_control(c, true));
  if (name == "coset") {
    c.only({"n", "k", "eps1", "levels", "max_test_level"});
    CosetParams p;
    p.n = c.count("n", p.n);
    p.k = c.count("k", p.k);
    p.eps1 = c.num("eps1", p.eps1);
    p.levels = c.integer("levels", p.levels);
    p.max_test_level = c.integer("max_test_level", p.max_test_level);
    if (p.n > max_points_from_env()) c.fail("circle size exceeds the point cap");
    return scenario_coset(p);
  }
  throw ConfigError("scenario.builtin: unknown scenario '" + name + "'");
}

inline Scenario parse_explicit(const Cfg& c) {
  c.only({"name", "space", "family", "action", "flags", "exact", "approximation_cause"});
  Scenario s;
  s.name = c.has("name") ? c.at("name").str() : "explicit";
  const Cfg sp = c.at("space");
  sp.only({"points", "grid"});
  if (sp.has("points") == sp.has("grid")) sp.fail("give exactly one of points or grid");
  if (sp.has("points")) {
    const Cfg pts = sp.at("points");
    std::vector<std::vector<double>> coords;
    for (std::size_t i = 0; i < pts.size(); ++i) coords.push_back(pts.at(i).nums());
    if (coords.empty()) pts.fail("space needs at least one point");
    if (coords.size() > max_points_from_env()) pts.fail("point count exceeds the cap");
    s.space = Space::make_points(coords);
  } else {
    s.grid = parse_grid(sp.at("grid"));
    s.space = build_space(s.grid);
  }
  const std::size_t n = s.space->size();
  const Cfg fam = c.at("family");
  fam.only({"chain", "coverings"});
  if (fam.has("chain") == fam.has("coverings")) fam.fail("give exactly one of chain or coverings");
  if (fam.has("chain")) {
    const Cfg ch = fam.at("chain");
    ch.only({"eps1", "levels"});
    s.family = AdmissibleFamily::chain(s.space, ch.at("eps1").num(), static_cast<int>(ch.at("levels").integer()));
  } else {
    const Cfg covs = fam.at("coverings");
    std::vector<Covering> list;
    for (std::size_t i = 0; i < covs.size(); ++i) {
      const Cfg cov = covs.at(i);
      std::vector<PointSet> members;
      for (std::size_t j = 0; j < cov.size(); ++j) {
        PointSet m(n);
        for (auto v : cov.at(j).counts()) {
          if (v >= n) cov.at(j).fail("point index out of range");
          m.insert(static_cast<PointIndex>(v));
        }
        members.push_back(std::move(m));
      }
      try {
        list.emplace_back(std::move(members));
      } catch (const UsageError& e) {
        cov.fail(e.what());
      }
    }
    s.family = AdmissibleFamily::explicit_family(s.space, std::move(list));
  }
  const auto report = validate_admissible(s.family);
  if (!report.ok()) fam.fail("family is not admissible: " + report.summary());
  if (c.has("action")) {
    const Cfg act = c.at("action");
    act.only({"maps", "levels", "depth"});
    const Cfg maps = act.at("maps");
    std::vector<std::vector<PointIndex>> tables;
    for (std::size_t e = 0; e < maps.size(); ++e) {
      std::vector<PointIndex> t;
      for (auto v : maps.at(e).counts()) t.push_back(static_cast<PointIndex>(v));
      tables.push_back(std::move(t));
    }
    std::vector<int> levels;
    if (act.has("levels")) {
      for (auto v : act.at("levels").counts()) levels.push_back(static_cast<int>(v));
    } else {
      levels.assign(tables.size(), 1);
    }
    const int depth = act.integer("depth", levels.empty() ? 1 : *std::max_element(levels.begin(), levels.end()));
    s.action = SemigroupSample::from_tables(s.space, std::move(tables), std::move(levels), depth);
    s.actions = {s.action};
  }
  s.exact = c.boolean("exact", true);
  if (c.has("approximation_cause")) s.approximation_cause = c.at("approximation_cause").str();
  if (c.has("flags")) parse_flags(c.at("flags"), s.flags);
  s.target_level = 1;
  for (std::size_t x = 0; x < std::min<std::size_t>(n, 64); ++x) s.sample_points.push_back(static_cast<PointIndex>(x));
  s.theorem_points = s.sample_points;
  s.test_levels = {1};
  return s;
}

inline Scenario parse_scenario(const Cfg& c) {
  c.only({"builtin", "params", "explicit", "flags"});
  if (c.has("builtin") == c.has("explicit")) c.fail("give exactly one of builtin or explicit");
  Scenario s;
  if (c.has("builtin")) {
    const json empty = json::object();
    s = parse_builtin(c.at("builtin").str(), c.has("params") ? c.at("params") : Cfg(empty, c.path() + ".params"));
  } else {
    if (c.has("params")) c.fail("params only apply to builtin scenarios");
    s = parse_explicit(c.at("explicit"));
  }
  if (c.has("flags")) parse_flags(c.at("flags"), s.flags);
  return s;
}

inline PointSet parse_set(const Cfg& c, const Space& space) {
  PointSet out(space.size());
  if (c.raw().is_array()) {
    for (auto v : c.counts()) {
      if (v >= space.size()) c.fail("point index out of range");
      out.insert(static_cast<PointIndex>(v));
    }
  } else {
    c.only({"indices", "coords"});
    if (c.has("indices")) out |= parse_set(c.at("indices"), space);
    if (c.has("coords")) {
      const Cfg cs = c.at("coords");
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto p = cs.at(i).nums();
        if (p.size() != space.dim()) cs.at(i).fail("coordinate dimension differs from the space");
        try {
          out.insert(snap(space, p));
        } catch (const DomainError& e) {
          cs.at(i).fail(e.what());
        }
      }
    }
  }
  return out;
}

inline std::vector<PointIndex> parse_points(const Cfg& c, const Scenario& s) {
  c.only({"indices", "coords", "stride", "default"});
  std::vector<PointIndex> out;
  const Space& sp = *s.space;
  bool given = false;
  if (c.has("default") && c.at("default").boolean()) {
    out = s.sample_points;
    given = true;
  }
  if (c.has("indices")) {
    given = true;
    for (auto v : c.at("indices").counts()) {
      if (v >= sp.size()) c.at("indices").fail("point index out of range");
      out.push_back(static_cast<PointIndex>(v));
    }
  }
  if (c.has("coords")) {
    given = true;
    const Cfg cs = c.at("coords");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto p = cs.at(i).nums();
      if (p.size() != sp.dim()) cs.at(i).fail("coordinate dimension differs from the space");
      try {
        out.push_back(snap(sp, p));
      } catch (const DomainError& e) {
        cs.at(i).fail(e.what());
      }
    }
  }
  if (c.has("stride")) {
    given = true;
    const std::size_t st = c.at("stride").count();
    if (st == 0) c.at("stride").fail("stride must be positive");
    for (std::size_t i = 0; i < sp.size(); i += st) out.push_back(static_cast<PointIndex>(i));
  }
  if (!given) c.fail("give indices, coords, stride or default");
  if (out.empty()) c.fail("points list is empty");
  return out;
}

/// Parsed configuration shared by all commands.
struct RunConfig {
  json doc;
  Scenario scenario;
  std::vector<PointIndex> points;
  int target_level = 1;
  std::vector<int> levels;
  WitnessOptions witness;
  int prolongation_depth = 0;
  std::uint64_t seed = 1;
  bool write_json = true;
  bool write_csv = true;
};

inline const std::initializer_list<const char*> kTopKeys = {"scenario", "levels", "points", "map",   "theorems",
                                                              "suites",   "corpus", "hyper",  "output", "seed"};

inline RunConfig load_config(const std::filesystem::path& path, const Options& opt) {
  RunConfig rc;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  try {
    rc.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Cfg root(rc.doc, "$");
  root.only(kTopKeys);
  if (root.has("seed")) rc.seed = root.at("seed").count();
  if (opt.seed) rc.seed = *opt.seed;
  if (root.has("output")) {
    const Cfg o = root.at("output");
    o.only({"json", "csv"});
    rc.write_json = o.boolean("json", true);
    rc.write_csv = o.boolean("csv", true);
  }
  if (opt.command == "verify" && !root.has("scenario")) {
    // Corpus-only runs need no scenario.
    rc.scenario.name = "corpus";
    return rc;
  }
  if (opt.command == "hyper" && !root.has("scenario")) root.fail("hyper needs a scenario to define the space");
  try {
    rc.scenario = parse_scenario(root.at("scenario"));
  } catch (const ConstructionError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  auto& s = rc.scenario;
  rc.target_level = s.target_level;
  rc.levels = s.test_levels;
  rc.prolongation_depth = s.family.finest_level();
  rc.witness = s.witness;
  if (root.has("levels")) {
    const Cfg lv = root.at("levels");
    lv.only({"target", "tested", "coarsest_witness", "allow_degenerate", "prolongation_depth"});
    rc.target_level = lv.integer("target", rc.target_level);
    rc.levels = {rc.target_level};
    if (lv.has("tested")) {
      rc.levels.clear();
      for (auto v : lv.at("tested").counts()) rc.levels.push_back(static_cast<int>(v));
      if (rc.levels.empty()) lv.at("tested").fail("tested levels are empty");
    }
    if (lv.has("coarsest_witness")) rc.witness.coarsest_level = static_cast<int>(lv.at("coarsest_witness").integer());
    rc.witness.allow_degenerate = lv.boolean("allow_degenerate", rc.witness.allow_degenerate);
    rc.prolongation_depth = lv.integer("prolongation_depth", rc.prolongation_depth);
  }
  for (int k : rc.levels)
    if (k < 1 || k > s.family.size()) root.fail("tested level " + std::to_string(k) + " outside the family");
  if (rc.target_level < 1 || rc.target_level > s.family.size()) root.fail("target level outside the family");
  if (rc.prolongation_depth < 1 || rc.prolongation_depth > s.family.size())
    root.fail("prolongation depth outside the family");
  s.witness = rc.witness;
  s.test_levels = rc.levels;
  rc.points = root.has("points") ? parse_points(root.at("points"), s) : s.sample_points;
  if (rc.points.empty()) root.fail("points list is empty");
  return rc;
}

// ---------------------------------------------------------------------------
// Output helpers.

inline std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline json coords_json(const Space& s, PointIndex x) {
  json a = json::array();
  for (double v : s.coords(x)) a.push_back(v);
  return a;
}

inline json set_json(const PointSet& p) {
  json a = json::array();
  p.for_each([&](PointIndex i) { a.push_back(i); });
  return a;
}

inline json upset_json(const AdmissibleFamily& f, const UpSet& u) {
  json j;
  json levels = json::array();
  for (int k = 1; k <= f.size(); ++k)
    if (u.contains(k)) levels.push_back(k);
  j["levels"] = levels;
  if (f.is_chain()) {
    j["threshold"] = u.threshold();
    if (u.threshold() > 0) j["eps"] = f.eps(u.threshold());
  }
  return j;
}

inline json diagnostic_json(const ConvergenceDiagnostic& d) {
  json j;
  j["depth"] = d.depth;
  j["attained"] = d.attained;
  j["attained_depth"] = d.attained_depth();
  j["approximate"] = d.approximate;
  json fi = json::array();
  for (const auto& v : d.first_index) fi.push_back(v ? json(*v) : json(nullptr));
  j["first_index"] = fi;
  j["tail"] = d.tail.exact() ? "eventually_periodic" : "observed";
  return j;
}

inline json semi_json(const SemicontinuityResult& r) {
  json j;
  j["holds"] = r.holds;
  j["witness_level"] = r.witness_level ? json(*r.witness_level) : json(nullptr);
  if (r.counterexample) {
    j["counterexample"] = {{"y", r.counterexample->y}, {"z", r.counterexample->z}, {"level", r.counterexample->level}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["degenerate"] = r.degenerate;
  j["approximate"] = r.approximate;
  return j;
}

inline void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream o(p, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write " + p.string());
  o << body;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json header(const RunConfig& rc, const char* command) {
  json j;
  j["command"] = command;
  j["scenario"] = rc.scenario.name;
  j["seed"] = rc.seed;
  j["exact"] = rc.scenario.exact;
  j["approximation_cause"] = rc.scenario.approximation_cause;
  j["points_in_space"] = rc.scenario.space ? rc.scenario.space->size() : 0;
  return j;
}

/// Runs fn(i) for i < n on up to `jobs` threads; rethrows the failure of the lowest index.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const unsigned t = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline void require_action(const RunConfig& rc) {
  if (rc.scenario.actions.empty()) throw ConfigError("scenario has no action; add scenario.explicit.action");
}

// ---------------------------------------------------------------------------
// Commands.

inline int cmd_limits(const RunConfig& rc, const Options& opt) {
  require_action(rc);
  const auto& s = rc.scenario;
  const auto& f = s.family;
  const Space& sp = *s.space;
  struct Row {
    LimitResult L, J;
  };
  std::vector<Row> rows(rc.points.size());
  parallel_for(rc.points.size(), opt.jobs, [&](std::size_t i) {
    rows[i].L = limit_L(s.action, f, rc.points[i]);
    rows[i].J = prolongational_J(s.action, f, rc.points[i], rc.prolongation_depth);
  });
  const PointSet Y = PointSet::of(sp.size(), rc.points);
  const PointSet omega = omega_set(s.action, Y);

  json out = header(rc, "limits");
  out["prolongation_depth"] = rc.prolongation_depth;
  out["filter_depth"] = s.action.depth();
  out["sampling"] = s.action.sampling_note();
  json pts = json::array();
  std::ostringstream csv;
  csv << "point_index";
  for (std::size_t a = 0; a < sp.dim(); ++a) csv << ",x" << a;
  csv << ",set,member_index";
  for (std::size_t a = 0; a < sp.dim(); ++a) csv << ",m" << a;
  csv << "\n";
  auto csv_rows = [&](PointIndex x, const char* name, const PointSet& set) {
    set.for_each([&](PointIndex m) {
      csv << x;
      for (double v : sp.coords(x)) csv << "," << fmt9(v);
      csv << "," << name << "," << m;
      for (double v : sp.coords(m)) csv << "," << fmt9(v);
      csv << "\n";
    });
  };
  for (std::size_t i = 0; i < rc.points.size(); ++i) {
    const PointIndex x = rc.points[i];
    json p;
    p["index"] = x;
    p["coords"] = coords_json(sp, x);
    p["limit"] = {{"indices", set_json(rows[i].L.set)}, {"diagnostic", diagnostic_json(rows[i].L.diagnostic)}};
    p["prolongational"] = {{"indices", set_json(rows[i].J.set)},
                           {"diagnostic", diagnostic_json(rows[i].J.diagnostic)}};
    if (s.expected_limit) {
      const PointSet e = s.expected_limit(x);
      p["expected_limit"] = {{"indices", set_json(e)}, {"hausdorff_distance", metric_hausdorff(sp, rows[i].L.set, e)}};
    }
    if (s.claimed_limit) {
      const PointSet e = s.claimed_limit(x);
      p["claimed_limit"] = {{"indices", set_json(e)}, {"hausdorff_distance", metric_hausdorff(sp, rows[i].L.set, e)}};
    }
    pts.push_back(std::move(p));
    csv_rows(x, "limit", rows[i].L.set);
    csv_rows(x, "prolongational", rows[i].J.set);
  }
  out["points"] = std::move(pts);
  out["omega_of_points"] = set_json(omega);
  if (rc.write_json) write_file(opt.out / "limits.json", dump(out));
  if (rc.write_csv) write_file(opt.out / "limits.csv", csv.str());
  std::cout << "limits: " << rc.points.size() << " points, scenario " << s.name << "\n";
  for (std::size_t i = 0; i < rc.points.size(); ++i)
    std::cout << "  point " << rc.points[i] << ": |L| = " << rows[i].L.set.count()
              << ", |J| = " << rows[i].J.set.count() << "\n";
  return kOk;
}

inline SetValuedMap parse_map(const RunConfig& rc) {
  const auto& s = rc.scenario;
  const auto& f = s.family;
  const Cfg root(rc.doc, "$");
  if (!root.has("map")) {
    require_action(rc);
    return SetValuedMap::limit(s.action, f);
  }
  const Cfg m = root.at("map");
  m.only({"kind", "filter_level", "witness_level", "depth", "set"});
  const std::string kind = m.at("kind").str();
  if (kind == "constant") {
    const PointSet v = parse_set(m.at("set"), *s.space);
    if (v.empty()) m.at("set").fail("constant value must be nonempty");
    return SetValuedMap::constant("constant", v);
  }
  require_action(rc);
  if (kind == "limit") return SetValuedMap::limit(s.action, f);
  const int k = m.integer("filter_level", 1);
  if (k < 1 || k > s.action.depth()) m.fail("filter level outside the chain");
  if (kind == "orbit") return SetValuedMap::orbit(s.action, k);
  if (kind == "prolongation") {
    const int j = m.integer("witness_level", rc.target_level);
    if (j < 1 || j > f.size()) m.fail("witness level outside the family");
    return SetValuedMap::prolongation(s.action, f, k, j);
  }
  if (kind == "prolongational") {
    const int d = m.integer("depth", rc.prolongation_depth);
    if (d < 1 || d > f.size()) m.fail("depth outside the family");
    return SetValuedMap::prolongational(s.action, f, d);
  }
  m.at("kind").fail("expected limit, orbit, prolongation, prolongational or constant");
}

inline int cmd_continuity(const RunConfig& rc, const Options& opt) {
  const auto& s = rc.scenario;
  const auto& f = s.family;
  const Space& sp = *s.space;
  const SetValuedMap F = parse_map(rc);
  const std::size_t per = rc.levels.size();
  std::vector<ContinuityVerdict> verdicts(rc.points.size() * per);
  // Values first so the memo is warm before the neighborhoods fan out.
  parallel_for(rc.points.size(), opt.jobs, [&](std::size_t i) { F(rc.points[i]); });
  parallel_for(verdicts.size(), opt.jobs, [&](std::size_t i) {
    verdicts[i] = hausdorff_continuous_at(F, f, rc.points[i / per], rc.levels[i % per], rc.witness);
  });
  json out = header(rc, "continuity");
  out["map"] = F.name();
  out["map_approximate"] = F.approximate();
  json entries = json::array();
  bool all = true;
  std::cout << "continuity of " << F.name() << " (" << s.name << ")\n";
  std::cout << "  point    level  usc  lsc  continuous\n";
  for (const auto& v : verdicts) {
    json e;
    e["index"] = v.x;
    e["coords"] = coords_json(sp, v.x);
    e["level"] = v.level;
    e["usc"] = semi_json(v.usc);
    e["lsc"] = semi_json(v.lsc);
    e["continuous"] = v.continuous;
    entries.push_back(std::move(e));
    all = all && v.continuous;
    char line[128];
    std::snprintf(line, sizeof line, "  %-8u %-6d %-4s %-4s %s\n", v.x, v.level, v.usc.holds ? "yes" : "NO",
                  v.lsc.holds ? "yes" : "NO", v.continuous ? "yes" : "NO");
    std::cout << line;
  }
  out["entries"] = std::move(entries);
  out["all_continuous"] = all;
  if (rc.write_json) write_file(opt.out / "continuity.json", dump(out));
  std::cout << (all ? "all sampled points continuous\n" : "some sampled points are not continuous\n");
  return kOk;
}

struct CorpusSpec {
  std::size_t families = 20;
  std::size_t max_points = 6;
  std::size_t max_coverings = 4;
  std::size_t sequences = 50;
};

inline json check_json(const TheoremCheck& c) {
  return {{"subject", c.subject},       {"level", c.level},   {"hypotheses_met", c.hypotheses_met},
          {"equivalence", c.equivalence}, {"lhs", c.lhs},     {"rhs", c.rhs},
          {"agree", c.agree},           {"approximate", c.approximate}, {"cause", c.cause},
          {"detail", c.detail}};
}

inline int cmd_verify(const RunConfig& rc, const Options& opt) {
  const Cfg root(rc.doc, "$");
  std::vector<Theorem> theorems;
  if (root.has("theorems")) {
    const Cfg t = root.at("theorems");
    for (std::size_t i = 0; i < t.size(); ++i) {
      try {
        theorems.push_back(parse_theorem(t.at(i).str()));
      } catch (const UsageError& e) {
        t.at(i).fail(e.what());
      }
    }
  }
  std::vector<std::string> suites;
  if (root.has("suites")) {
    const Cfg t = root.at("suites");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string n = t.at(i).str();
      if (n != "hyperspace_properties" && n != "vietoris_sandwich" && n != "kuratowski_hausdorff")
        t.at(i).fail("unknown suite '" + n + "'");
      suites.push_back(n);
    }
  }
  if (theorems.empty() && suites.empty()) root.fail("verify needs theorems or suites");
  CorpusSpec cs;
  if (root.has("corpus")) {
    const Cfg c = root.at("corpus");
    c.only({"families", "max_points", "max_coverings", "sequences"});
    cs.families = c.count("families", cs.families);
    cs.max_points = c.count("max_points", cs.max_points);
    cs.max_coverings = c.count("max_coverings", cs.max_coverings);
    cs.sequences = c.count("sequences", cs.sequences);
    if (cs.max_points < 1 || cs.max_points > kPropertySuiteMaxPoints) c.fail("max_points must be in 1..6");
    if (cs.max_coverings < 1 || cs.max_coverings > 64) c.fail("max_coverings must be in 1..64");
  }
  const bool set_level_only =
      std::all_of(theorems.begin(), theorems.end(), [](Theorem t) { return t == Theorem::PK_KP || t == Theorem::T5; });
  if (!set_level_only) require_action(rc);
  const auto corpus = random_corpus(rc.seed, cs.families, cs.max_points, cs.max_coverings);

  json out = header(rc, "verify");
  std::size_t exact_failures = 0;
  json reports = json::array();
  if (!theorems.empty()) {
    TheoremContext ctx;
    if (rc.scenario.space) {
      ctx = rc.scenario.theorem_context(rc.seed, 0);
      ctx.levels = rc.levels;
    } else {
      ctx.scenario = rc.scenario.name;
      ctx.exact = true;
      ctx.seed = rc.seed;
    }
    ctx.corpus = corpus;
    ctx.sequences_per_family = cs.sequences;
    ctx.witness = rc.witness;
    std::vector<TheoremReport> reps(theorems.size());
    for (std::size_t i = 0; i < theorems.size(); ++i) reps[i] = verify_theorem(theorems[i], ctx);
    for (const auto& r : reps) {
      json j;
      j["name"] = r.name;
      j["scenario"] = r.scenario;
      j["passed"] = r.passed();
      j["exact_failures"] = r.exact_failures;
      j["approximate_disagreements"] = r.approximate_disagreements;
      j["unmet_disagreements"] = r.unmet_disagreements;
      json checks = json::array();
      for (const auto& c : r.checks) checks.push_back(check_json(c));
      j["checks"] = std::move(checks);
      reports.push_back(std::move(j));
      exact_failures += r.exact_failures;
      std::cout << r.name << ": " << (r.passed() ? "ok" : "FAILED") << " (" << r.checks.size() << " checks, "
                << r.exact_failures << " exact failures, " << r.approximate_disagreements
                << " approximate disagreements, " << r.unmet_disagreements << " with hypotheses unmet)\n";
    }
  }
  out["theorems"] = std::move(reports);
  json suite_out = json::array();
  for (const auto& name : suites) {
    json j;
    j["name"] = name;
    std::size_t cases = 0, failures = 0;
    json details = json::array();
    Rng rng(rc.seed ^ 0x5eedu);
    for (std::size_t fi = 0; fi < corpus.size(); ++fi) {
      const auto& f = corpus[fi];
      if (name == "hyperspace_properties") {
        for (const auto& o : hyperspace_properties(f)) {
          cases += o.cases;
          failures += o.failures;
          if (o.failures)
            details.push_back({{"family", fi}, {"property", o.name}, {"failures", o.failures},
                               {"first", o.first_failure}});
        }
      } else if (name == "vietoris_sandwich") {
        const auto r = check_vietoris_sandwich(f);
        cases += r.pairs;
        failures += r.inner_violations + r.outer_violations;
        if (r.inner_violations + r.outer_violations)
          details.push_back({{"family", fi}, {"first", r.first_violation}});
      } else {
        for (std::size_t q = 0; q < cs.sequences; ++q) {
          const auto seq = random_periodic_sequence(f.space().size(), rng);
          const auto c = kuratowski_vs_hausdorff(f, seq);
          ++cases;
          if (c.kuratowski != c.hausdorff) {
            ++failures;
            details.push_back({{"family", fi}, {"sequence", q}});
          }
        }
      }
    }
    j["cases"] = cases;
    j["failures"] = failures;
    j["details"] = std::move(details);
    suite_out.push_back(std::move(j));
    exact_failures += failures;
    std::cout << name << ": " << (failures ? "FAILED" : "ok") << " (" << cases << " cases, " << failures
              << " failures)\n";
  }
  out["suites"] = std::move(suite_out);
  out["exact_failures"] = exact_failures;
  if (rc.write_json) write_file(opt.out / "verify.json", dump(out));
  return exact_failures == 0 ? kOk : kFailure;
}

inline std::string upset_text(const AdmissibleFamily& f, const UpSet& u) {
  if (f.is_chain()) {
    const int t = u.threshold();
    if (t == f.size()) return "threshold " + std::to_string(t) + " (full family)";
    if (t == 0) return "threshold 0 (empty)";
    return "threshold " + std::to_string(t) + ", eps = " + fmt9(f.eps(t));
  }
  if (u.is_full()) return "levels all (full family)";
  std::string s = "levels {";
  bool first = true;
  for (int k = 1; k <= f.size(); ++k)
    if (u.contains(k)) {
      s += (first ? "" : ", ") + std::to_string(k);
      first = false;
    }
  return s + "}";
}

inline std::string set_text(const PointSet& p) {
  if (p.empty()) return "∅";
  std::string s = "{";
  bool first = true;
  p.for_each([&](PointIndex i) {
    s += (first ? "" : ", ") + std::to_string(i);
    first = false;
  });
  return s + "}";
}

inline int cmd_hyper(const RunConfig& rc, const Options&) {
  const auto& s = rc.scenario;
  const auto& f = s.family;
  const Cfg root(rc.doc, "$");
  const Cfg h = root.at("hyper");
  h.only({"A", "B", "budget", "level", "sequence"});
  const std::size_t budget = h.count("budget", 64);
  if (budget < 1) h.at("budget").fail("budget must be at least 1");
  const int level = h.integer("level", rc.target_level);
  if (level < 1 || level > f.size()) h.fail("level outside the family");
  auto& out = std::cout;
  if (h.has("A")) {
    const PointSet A = parse_set(h.at("A"), *s.space);
    if (A.empty()) h.at("A").fail("set is empty");
    auto report_set = [&](const char* name, const PointSet& X) {
      out << "D(" << name << "): " << upset_text(f, diameter(f, X)) << "\n";
      const auto nc = noncompactness(f, X, level, budget);
      out << "alpha(" << name << ") at level " << level << ": " << nc.alpha_count << (nc.alpha_exact ? "" : " (greedy)")
          << (nc.alpha ? " within" : " over") << " budget " << budget << "\n";
      out << "gamma(" << name << ") at level " << level << ": " << nc.gamma_count << (nc.gamma_exact ? "" : " (greedy)")
          << (nc.gamma ? " within" : " over") << " budget " << budget << "\n";
    };
    if (h.has("B")) {
      const PointSet B = parse_set(h.at("B"), *s.space);
      if (B.empty()) h.at("B").fail("set is empty");
      out << "rho_H(A,B): " << upset_text(f, rho_H(f, A, B)) << "\n";
      out << "rho_A(B): " << upset_text(f, rho_one_sided(f, A, B)) << "\n";
      out << "rho_B(A): " << upset_text(f, rho_one_sided(f, B, A)) << "\n";
      report_set("A", A);
      report_set("B", B);
    } else {
      report_set("A", A);
    }
  } else if (h.has("B")) {
    h.fail("B needs A");
  }
  if (h.has("sequence")) {
    const Cfg q = h.at("sequence");
    q.only({"sets", "preperiod", "period", "window"});
    std::vector<PointSet> terms;
    const Cfg sets = q.at("sets");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      terms.push_back(parse_set(sets.at(i), *s.space));
      if (terms.back().empty()) sets.at(i).fail("sequence terms must be nonempty");
    }
    if (terms.empty()) sets.fail("sequence is empty");
    TailSpec tail = q.has("period") ? TailSpec::periodic(q.count("preperiod", 0), q.at("period").count())
                                    : TailSpec::observed(q.count("window", 1));
    try {
      const SetSequence seq(std::move(terms), tail);
      const auto lim = kuratowski_limits_all(f, seq);
      out << "LS = " << set_text(lim.LS) << "\n";
      out << "LI = " << set_text(lim.LI) << "\n";
      if (lim.approximate && lim.window) out << "(tail observed over the last " << *lim.window << " terms)\n";
    } catch (const UsageError& e) {
      q.fail(e.what());
    }
  }
  if (!h.has("A") && !h.has("sequence")) h.fail("give A (and optionally B) or a sequence");
  return kOk;
}

/// Runs one command; maps errors to exit codes and prints them to stderr.
inline int run(const Options& opt) {
  try {
    const RunConfig rc = load_config(opt.config, opt);
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + opt.out.string());
    if (opt.command == "limits") return cmd_limits(rc, opt);
    if (opt.command == "continuity") return cmd_continuity(rc, opt);
    if (opt.command == "verify") return cmd_verify(rc, opt);
    if (opt.command == "hyper") return cmd_hyper(rc, opt);
    throw UsageError("unknown command '" + opt.command + "'");
  } catch (const ConfigError& e) {
    std::cerr << "hyperdyn: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConstructionError& e) {
    std::cerr << "hyperdyn: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const UsageError& e) {
    std::cerr << "hyperdyn: usage error: " << e.what() << "\n";
    return kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "hyperdyn: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "hyperdyn: domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "hyperdyn: error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace hyperdyn::cli
