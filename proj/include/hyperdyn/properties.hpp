#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperdyn/covering_algebra.hpp"
#include "hyperdyn/hyperspace.hpp"

namespace hyperdyn {

/// Outcome of one algebraic property checked over every admissible case.
struct PropertyOutcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

/// Closure of A: points lying in St[A,U] for every level.
inline PointSet closure(const AdmissibleFamily& f, const PointSet& A) {
  PointSet c = PointSet::full(f.space().size());
  for (int k = 1; k <= f.size(); ++k) c &= f.star(A, k);
  return c;
}

inline constexpr std::size_t kPropertySuiteMaxPoints = 6;

/// Exhaustive check of the ρ_H, diameter and union-diameter identities over all
/// nonempty subsets (pairs, triples and quadruples) of a space with at most 6 points.
inline std::vector<PropertyOutcome> hyperspace_properties(const AdmissibleFamily& f) {
  const std::size_t n = f.space().size();
  if (n > kPropertySuiteMaxPoints) throw UsageError("exhaustive property suite supports at most 6 points");
  const std::size_t S = (std::size_t{1} << n) - 1;  // subsets are masks 1..S
  const int m = f.size();
  auto set = [n](std::uint64_t mask) { return PointSet::from_mask(n, mask); };
  std::vector<PointSet> sets(S + 1);
  for (std::size_t a = 1; a <= S; ++a) sets[a] = set(a);

  std::vector<std::uint64_t> rh((S + 1) * (S + 1)), one((S + 1) * (S + 1)), diam(S + 1);
  for (std::size_t a = 1; a <= S; ++a) {
    diam[a] = diameter(f, sets[a]).mask();
    for (std::size_t b = 1; b <= S; ++b) {
      rh[a * (S + 1) + b] = rho_H(f, sets[a], sets[b]).mask();
      one[a * (S + 1) + b] = rho_one_sided(f, sets[a], sets[b]).mask();
    }
  }
  auto RH = [&](std::size_t a, std::size_t b) { return rh[a * (S + 1) + b]; };
  auto ONE = [&](std::size_t a, std::size_t b) { return one[a * (S + 1) + b]; };
  auto shift = [&](std::uint64_t mask, int times) { return upset_shift(f.upset_from_mask(mask), times).mask(); };
  auto sup = [](std::uint64_t big, std::uint64_t small) { return (small & ~big) == 0; };
  const std::uint64_t full = UpSet::full_mask(m);

  std::vector<PropertyOutcome> out;
  auto run = [&](const char* name, auto&& body) {
    PropertyOutcome o;
    o.name = name;
    body([&](bool ok, auto&& describe) {
      ++o.cases;
      if (ok) return;
      if (o.failures++ == 0) o.first_failure = describe();
    });
    out.push_back(std::move(o));
  };
  auto str = [](auto... v) {
    std::string s;
    ((s += (s.empty() ? "" : " ") + std::to_string(v)), ...);
    return s;
  };

  run("rho_H symmetric", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b) check(RH(a, b) == RH(b, a), [&] { return str(a, b); });
  });
  run("rho_H on singletons equals rho", [&](auto&& check) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        check(RH(std::size_t{1} << x, std::size_t{1} << y) ==
                  f.rho(static_cast<PointIndex>(x), static_cast<PointIndex>(y)).mask(),
              [&] { return str(x, y); });
  });
  run("rho_H is O iff closures agree", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b)
        check((RH(a, b) == full) == (closure(f, sets[a]) == closure(f, sets[b])), [&] { return str(a, b); });
  });
  run("rho_H quasi-triangle", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b)
        for (std::size_t c = 1; c <= S; ++c)
          check(sup(RH(a, c), shift(RH(a, b) & RH(b, c), 1)), [&] { return str(a, b, c); });
  });
  run("rho_H of unions", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b)
        for (std::size_t c = 1; c <= S; ++c)
          for (std::size_t d = 1; d <= S; ++d)
            check(sup(RH(a | b, c | d), RH(a, c) & RH(b, d)), [&] { return str(a, b, c, d); });
  });
  run("rho_H star characterization", [&](auto&& check) {
    for (int k = 1; k <= m; ++k) {
      std::vector<PointSet> st(S + 1);
      for (std::size_t a = 1; a <= S; ++a) st[a] = f.star(sets[a], k);
      for (std::size_t a = 1; a <= S; ++a)
        for (std::size_t b = 1; b <= S; ++b) {
          const bool in = (RH(a, b) >> (k - 1)) & 1u;
          check(in == (sets[a].subset_of(st[b]) && sets[b].subset_of(st[a])), [&] { return str(k, a, b); });
        }
    }
  });
  run("rho quasi-triangle", [&](auto&& check) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          const auto px = static_cast<PointIndex>(x), py = static_cast<PointIndex>(y), pz = static_cast<PointIndex>(z);
          check(sup(f.rho(px, py).mask(), shift(f.rho(px, pz).mask() & f.rho(pz, py).mask(), 1)),
                [&] { return str(x, y, z); });
        }
  });
  run("diameter below pair values", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      sets[a].for_each([&](PointIndex x) {
        sets[a].for_each([&](PointIndex y) { check(sup(f.rho(x, y).mask(), diam[a]), [&] { return str(a, x, y); }); });
      });
  });
  run("diameter monotone", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b)
        if ((a & ~b) == 0) check(sup(diam[a], diam[b]), [&] { return str(a, b); });
  });
  run("diameter of closure", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a) {
      const std::uint64_t c = closure(f, sets[a]).low_mask();
      check(sup(diam[a], diam[c]) && sup(diam[c], shift(diam[a], 2)), [&] { return str(a, c); });
    }
  });
  run("union diameter", [&](auto&& check) {
    for (std::size_t a = 1; a <= S; ++a)
      for (std::size_t b = 1; b <= S; ++b) {
        const std::uint64_t base = diam[a] & diam[b];
        const std::uint64_t u = diam[a | b];
        check(sup(u, shift(base & ONE(a, b), 1)) && sup(u, shift(base & ONE(b, a), 1)) &&
                  sup(u, shift(base & RH(a, b), 1)),
              [&] { return str(a, b); });
      }
  });
  return out;
}

}  // namespace hyperdyn
