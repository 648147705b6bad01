#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdyn/errors.hpp"

namespace hyperdyn {

using PointIndex = std::uint32_t;

/// Subset of a finite space, stored as a bit vector over point indices.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  static PointSet full(std::size_t universe) {
    PointSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }
  static PointSet singleton(std::size_t universe, PointIndex i) {
    PointSet s(universe);
    s.insert(i);
    return s;
  }
  static PointSet of(std::size_t universe, std::span<const PointIndex> idx) {
    PointSet s(universe);
    for (PointIndex i : idx) s.insert(i);
    return s;
  }
  static PointSet of(std::size_t universe, std::initializer_list<PointIndex> idx) {
    return of(universe, std::span<const PointIndex>(idx.begin(), idx.size()));
  }
  /// Bit i of `mask` selects point i; universe must be <= 64.
  static PointSet from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw UsageError("from_mask needs a universe of at most 64 points");
    PointSet s(universe);
    if (universe > 0) s.words_[0] = mask;
    s.trim();
    return s;
  }

  std::size_t universe() const { return n_; }

  bool contains(PointIndex i) const {
    return i < n_ && ((words_[i >> 6] >> (i & 63)) & 1u) != 0;
  }
  void insert(PointIndex i) {
    if (i >= n_) throw UsageError("point index " + std::to_string(i) + " outside universe");
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void erase(PointIndex i) {
    if (i < n_) words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  bool subset_of(const PointSet& o) const {
    check(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const PointSet& o) const {
    check(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  PointSet& operator|=(const PointSet& o) {
    check(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  PointSet& operator&=(const PointSet& o) {
    check(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  PointSet& operator-=(const PointSet& o) {
    check(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<PointIndex>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<PointIndex> indices() const {
    std::vector<PointIndex> out;
    out.reserve(count());
    for_each([&](PointIndex i) { out.push_back(i); });
    return out;
  }

  std::optional<PointIndex> first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return static_cast<PointIndex>(w * 64 + std::countr_zero(words_[w]));
    return std::nullopt;
  }

  /// Smallest member of this set that is not in `o`.
  std::optional<PointIndex> first_not_in(const PointSet& o) const {
    check(o);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const std::uint64_t d = words_[w] & ~o.words_[w];
      if (d) return static_cast<PointIndex>(w * 64 + std::countr_zero(d));
    }
    return std::nullopt;
  }

  /// Low 64 bits; exact for universes of at most 64 points.
  std::uint64_t low_mask() const { return words_.empty() ? 0 : words_[0]; }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check(const PointSet& o) const {
    if (o.n_ != n_) throw UsageError("point sets over different spaces");
  }
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hyperdyn
