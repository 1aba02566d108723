#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

#include "causalmec/error.hpp"

namespace causalmec {

/// Vertices are 1-indexed throughout, matching the text file format.
using VertexId = int;

/// Bit mask over vertices 1..64 (bit v-1 represents vertex v).
using Mask = std::uint64_t;

constexpr Mask vertex_bit(VertexId v) { return Mask{1} << (v - 1); }

/// Finite set of vertices drawn from a universe [1, n], stored as a bitset.
/// Iteration is in ascending vertex order.
class VertexSet {
 public:
  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = VertexId;
    using difference_type = std::ptrdiff_t;
    using pointer = const VertexId*;
    using reference = VertexId;

    const_iterator() = default;
    const_iterator(const VertexSet* set, VertexId pos) : set_(set), pos_(pos) { advance_to_member(); }

    VertexId operator*() const { return pos_; }
    const_iterator& operator++() {
      ++pos_;
      advance_to_member();
      return *this;
    }
    const_iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const const_iterator& other) const { return pos_ == other.pos_; }

   private:
    void advance_to_member() {
      const VertexId n = set_ ? set_->universe() : 0;
      while (pos_ <= n) {
        const auto idx = static_cast<std::size_t>(pos_ - 1);
        const Mask word = set_->words_[idx / 64] >> (idx % 64);
        if (word == 0) {
          pos_ = static_cast<VertexId>((idx / 64 + 1) * 64 + 1);
          continue;
        }
        pos_ += std::countr_zero(word);
        break;
      }
      if (pos_ > n) pos_ = n + 1;
    }

    const VertexSet* set_ = nullptr;
    VertexId pos_ = 0;
  };

  VertexSet() = default;
  explicit VertexSet(int universe) : n_(universe), words_(word_count(universe), 0) {}
  VertexSet(int universe, std::initializer_list<VertexId> members) : VertexSet(universe) {
    for (VertexId v : members) insert(v);
  }
  template <typename Range>
  static VertexSet from_range(int universe, const Range& members) {
    VertexSet s(universe);
    for (VertexId v : members) s.insert(v);
    return s;
  }
  static VertexSet from_mask(int universe, Mask mask) {
    VertexSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    return s;
  }
  static VertexSet full(int universe) {
    VertexSet s(universe);
    for (VertexId v = 1; v <= universe; ++v) s.insert(v);
    return s;
  }

  int universe() const { return n_; }

  bool contains(VertexId v) const {
    if (v < 1 || v > n_) return false;
    const auto idx = static_cast<std::size_t>(v - 1);
    return (words_[idx / 64] >> (idx % 64)) & 1u;
  }
  void insert(VertexId v) {
    check(v);
    const auto idx = static_cast<std::size_t>(v - 1);
    words_[idx / 64] |= Mask{1} << (idx % 64);
  }
  void erase(VertexId v) {
    check(v);
    const auto idx = static_cast<std::size_t>(v - 1);
    words_[idx / 64] &= ~(Mask{1} << (idx % 64));
  }

  std::size_t size() const {
    std::size_t total = 0;
    for (Mask w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](Mask w) { return w == 0; });
  }

  /// Low 64 vertices as a mask; exact when universe() <= 64.
  Mask mask() const { return words_.empty() ? 0 : words_[0]; }

  std::vector<VertexId> members() const { return {begin(), end()}; }

  const_iterator begin() const { return const_iterator(this, 1); }
  const_iterator end() const { return const_iterator(this, n_ + 1); }

  VertexSet& operator|=(const VertexSet& o) {
    same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool operator==(const VertexSet& o) const = default;

 private:
  static std::size_t word_count(int universe) {
    return universe <= 0 ? 0 : (static_cast<std::size_t>(universe) + 63) / 64;
  }
  void check(VertexId v) const {
    if (v < 1 || v > n_) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
  }
  void same_universe(const VertexSet& o) const {
    if (o.n_ != n_) throw Error(ErrorCode::SizeMismatch, "vertex sets over different universes");
  }

  int n_ = 0;
  std::vector<Mask> words_;
};

}  // namespace causalmec
