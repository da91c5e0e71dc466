#pragma once

#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scw {

// Fixed-width bit set. Binary operations require operands of equal width.
// Tail bits past size() are kept zero so word-wise equality and hashing are
// valid.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

  static Bitset all(std::size_t nbits) {
    Bitset b(nbits);
    for (auto& w : b.words_) w = ~uint64_t{0};
    b.trim();
    return b;
  }

  std::size_t size() const { return nbits_; }
  bool empty_domain() const { return nbits_ == 0; }

  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] |= uint64_t{1} << (i & 63);
  }
  void reset(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }
  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  // -1 when no bit is set.
  int find_first() const { return find_next(-1); }
  int find_next(int prev) const {
    for (std::size_t i = static_cast<std::size_t>(prev + 1); i < nbits_; ) {
      uint64_t w = words_[i >> 6] >> (i & 63);
      if (w) return static_cast<int>(i + static_cast<std::size_t>(__builtin_ctzll(w)));
      i = ((i >> 6) + 1) << 6;
    }
    return -1;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (int i = find_first(); i >= 0; i = find_next(i)) f(i);
  }

  std::vector<int> to_indices() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  Bitset& operator|=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator^=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  // Set difference: this & ~o.
  Bitset& operator-=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

  Bitset operator~() const {
    Bitset r(nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    r.trim();
    return r;
  }

  bool is_subset_of(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const Bitset& a, const Bitset& b) {
    if (auto c = a.nbits_ <=> b.nbits_; c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : words_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    h ^= nbits_;
    return static_cast<std::size_t>(h);
  }

  // "{0,3,5}", the indices of set bits, for diagnostics.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](int i) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    });
    return s + "}";
  }

private:
  static std::size_t word_count(std::size_t nbits) { return (nbits + 63) / 64; }

  void trim() {
    if (nbits_ & 63) words_.back() &= (uint64_t{1} << (nbits_ & 63)) - 1;
  }

  std::size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace scw
