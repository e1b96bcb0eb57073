#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ndet {

// Dense bit-vector over the input space, packed 64 vectors per word.
// Bits past size() in the last word are kept zero.
class BitVec {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t nbits, bool fill = false);

  static std::size_t words_for(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

  std::size_t size() const { return nbits_; }
  std::size_t num_words() const { return words_.size(); }
  std::span<Word> words() { return words_; }
  std::span<const Word> words() const { return words_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  void fill(bool v);
  std::size_t count() const;
  bool none() const;
  bool any() const { return !none(); }

  // Clears padding bits beyond size(); call after whole-word writes.
  void trim();

  BitVec& operator&=(const BitVec& o);
  BitVec& operator|=(const BitVec& o);
  BitVec& operator^=(const BitVec& o);
  BitVec operator~() const;

  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  bool operator==(const BitVec& o) const = default;

  // |this & o| without materializing the intersection.
  std::size_t count_and(const BitVec& o) const;
  bool intersects(const BitVec& o) const;
  bool is_subset_of(const BitVec& o) const;

  // Set bit positions in ascending order.
  std::vector<std::uint32_t> ones() const;

  // Position of the rank-th set bit (0-based) of this & ~mask.
  std::size_t select_and_not(const BitVec& mask, std::size_t rank) const;

 private:
  std::size_t nbits_ = 0;
  std::vector<Word> words_;
};

}  // namespace ndet
