#include "ndet/bitvec.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ndet {

BitVec::BitVec(std::size_t nbits, bool fill_value) : nbits_(nbits), words_(words_for(nbits), 0) {
  if (fill_value) fill(true);
}

void BitVec::fill(bool v) {
  std::fill(words_.begin(), words_.end(), v ? ~Word{0} : Word{0});
  trim();
}

void BitVec::trim() {
  const std::size_t tail = nbits_ % kWordBits;
  if (tail != 0 && !words_.empty()) words_.back() &= (Word{1} << tail) - 1;
}

std::size_t BitVec::count() const {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVec::none() const {
  return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

BitVec& BitVec::operator&=(const BitVec& o) {
  assert(nbits_ == o.nbits_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

BitVec& BitVec::operator|=(const BitVec& o) {
  assert(nbits_ == o.nbits_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  assert(nbits_ == o.nbits_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

BitVec BitVec::operator~() const {
  BitVec r(*this);
  for (Word& w : r.words_) w = ~w;
  r.trim();
  return r;
}

std::size_t BitVec::count_and(const BitVec& o) const {
  assert(nbits_ == o.nbits_);
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
  return n;
}

bool BitVec::intersects(const BitVec& o) const {
  assert(nbits_ == o.nbits_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

bool BitVec::is_subset_of(const BitVec& o) const {
  assert(nbits_ == o.nbits_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::vector<std::uint32_t> BitVec::ones() const {
  std::vector<std::uint32_t> out;
  out.reserve(count());
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    Word w = words_[wi];
    while (w) {
      out.push_back(static_cast<std::uint32_t>(wi * kWordBits + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t BitVec::select_and_not(const BitVec& mask, std::size_t rank) const {
  assert(nbits_ == mask.nbits_);
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    Word w = words_[wi] & ~mask.words_[wi];
    const auto c = static_cast<std::size_t>(std::popcount(w));
    if (rank >= c) {
      rank -= c;
      continue;
    }
    for (; rank > 0; --rank) w &= w - 1;
    return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
  }
  throw std::out_of_range("BitVec::select_and_not: rank exceeds population");
}

}  // namespace ndet
