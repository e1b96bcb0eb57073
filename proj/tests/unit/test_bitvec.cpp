#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ndet/bitvec.hpp"

using ndet::BitVec;

TEST(BitVec, PaddingStaysClear) {
  BitVec b(70, true);
  EXPECT_EQ(b.count(), 70u);
  EXPECT_EQ(b.words()[1] >> 6, 0u);
  const BitVec c = ~BitVec(70);
  EXPECT_EQ(c.count(), 70u);
  EXPECT_EQ(c, b);
}

TEST(BitVec, EmptyVector) {
  BitVec b(0);
  EXPECT_TRUE(b.none());
  EXPECT_EQ(b.count(), 0u);
  EXPECT_TRUE(b.ones().empty());
}

TEST(BitVec, SetOpsMatchStdSet) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng() % 300;
    BitVec a(n), b(n);
    std::set<std::uint32_t> sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 3 == 0) { a.set(i); sa.insert(static_cast<std::uint32_t>(i)); }
      if (rng() % 2 == 0) { b.set(i); sb.insert(static_cast<std::uint32_t>(i)); }
    }
    std::size_t inter = 0;
    for (auto x : sa) inter += sb.count(x);
    EXPECT_EQ(a.count_and(b), inter);
    EXPECT_EQ((a & b).count(), inter);
    EXPECT_EQ((a | b).count(), sa.size() + sb.size() - inter);
    EXPECT_EQ((a ^ b).count(), sa.size() + sb.size() - 2 * inter);
    EXPECT_EQ(a.intersects(b), inter > 0);
    EXPECT_EQ(a.is_subset_of(b), inter == sa.size());
    EXPECT_EQ(a.ones(), std::vector<std::uint32_t>(sa.begin(), sa.end()));

    std::vector<std::uint32_t> rest;
    for (auto x : sa)
      if (!sb.count(x)) rest.push_back(x);
    for (std::size_t r = 0; r < rest.size(); ++r) EXPECT_EQ(a.select_and_not(b, r), rest[r]);
  }
}

TEST(BitVec, AssignAndReset) {
  BitVec b(10);
  b.assign(3, true);
  b.assign(4, true);
  b.reset(3);
  EXPECT_FALSE(b.test(3));
  EXPECT_TRUE(b.test(4));
  b.fill(true);
  EXPECT_EQ(b.count(), 10u);
  b.fill(false);
  EXPECT_TRUE(b.none());
}
