// Copyright 2026 The paslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paslab/ccdm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>

namespace paslab {
namespace {

Composition table_composition() { return Composition(Composition::pam_alphabet(4), {4, 3, 2, 1}); }

AmplitudeBlock digits(const std::string& s) {
  AmplitudeBlock a;
  for (char c : s) a.push_back(c - '0');
  return a;
}

// n! / prod(n_a!) with plain integers, for small n.
unsigned long long brute_count(const std::vector<int>& counts) {
  unsigned long long r = 1;
  int placed = 0;
  for (int c : counts) {
    for (int i = 1; i <= c; ++i) {
      ++placed;
      r = r * placed / i;
    }
  }
  return r;
}

AmplitudeBlock sorted_block(const Composition& c) {
  AmplitudeBlock x;
  for (std::size_t a = 0; a < c.size(); ++a) x.insert(x.end(), c.counts()[a], c.alphabet()[a]);
  return x;
}

TEST(CcdmTest, MultisetCount) {
  EXPECT_EQ(multiset_count(table_composition()), 12600);
  EXPECT_EQ(max_input_length(table_composition()), 13);
  const Composition c({1, 3, 5}, {5, 7, 9});
  EXPECT_EQ(multiset_count(c).get_ui(), brute_count({5, 7, 9}));
  EXPECT_EQ(floor_log2(mpz_class(1)), 0);
  EXPECT_EQ(floor_log2(mpz_class(1024)), 10);
  EXPECT_EQ(floor_log2(mpz_class(1023)), 9);
}

TEST(CcdmTest, TableExamples) {
  const Composition c = table_composition();
  EXPECT_EQ(ccdm_encode(BitBlock::from_string("0000000000"), c), digits("1111333557"));
  EXPECT_EQ(ccdm_encode(BitBlock::from_string("0000000001"), c), digits("1111333575"));
  EXPECT_EQ(ccdm_decode(digits("1111333557"), c, 10).to_string(), "0000000000");
  EXPECT_EQ(ccdm_decode(digits("1111333575"), c, 10).to_string(), "0000000001");
}

TEST(CcdmTest, UnrankMatchesLexicographicEnumeration) {
  const Composition c = table_composition();
  AmplitudeBlock x = sorted_block(c);
  long index = 0;
  do {
    ASSERT_EQ(unrank(index, c), x) << "rank " << index;
    ASSERT_EQ(rank(x, c), index);
    ++index;
  } while (std::next_permutation(x.begin(), x.end()));
  EXPECT_EQ(index, 12600);
}

TEST(CcdmTest, ExhaustiveRoundTripIsFast) {
  const Composition c = table_composition();
  const auto start = std::chrono::steady_clock::now();
  for (long r = 0; r < 12600; ++r) ASSERT_EQ(rank(unrank(r, c), c), r);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 1.0);
}

TEST(CcdmTest, EncodeDecodeAllTenBitInputs) {
  const Ccdm ccdm(table_composition(), 10);
  for (unsigned long r = 0; r < 1024; ++r) {
    const auto bits = BitBlock::from_integer(r, 10);
    const auto x = ccdm.encode(bits);
    ASSERT_TRUE(ccdm.composition().matches(x));
    ASSERT_EQ(ccdm.decode(x), bits);
  }
}

TEST(CcdmTest, Errors) {
  const Composition c = table_composition();
  const Ccdm ccdm(c, 10);
  EXPECT_THROW(ccdm.encode(BitBlock::from_string("000")), ConfigError);
  EXPECT_THROW(ccdm.decode(digits("1111333335")), CompositionMismatch);
  // Last codeword has rank 12599 >= 2^10.
  EXPECT_THROW(ccdm.decode(digits("7553331111")), RankOutOfRange);
  EXPECT_THROW(Ccdm(c, 14), ConfigError);
  EXPECT_THROW(unrank(12600, c), RankOutOfRange);
  EXPECT_THROW(rank(digits("1111333555"), c), CompositionMismatch);
}

TEST(CcdmTest, DegenerateCompositions) {
  const Composition single({3}, {5});
  EXPECT_EQ(multiset_count(single), 1);
  const Ccdm ccdm(single);
  EXPECT_EQ(ccdm.k(), 0);
  EXPECT_EQ(ccdm.encode(BitBlock()), (AmplitudeBlock{3, 3, 3, 3, 3}));
  EXPECT_EQ(ccdm.decode({3, 3, 3, 3, 3}).size(), 0u);

  const Composition with_zero({1, 3, 5}, {2, 0, 1});
  AmplitudeBlock x = sorted_block(with_zero);
  long r = 0;
  do {
    EXPECT_EQ(unrank(r, with_zero), x);
    ++r;
  } while (std::next_permutation(x.begin(), x.end()));
  EXPECT_EQ(r, 3);
}

class RandomCompositionTest : public ::testing::TestWithParam<int> {};

TEST_P(RandomCompositionTest, InvertibleMonotoneAndComposition) {
  std::mt19937_64 eng(0x5eed0000ULL + static_cast<unsigned long long>(GetParam()));
  const int m = std::uniform_int_distribution<int>(1, 8)(eng);
  const int n = std::uniform_int_distribution<int>(1, 64)(eng);
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < n; ++i) ++counts[std::uniform_int_distribution<std::size_t>(0, counts.size() - 1)(eng)];
  const Composition c(Composition::pam_alphabet(m), counts);
  const mpz_class size = multiset_count(c);

  gmp_randclass rnd(gmp_randinit_mt);
  rnd.seed(static_cast<unsigned long>(GetParam()) + 17);
  std::vector<mpz_class> ranks{0, size - 1};
  for (int i = 0; i < 30; ++i) ranks.push_back(rnd.get_z_range(size));
  std::sort(ranks.begin(), ranks.end());

  AmplitudeBlock previous;
  mpz_class previous_rank = -1;
  for (const auto& r : ranks) {
    const auto x = unrank(r, c);
    ASSERT_TRUE(c.matches(x));
    ASSERT_EQ(rank(x, c), r);
    if (previous_rank >= 0 && r > previous_rank) {
      ASSERT_TRUE(std::lexicographical_compare(previous.begin(), previous.end(), x.begin(), x.end()));
    }
    if (r == previous_rank) {
      ASSERT_EQ(previous, x);
    }
    previous = x;
    previous_rank = r;
  }

  const Ccdm ccdm(c);
  const int k = ccdm.k();
  BitBlock bits(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) bits.set(static_cast<std::size_t>(i), eng() & 1U);
  EXPECT_EQ(ccdm.decode(ccdm.encode(bits)), bits);
}

INSTANTIATE_TEST_SUITE_P(Property, RandomCompositionTest, ::testing::Range(0, 120));

TEST(CcdmTest, LargeBlockRoundTrip) {
  const Composition c(Composition::pam_alphabet(8), {539, 466, 349, 225, 126, 61, 25, 9});
  const Ccdm ccdm(c, 4320);
  std::mt19937_64 eng(3);
  BitBlock bits(4320);
  for (std::size_t i = 0; i < bits.size(); ++i) bits.set(i, eng() & 1U);
  const auto x = ccdm.encode(bits);
  EXPECT_TRUE(c.matches(x));
  EXPECT_EQ(ccdm.decode(x), bits);
}

}  // namespace
}  // namespace paslab
