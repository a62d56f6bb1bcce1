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

#pragma once

// Constant-composition distribution matching by exact enumerative coding.
//
// The codebook of a composition is the set of all distinct permutations of
// its multiset, sorted lexicographically by alphabet order. The encoder maps
// a k-bit input (read MSB-first as an integer r) to the r-th codeword; the
// decoder ranks a codeword back to r. All arithmetic is exact (GMP).

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "paslab/bits.hpp"
#include "paslab/composition.hpp"
#include "paslab/error.hpp"

namespace paslab {

/// Number of distinct permutations n! / prod_a n_a!.
inline mpz_class multiset_count(const Composition& c) {
  mpz_class total = 1;
  mpz_class binom;
  unsigned long placed = 0;
  for (int count : c.counts()) {
    placed += static_cast<unsigned long>(count);
    mpz_bin_uiui(binom.get_mpz_t(), placed, static_cast<unsigned long>(count));
    total *= binom;
  }
  return total;
}

/// floor(log2 of a positive integer).
inline int floor_log2(const mpz_class& m) {
  return static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
}

inline int max_input_length(const Composition& c) { return floor_log2(multiset_count(c)); }

/// Codebook size and derived quantities for one composition. Immutable once
/// built; shared through codebook_table().
struct CodebookTable {
  Composition composition;
  mpz_class size;
  int max_k = 0;

  explicit CodebookTable(Composition c)
      : composition(std::move(c)), size(multiset_count(composition)), max_k(floor_log2(size)) {}
};

/// Process-wide table cache keyed by (alphabet, counts).
inline std::shared_ptr<const CodebookTable> codebook_table(const Composition& c) {
  static std::mutex mu;
  static std::map<Composition, std::shared_ptr<const CodebookTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(c);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const CodebookTable>(c);
  cache.emplace(c, table);
  return table;
}

namespace detail {

// Unranking walks the codeword left to right. With `total` permutations of
// the remaining multiset (rem symbols), exactly total * n_a / rem of them
// start with amplitude a. Comparisons are done on r * rem so that only the
// final quotients need exact division.
inline AmplitudeBlock unrank_impl(const mpz_class& rank, const Composition& c,
                                  const mpz_class& codebook_size) {
  const int n = c.n();
  std::vector<unsigned long> left(c.counts().begin(), c.counts().end());
  const std::size_t m = left.size();
  AmplitudeBlock out(static_cast<std::size_t>(n));

  mpz_class r = rank;
  mpz_class total = codebook_size;
  mpz_class scaled;
  mpz_class bound;
  unsigned long rem = static_cast<unsigned long>(n);

  for (int pos = 0; pos < n; ++pos, --rem) {
    if (total == 1) {
      // A single amplitude type remains.
      for (std::size_t a = 0; a < m; ++a) {
        while (left[a] > 0) {
          out[static_cast<std::size_t>(pos++)] = c.alphabet()[a];
          --left[a];
        }
      }
      break;
    }
    mpz_mul_ui(scaled.get_mpz_t(), r.get_mpz_t(), rem);
    unsigned long before = 0;
    std::size_t chosen = m;
    std::size_t last_nonzero = 0;
    for (std::size_t a = 0; a < m; ++a) {
      if (left[a] > 0) last_nonzero = a;
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (left[a] == 0) continue;
      if (a == last_nonzero) {
        chosen = a;
        break;
      }
      mpz_mul_ui(bound.get_mpz_t(), total.get_mpz_t(), before + left[a]);
      if (mpz_cmp(scaled.get_mpz_t(), bound.get_mpz_t()) < 0) {
        chosen = a;
        break;
      }
      before += left[a];
    }
    if (before > 0) {
      mpz_mul_ui(bound.get_mpz_t(), total.get_mpz_t(), before);
      mpz_divexact_ui(bound.get_mpz_t(), bound.get_mpz_t(), rem);
      r -= bound;
    }
    mpz_mul_ui(total.get_mpz_t(), total.get_mpz_t(), left[chosen]);
    mpz_divexact_ui(total.get_mpz_t(), total.get_mpz_t(), rem);
    --left[chosen];
    out[static_cast<std::size_t>(pos)] = c.alphabet()[chosen];
  }
  return out;
}

inline mpz_class rank_impl(const AmplitudeBlock& x, const Composition& c,
                           const mpz_class& codebook_size) {
  std::vector<unsigned long> left(c.counts().begin(), c.counts().end());
  mpz_class r = 0;
  mpz_class total = codebook_size;
  mpz_class term;
  unsigned long rem = static_cast<unsigned long>(c.n());
  for (int amplitude : x) {
    if (total == 1) break;  // remaining suffix is forced
    const auto a = static_cast<std::size_t>(c.index_of(amplitude));
    unsigned long before = 0;
    for (std::size_t b = 0; b < a; ++b) before += left[b];
    if (before > 0) {
      mpz_mul_ui(term.get_mpz_t(), total.get_mpz_t(), before);
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), rem);
      r += term;
    }
    mpz_mul_ui(total.get_mpz_t(), total.get_mpz_t(), left[a]);
    mpz_divexact_ui(total.get_mpz_t(), total.get_mpz_t(), rem);
    --left[a];
    --rem;
  }
  return r;
}

}  // namespace detail

/// The r-th codeword in ascending lexicographic order.
inline AmplitudeBlock unrank(const mpz_class& r, const Composition& c) {
  const auto table = codebook_table(c);
  if (r < 0 || r >= table->size) throw RankOutOfRange("unrank: rank outside the codebook");
  return detail::unrank_impl(r, c, table->size);
}

/// Inverse of unrank().
inline mpz_class rank(const AmplitudeBlock& x, const Composition& c) {
  if (!c.matches(x)) throw CompositionMismatch("rank: sequence does not match composition " + c.to_string());
  return detail::rank_impl(x, c, codebook_table(c)->size);
}

/// Fixed-to-fixed matcher for one composition and input length k.
class Ccdm {
 public:
  /// k defaults to the largest admissible input length.
  explicit Ccdm(const Composition& c, std::optional<int> k = std::nullopt)
      : table_(codebook_table(c)), k_(k.value_or(table_->max_k)) {
    if (k_ < 0 || k_ > table_->max_k) {
      throw ConfigError("Ccdm: k=" + std::to_string(k_) + " exceeds floor(log2 M)=" +
                        std::to_string(table_->max_k) + " for " + c.to_string());
    }
  }

  [[nodiscard]] const Composition& composition() const noexcept { return table_->composition; }
  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] int n() const noexcept { return table_->composition.n(); }
  [[nodiscard]] const mpz_class& codebook_size() const noexcept { return table_->size; }

  [[nodiscard]] AmplitudeBlock encode(const BitBlock& bits) const {
    if (bits.size() != static_cast<std::size_t>(k_)) {
      throw ConfigError("Ccdm::encode: expected " + std::to_string(k_) + " bits, got " +
                        std::to_string(bits.size()));
    }
    return detail::unrank_impl(bits.to_integer(), table_->composition, table_->size);
  }

  [[nodiscard]] BitBlock decode(const AmplitudeBlock& x) const {
    if (!table_->composition.matches(x)) {
      throw CompositionMismatch("Ccdm::decode: sequence does not match composition");
    }
    mpz_class r = detail::rank_impl(x, table_->composition, table_->size);
    if (mpz_sizeinbase(r.get_mpz_t(), 2) > static_cast<std::size_t>(k_) && r != 0) {
      throw RankOutOfRange("Ccdm::decode: codeword lies outside the 2^k used codewords");
    }
    return BitBlock::from_integer(r, static_cast<std::size_t>(k_));
  }

 private:
  std::shared_ptr<const CodebookTable> table_;
  int k_;
};

inline AmplitudeBlock ccdm_encode(const BitBlock& b, const Composition& c) {
  return Ccdm(c, static_cast<int>(b.size())).encode(b);
}

inline BitBlock ccdm_decode(const AmplitudeBlock& x, const Composition& c, int k) {
  return Ccdm(c, k).decode(x);
}

}  // namespace paslab
