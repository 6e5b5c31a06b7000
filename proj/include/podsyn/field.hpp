// Copyright 2026 The Podsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>

#include "podsyn/error.hpp"
#include "podsyn/rng.hpp"

namespace podsyn {

// Value in a prime field, always reduced to [0, p). The modulus lives on the
// Field that produced the element, not on the element itself (elements of one
// protocol run all share one field).
struct FieldElement {
  std::uint64_t value = 0;
  auto operator<=>(const FieldElement&) const = default;
};

// Prime field arithmetic with a runtime modulus. The default modulus is the
// Mersenne prime 2^61 - 1: large enough that aggregate counts never wrap,
// small enough that products fit in 128 bits. Tests may use small primes.
class Field {
 public:
  static constexpr std::uint64_t kDefaultModulus = (1ULL << 61) - 1;

  explicit Field(std::uint64_t modulus = kDefaultModulus) : p_(modulus) {}

  std::uint64_t modulus() const { return p_; }

  FieldElement element(std::uint64_t v) const { return {v % p_}; }
  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1 % p_}; }

  FieldElement add(FieldElement a, FieldElement b) const {
    std::uint64_t s = a.value + b.value;  // p < 2^63, no overflow
    if (s >= p_) s -= p_;
    return {s};
  }

  FieldElement sub(FieldElement a, FieldElement b) const {
    return {a.value >= b.value ? a.value - b.value
                               : a.value + p_ - b.value};
  }

  FieldElement neg(FieldElement a) const {
    return {a.value == 0 ? 0 : p_ - a.value};
  }

  FieldElement mul(FieldElement a, FieldElement b) const {
    unsigned __int128 prod =
        static_cast<unsigned __int128>(a.value) * b.value;
    return {static_cast<std::uint64_t>(prod % p_)};
  }

  FieldElement pow(FieldElement base, std::uint64_t exp) const {
    FieldElement acc = one();
    FieldElement b = base;
    while (exp != 0) {
      if (exp & 1) acc = mul(acc, b);
      b = mul(b, b);
      exp >>= 1;
    }
    return acc;
  }

  // Multiplicative inverse via Fermat (p prime).
  FieldElement inv(FieldElement a) const {
    require(a.value != 0, Errc::domain_mismatch, "inverse of zero");
    return pow(a, p_ - 2);
  }

  FieldElement uniform(Rng& rng) const { return {rng.next_below(p_)}; }

 private:
  std::uint64_t p_;
};

}  // namespace podsyn
