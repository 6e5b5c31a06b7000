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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/field.hpp"
#include "podsyn/rng.hpp"

namespace podsyn {

// One evaluation point of a (t+1)-out-of-n Shamir sharing: y = f(x) for a
// degree-t polynomial f with f(0) = secret. x = 0 never appears as an
// evaluation point (it would carry the secret in the clear).
struct Share {
  std::uint64_t x = 0;
  FieldElement y;
  std::uint32_t threshold = 0;  // t: number of shares that reveal nothing

  auto operator<=>(const Share&) const = default;
};

namespace detail {

// Horner evaluation of secret + c1*x + ... + ct*x^t.
inline FieldElement eval_poly(const Field& field, FieldElement secret,
                              std::span<const FieldElement> coeffs,
                              FieldElement x) {
  FieldElement acc = field.zero();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = field.add(field.mul(acc, x), *it);
  }
  return field.add(field.mul(acc, x), secret);
}

inline std::vector<Share> shares_of_poly(const Field& field,
                                         FieldElement secret,
                                         std::span<const FieldElement> coeffs,
                                         std::uint32_t n) {
  std::vector<Share> shares;
  shares.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    FieldElement x = field.element(i + 1);  // evaluation point = index + 1
    shares.push_back(Share{x.value, eval_poly(field, secret, coeffs, x),
                           static_cast<std::uint32_t>(coeffs.size())});
  }
  return shares;
}

}  // namespace detail

// Splits `secret` into n shares such that any t+1 reconstruct it and any t
// are independent of it. Coefficients 1..t are drawn uniformly from the
// field; the evaluation points are x = 1..n.
inline std::vector<Share> share_secret(const Field& field, FieldElement secret,
                                       std::uint32_t t, std::uint32_t n,
                                       Rng& rng) {
  require(t < n, Errc::invalid_threshold,
          "need t < n, got t=" + std::to_string(t) + " n=" + std::to_string(n));
  require(n < field.modulus(), Errc::invalid_threshold,
          "n must be below the field modulus");
  std::vector<FieldElement> coeffs(t);
  for (auto& c : coeffs) c = field.uniform(rng);
  return detail::shares_of_poly(field, secret, coeffs, n);
}

#ifdef PODSYN_TEST_HOOKS
// Deterministic-coefficient variant for golden-value tests only.
inline std::vector<Share> share_secret_with_coefficients(
    const Field& field, FieldElement secret,
    std::span<const FieldElement> coeffs, std::uint32_t n) {
  require(coeffs.size() < n, Errc::invalid_threshold, "need t < n");
  require(n < field.modulus(), Errc::invalid_threshold,
          "n must be below the field modulus");
  return detail::shares_of_poly(field, secret, coeffs, n);
}
#endif

// Lagrange interpolation at x = 0. Accepts any t+1 or more shares of one
// sharing; every subset of valid points yields the same secret.
inline FieldElement reconstruct(const Field& field,
                                std::span<const Share> shares) {
  require(!shares.empty(), Errc::insufficient_shares, "no shares given");
  const std::uint32_t t = shares.front().threshold;
  for (const Share& s : shares) {
    require(s.threshold == t, Errc::mixed_threshold,
            "shares from different sharings");
  }
  require(shares.size() >= static_cast<std::size_t>(t) + 1,
          Errc::insufficient_shares,
          "got " + std::to_string(shares.size()) + " shares, need " +
              std::to_string(t + 1));
  for (std::size_t i = 0; i < shares.size(); ++i) {
    for (std::size_t j = i + 1; j < shares.size(); ++j) {
      require(shares[i].x != shares[j].x, Errc::duplicate_point,
              "two shares at x=" + std::to_string(shares[i].x));
    }
  }

  FieldElement secret = field.zero();
  for (std::size_t i = 0; i < shares.size(); ++i) {
    FieldElement xi = field.element(shares[i].x);
    FieldElement num = field.one();
    FieldElement den = field.one();
    for (std::size_t j = 0; j < shares.size(); ++j) {
      if (j == i) continue;
      FieldElement xj = field.element(shares[j].x);
      num = field.mul(num, field.neg(xj));        // (0 - xj)
      den = field.mul(den, field.sub(xi, xj));    // (xi - xj)
    }
    FieldElement basis = field.mul(num, field.inv(den));
    secret = field.add(secret, field.mul(shares[i].y, basis));
  }
  return secret;
}

// Component-wise sum of two share vectors held at the same party. Because
// each component is a point of an independent sharing at the same x, the sum
// vector is a valid sharing of the component-wise secret sums.
inline std::vector<Share> add_share_vectors(const Field& field,
                                            std::span<const Share> a,
                                            std::span<const Share> b) {
  require(a.size() == b.size(), Errc::shape_mismatch,
          "share vector lengths differ: " + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()));
  std::vector<Share> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(a[i].x == b[i].x && a[i].threshold == b[i].threshold,
            Errc::point_mismatch,
            "component " + std::to_string(i) + " has mismatched point");
    out.push_back(Share{a[i].x, field.add(a[i].y, b[i].y), a[i].threshold});
  }
  return out;
}

// Histogram counts ride the field as plain residues. Sums must stay below
// p/2 so a decoded value >= p/2 can only mean wraparound (or garbage).
inline FieldElement encode_count(const Field& field, std::uint64_t count) {
  require(count < field.modulus() / 2, Errc::overflow_suspected,
          "count " + std::to_string(count) + " too large for modulus");
  return field.element(count);
}

inline std::uint64_t decode_count(const Field& field, FieldElement fe) {
  require(fe.value < field.modulus() / 2, Errc::overflow_suspected,
          "decoded value suspiciously large: " + std::to_string(fe.value));
  return fe.value;
}

}  // namespace podsyn
