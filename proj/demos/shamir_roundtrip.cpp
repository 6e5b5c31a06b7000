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

// Shares a secret 2-of-3, reconstructs it from every pair, and shows that
// share addition aggregates without ever revealing the addends.

#include <cstdio>

#include "podsyn/shamir.hpp"

int main() {
  using namespace podsyn;
  Field field;  // 2^61 - 1
  Rng rng(42);

  std::uint64_t secret = 123456789;
  std::vector<Share> shares =
      share_secret(field, field.element(secret), 1, 3, rng);
  std::printf("secret %llu shared as:\n", (unsigned long long)secret);
  for (const Share& s : shares) {
    std::printf("  player %llu holds y = %llu\n", (unsigned long long)s.x,
                (unsigned long long)s.y.value);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      std::vector<Share> pair = {shares[i], shares[j]};
      std::printf("  players %zu+%zu reconstruct %llu\n", i + 1, j + 1,
                  (unsigned long long)reconstruct(field, pair).value);
    }
  }

  // Add two sharings cell-wise; the sum reconstructs to the sum of secrets.
  std::vector<Share> a = share_secret(field, field.element(1000), 1, 3, rng);
  std::vector<Share> b = share_secret(field, field.element(234), 1, 3, rng);
  std::vector<Share> sum = add_share_vectors(field, a, b);
  std::printf("1000 + 234 via shares = %llu\n",
              (unsigned long long)reconstruct(field, sum).value);
  return 0;
}
