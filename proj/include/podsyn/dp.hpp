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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/rng.hpp"

namespace podsyn {

// The only shape in which measured data leaves a mechanism. Downstream
// generators take NoisyMeasurement, never raw counts, so the post-processing
// boundary is visible in the types.
struct NoisyMeasurement {
  std::uint32_t query_id = 0;
  double value = 0.0;
  double epsilon_used = 0.0;
  double scale = 0.0;  // = sensitivity / epsilon_used
};

// Laplace noise via inverse CDF: u uniform on (-1/2, 1/2),
// L = b * sign(u) * ln(1 - 2|u|). Floating-point side channels are a known
// limitation of this sampler and out of scope here.
inline NoisyMeasurement laplace_mechanism(double true_value, double sensitivity,
                                          double eps, Rng& rng) {
  require(eps > 0.0, Errc::nonpositive_epsilon, "laplace: eps must be > 0");
  require(sensitivity > 0.0, Errc::nonpositive_sensitivity,
          "laplace: sensitivity must be > 0");
  double b = sensitivity / eps;
  double u = rng.next_open_unit() - 0.5;
  double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  double noise = b * sign * std::log(1.0 - 2.0 * std::abs(u));
  NoisyMeasurement m;
  m.value = true_value + noise;
  m.epsilon_used = eps;
  m.scale = b;
  return m;
}

// Samples index i with probability proportional to
// exp(eps * scores[i] / (2 * sensitivity)). The max score is subtracted
// before exponentiation, which also makes the outcome invariant under adding
// a constant to every score.
inline std::size_t exponential_mechanism(std::span<const double> scores,
                                         double eps, double sensitivity,
                                         Rng& rng) {
  require(!scores.empty(), Errc::empty_scores, "exponential: no candidates");
  require(eps > 0.0, Errc::nonpositive_epsilon,
          "exponential: eps must be > 0");
  require(sensitivity > 0.0, Errc::nonpositive_sensitivity,
          "exponential: sensitivity must be > 0");
  double max_score = scores[0];
  for (double s : scores) max_score = std::max(max_score, s);
  std::vector<double> weights(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(eps * (scores[i] - max_score) / (2.0 * sensitivity));
    total += weights[i];
  }
  double u = rng.next_unit() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

struct SpendRecord {
  std::string step;
  std::string mechanism;
  double epsilon = 0.0;
  double timestamp = 0.0;  // seconds since epoch; 0 when deterministic
};

// Append-only sequential-composition ledger. One pipeline owns one budget;
// there is no shared mutation.
class PrivacyBudget {
 public:
  explicit PrivacyBudget(double epsilon_total, bool wall_clock = false)
      : total_(epsilon_total), wall_clock_(wall_clock) {
    require(epsilon_total > 0.0, Errc::nonpositive_epsilon,
            "budget must be positive");
  }

  void spend(double eps, std::string step, std::string mechanism) {
    require(eps > 0.0, Errc::nonpositive_epsilon, "spend must be positive");
    require(spent_ + eps <= total_, Errc::budget_exceeded,
            "spend " + std::to_string(eps) + " exceeds remaining " +
                std::to_string(total_ - spent_));
    spent_ += eps;
    double ts = 0.0;
    if (wall_clock_) {
      ts = std::chrono::duration<double>(
               std::chrono::system_clock::now().time_since_epoch())
               .count();
    }
    log_.push_back(SpendRecord{std::move(step), std::move(mechanism), eps, ts});
  }

  double epsilon_total() const { return total_; }
  double epsilon_spent() const { return spent_; }
  double epsilon_remaining() const { return total_ - spent_; }
  const std::vector<SpendRecord>& audit_log() const { return log_; }

 private:
  double total_;
  double spent_ = 0.0;
  bool wall_clock_;
  std::vector<SpendRecord> log_;
};

// Splits a budget into `parts` near-equal spends whose running double
//-precision sum lands exactly on `total`. Deltas are taken against the
// rounded cumulative targets fl(total * i / parts); each difference is exact
// (Sterbenz), so charging the deltas in order reproduces the targets and the
// final spend equals `total` bit for bit. Intended for a fresh budget.
class EvenSplit {
 public:
  EvenSplit(double total, std::size_t parts) : total_(total), parts_(parts) {
    require(total > 0.0, Errc::nonpositive_epsilon, "split of nonpositive eps");
    require(parts >= 1, Errc::config_invalid, "split into zero parts");
  }

  double next() {
    require(issued_ < parts_, Errc::budget_exceeded, "split exhausted");
    ++issued_;
    double cum = issued_ == parts_
                     ? total_
                     : total_ * (static_cast<double>(issued_) /
                                 static_cast<double>(parts_));
    double delta = cum - charged_;
    charged_ = cum;
    return delta;
  }

  std::size_t remaining() const { return parts_ - issued_; }

 private:
  double total_;
  std::size_t parts_;
  std::size_t issued_ = 0;
  double charged_ = 0.0;
};

}  // namespace podsyn
