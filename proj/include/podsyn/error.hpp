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

#include <stdexcept>
#include <string>
#include <string_view>

namespace podsyn {

// One error domain for the whole library. Every failure carries a stable
// code so callers (and tests) can dispatch without parsing messages.
enum class Errc {
  // secret sharing
  invalid_threshold,
  insufficient_shares,
  duplicate_point,
  mixed_threshold,
  shape_mismatch,
  point_mismatch,
  overflow_suspected,
  // data model
  unknown_category,
  unparseable_numeric,
  header_mismatch,
  pii_in_marginal,
  // dp
  nonpositive_epsilon,
  nonpositive_sensitivity,
  empty_scores,
  budget_exceeded,
  // synthgen
  domain_mismatch,
  empty_workload,
  domain_too_large,
  // netsim
  unknown_endpoint,
  malformed_frame,
  snapshot_with_inflight_frames,
  // agents
  access_denied,
  no_computation_agents_trusted_by_all,
  missing_contribution,
  attestation_failed,
  no_data,
  // cli
  config_invalid,
  file_not_found,
  consistency_violation,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_threshold: return "invalid-threshold";
    case Errc::insufficient_shares: return "insufficient-shares";
    case Errc::duplicate_point: return "duplicate-point";
    case Errc::mixed_threshold: return "mixed-threshold";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::point_mismatch: return "point-mismatch";
    case Errc::overflow_suspected: return "overflow-suspected";
    case Errc::unknown_category: return "unknown-category";
    case Errc::unparseable_numeric: return "unparseable-numeric";
    case Errc::header_mismatch: return "header-mismatch";
    case Errc::pii_in_marginal: return "pii-in-marginal";
    case Errc::nonpositive_epsilon: return "nonpositive-epsilon";
    case Errc::nonpositive_sensitivity: return "nonpositive-sensitivity";
    case Errc::empty_scores: return "empty-scores";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::domain_mismatch: return "domain-mismatch";
    case Errc::empty_workload: return "empty-workload";
    case Errc::domain_too_large: return "domain-too-large";
    case Errc::unknown_endpoint: return "unknown-endpoint";
    case Errc::malformed_frame: return "malformed-frame";
    case Errc::snapshot_with_inflight_frames: return "snapshot-with-inflight-frames";
    case Errc::access_denied: return "access-denied";
    case Errc::no_computation_agents_trusted_by_all:
      return "no-computation-agents-trusted-by-all";
    case Errc::missing_contribution: return "missing-contribution";
    case Errc::attestation_failed: return "attestation-failed";
    case Errc::no_data: return "no-data";
    case Errc::config_invalid: return "config-invalid";
    case Errc::file_not_found: return "file-not-found";
    case Errc::consistency_violation: return "consistency-violation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace podsyn
