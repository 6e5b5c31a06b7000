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

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "podsyn/dataset.hpp"
#include "podsyn/digest.hpp"
#include "podsyn/dp.hpp"
#include "podsyn/error.hpp"
#include "podsyn/field.hpp"
#include "podsyn/histogram.hpp"
#include "podsyn/net.hpp"
#include "podsyn/rng.hpp"
#include "podsyn/schema.hpp"
#include "podsyn/shamir.hpp"
#include "podsyn/synth.hpp"
#include "podsyn/wire.hpp"

namespace podsyn {

inline constexpr std::uint16_t kOrchestratorId = 0;

// Default endpoint numbering: computation agents 1..n, encryption agents
// from 101.
inline std::uint16_t computation_agent_id(std::size_t index) {
  return static_cast<std::uint16_t>(1 + index);
}
inline std::uint16_t encryption_agent_id(std::size_t index) {
  return static_cast<std::uint16_t>(101 + index);
}

struct PreferenceFile {
  std::set<std::uint16_t> trusted_encryption_agents;
  std::set<std::uint16_t> trusted_computation_agents;
};

// A provider's data store. Reads are gated by explicit per-agent grants and
// every authorized read is logged.
struct Pod {
  std::uint32_t owner = 0;
  std::vector<Record> records;
  PreferenceFile preference;
  std::set<std::uint16_t> grants;
  mutable std::vector<std::uint16_t> read_log;

  bool has_grant(std::uint16_t agent_id) const {
    return grants.contains(agent_id);
  }

  const std::vector<Record>& read(std::uint16_t agent_id) const {
    require(has_grant(agent_id), Errc::access_denied,
            "agent " + std::to_string(agent_id) + " lacks a grant on pod " +
                std::to_string(owner));
    read_log.push_back(agent_id);
    return records;
  }
};

struct Roster {
  std::vector<std::uint16_t> computation_agents;
  std::vector<std::uint16_t> encryption_agents;
};

inline Roster default_roster(std::size_t n_computation,
                             std::size_t n_encryption) {
  Roster r;
  for (std::size_t i = 0; i < n_computation; ++i) {
    r.computation_agents.push_back(computation_agent_id(i));
  }
  for (std::size_t i = 0; i < n_encryption; ++i) {
    r.encryption_agents.push_back(encryption_agent_id(i));
  }
  return r;
}

// What the orchestrator learns about pods before matching: resource ids and
// the preference each provider published, never the records themselves.
struct ResourceDescription {
  struct Entry {
    std::uint32_t owner = 0;
    PreferenceFile preference;
  };
  std::vector<Entry> entries;

  void validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        require(entries[i].owner != entries[j].owner, Errc::config_invalid,
                "duplicate resource owner id");
      }
    }
  }
};

inline ResourceDescription describe_resources(const std::vector<Pod>& pods) {
  ResourceDescription desc;
  desc.entries.reserve(pods.size());
  for (const Pod& pod : pods) {
    desc.entries.push_back({pod.owner, pod.preference});
  }
  desc.validate();
  return desc;
}

struct MatchResult {
  std::vector<std::size_t> included;                // provider indices
  std::vector<std::size_t> excluded;                // no usable encryption agent
  std::map<std::size_t, std::uint16_t> assignment;  // provider -> enc agent
  std::vector<std::uint16_t> computation_set;       // the active players
};

// Assigns each provider a trusted encryption agent (least-loaded, lowest id
// on ties) and picks a computation-agent set trusted by every included
// provider. Providers without a usable encryption agent are excluded, not
// fatal; an unsatisfiable computation set is fatal.
inline MatchResult match_agents(const ResourceDescription& resources,
                                const Roster& roster,
                                std::uint32_t n_computation_agents) {
  require(!roster.computation_agents.empty() &&
              !roster.encryption_agents.empty(),
          Errc::config_invalid, "empty roster");
  MatchResult result;
  std::map<std::uint16_t, std::size_t> load;
  for (std::uint16_t id : roster.encryption_agents) load[id] = 0;

  for (std::size_t p = 0; p < resources.entries.size(); ++p) {
    const PreferenceFile& pref = resources.entries[p].preference;
    std::uint16_t best = 0;
    bool found = false;
    for (std::uint16_t id : roster.encryption_agents) {
      if (!pref.trusted_encryption_agents.contains(id)) continue;
      if (!found || load[id] < load[best] ||
          (load[id] == load[best] && id < best)) {
        best = id;
        found = true;
      }
    }
    if (!found) {
      result.excluded.push_back(p);
      continue;
    }
    result.included.push_back(p);
    result.assignment[p] = best;
    ++load[best];
  }

  if (result.included.empty()) return result;  // caller raises no-data

  std::vector<std::uint16_t> candidates;
  for (std::uint16_t id : roster.computation_agents) {
    bool trusted_by_all = true;
    for (std::size_t p : result.included) {
      if (!resources.entries[p].preference.trusted_computation_agents.contains(
              id)) {
        trusted_by_all = false;
        break;
      }
    }
    if (trusted_by_all) candidates.push_back(id);
  }
  require(candidates.size() >= n_computation_agents,
          Errc::no_computation_agents_trusted_by_all,
          "only " + std::to_string(candidates.size()) +
              " computation agents trusted by all included providers, need " +
              std::to_string(n_computation_agents));
  candidates.resize(n_computation_agents);  // roster order = lowest ids first
  result.computation_set = std::move(candidates);
  return result;
}

inline MatchResult match_agents(const std::vector<Pod>& pods,
                                const Roster& roster,
                                std::uint32_t n_computation_agents) {
  return match_agents(describe_resources(pods), roster, n_computation_agents);
}

// ---- Attestation (simulated TEE semantics) ----

struct AttestationReport {
  Digest256 measurement{};
  std::uint64_t nonce = 0;
  Digest256 session_key{};
};

inline Digest256 derive_session_key(const Digest256& measurement,
                                    std::uint64_t nonce) {
  std::string material = "session-key|";
  material.append(reinterpret_cast<const char*>(measurement.data()),
                  measurement.size());
  std::vector<std::uint8_t> n;
  put_u64(n, nonce);
  material.append(reinterpret_cast<const char*>(n.data()), n.size());
  return sha256(material);
}

inline AttestationReport attest(std::string_view manifest,
                                std::uint64_t nonce) {
  AttestationReport r;
  r.measurement = sha256(manifest);
  r.nonce = nonce;
  r.session_key = derive_session_key(r.measurement, nonce);
  return r;
}

inline bool verify_attestation(const AttestationReport& report,
                               const Digest256& expected_measurement,
                               std::uint64_t expected_nonce) {
  return report.measurement == expected_measurement &&
         report.nonce == expected_nonce;
}

// ---- Configuration ----

enum class GeneratorKind { mwem, measure_generate };
enum class WorkloadKind { one_way, two_way };

struct ProtocolConfig {
  std::uint32_t n_computation_agents = 3;
  std::uint32_t n_encryption_agents = 2;
  std::uint32_t threshold = 1;  // t; any t shares reveal nothing
  double epsilon = 2.0;
  std::uint32_t iterations = 30;  // MWEM T
  GeneratorKind generator = GeneratorKind::mwem;
  WorkloadKind workload = WorkloadKind::one_way;
  std::uint32_t fit_iterations = 30;
  bool average_iterates = false;
  std::uint64_t synthetic_records = 0;  // 0 = match the input record count
  std::uint64_t seed = 1;
  bool require_attestation = true;
  std::string enclave_manifest;  // derived from the config when empty
  std::size_t domain_limit = kDefaultDomainLimit;
  std::uint64_t field_modulus = Field::kDefaultModulus;

  void validate() const {
    require(n_computation_agents >= 2, Errc::config_invalid,
            "need at least two computation agents");
    require(n_encryption_agents >= 1, Errc::config_invalid,
            "need at least one encryption agent");
    require(threshold < n_computation_agents, Errc::invalid_threshold,
            "threshold must be below the number of computation agents");
    require(threshold == (n_computation_agents - 1) / 2, Errc::config_invalid,
            "honest majority requires t = floor((n-1)/2)");
    require(threshold <= 255, Errc::config_invalid, "threshold exceeds wire");
    require(epsilon > 0.0, Errc::nonpositive_epsilon, "epsilon must be > 0");
    require(iterations >= 1, Errc::config_invalid, "iterations must be >= 1");
  }
};

inline const char* generator_name(GeneratorKind g) {
  return g == GeneratorKind::mwem ? "mwem" : "measure_generate";
}

inline const char* workload_name(WorkloadKind w) {
  return w == WorkloadKind::one_way ? "one_way" : "two_way";
}

// The code manifest whose digest the verifiers pin. Binding the generation
// parameters into it means a run with altered parameters fails attestation.
inline std::string make_manifest(const ProtocolConfig& cfg) {
  std::string m = "enclave-generator v1\n";
  m += std::string("generator=") + generator_name(cfg.generator) + "\n";
  m += "epsilon=" + format_double(cfg.epsilon) + "\n";
  m += "iterations=" + std::to_string(cfg.iterations) + "\n";
  m += "fit_iterations=" + std::to_string(cfg.fit_iterations) + "\n";
  m += std::string("workload=") + workload_name(cfg.workload) + "\n";
  m += "average_iterates=" + std::to_string(cfg.average_iterates ? 1 : 0) +
       "\n";
  return m;
}

// ---- Generator (runs inside the enclave agent; also the oracle path) ----

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::mwem;
  double epsilon = 2.0;
  std::uint32_t iterations = 30;
  std::uint32_t fit_iterations = 30;
  bool average_iterates = false;
  std::uint64_t synthetic_records = 0;
};

inline GeneratorSpec generator_spec(const ProtocolConfig& cfg) {
  return GeneratorSpec{cfg.generator,       cfg.epsilon,
                       cfg.iterations,      cfg.fit_iterations,
                       cfg.average_iterates, cfg.synthetic_records};
}

struct GeneratorOutput {
  Distribution dist;
  std::vector<Record> records;  // over the non-pii output schema
  Schema schema;
  MwemTrace trace;  // empty for measure_generate
  std::vector<SpendRecord> audit;
  double final_tv = 0.0;
};

// One entry point for DP generation given plaintext aggregate marginals.
// The pipeline calls it inside the enclave agent; tests call it directly as
// the centralised oracle. Identical inputs and seed give identical records.
inline GeneratorOutput run_generator(const GeneratorSpec& spec,
                                     const Schema& schema,
                                     const Workload& workload,
                                     std::span<const Histogram> aggregates,
                                     std::uint64_t seed) {
  PrivacyBudget budget(spec.epsilon);
  Rng rng(derive_seed(seed, "generator"));
  GeneratorOutput out;
  if (spec.kind == GeneratorKind::mwem) {
    MwemResult r = mwem(workload, aggregates, spec.epsilon, spec.iterations,
                        rng, budget, MwemOptions{spec.average_iterates});
    out.dist = std::move(r.dist);
    out.trace = std::move(r.trace);
  } else {
    MeasureGenerateResult r = measure_generate(
        workload, aggregates, spec.epsilon, spec.fit_iterations, rng, budget);
    out.dist = std::move(r.dist);
  }
  out.final_tv = workload_tv_error(workload, out.dist, aggregates);
  out.schema = output_schema(schema, workload);
  std::uint64_t m = spec.synthetic_records != 0
                        ? spec.synthetic_records
                        : static_cast<std::uint64_t>(
                              std::llround(out.dist.mass));
  out.records = sample_records(workload, schema, out.dist, m, rng);
  out.audit = budget.audit_log();
  return out;
}

// Fixed-width record serialisation for result frames: numeric cells as the
// 8-byte bit pattern of the double, categorical cells as a 2-byte value
// index. Record count in, record count out, byte for byte.
inline std::vector<std::uint8_t> encode_records(
    const Schema& schema, const std::vector<Record>& records) {
  std::vector<std::uint8_t> out;
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  for (const Record& r : records) {
    require(r.cells.size() == schema.size(), Errc::shape_mismatch,
            "record arity does not match schema");
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const AttributeSpec& spec = schema.at(a);
      if (spec.kind == AttrKind::numeric) {
        put_u64(out, std::bit_cast<std::uint64_t>(std::get<double>(r.cells[a])));
      } else {
        put_u16(out, static_cast<std::uint16_t>(bin_value(spec, r.cells[a])));
      }
    }
  }
  return out;
}

inline std::vector<Record> decode_records(const Schema& schema,
                                          std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  std::uint32_t count = get_u32(in, off);
  std::vector<Record> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Record r;
    r.cells.reserve(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const AttributeSpec& spec = schema.at(a);
      if (spec.kind == AttrKind::numeric) {
        r.cells.emplace_back(std::bit_cast<double>(get_u64(in, off)));
      } else {
        std::uint16_t idx = get_u16(in, off);
        require(idx < spec.values.size(), Errc::malformed_frame,
                "category index out of range");
        r.cells.emplace_back(spec.values[idx]);
      }
    }
    out.push_back(std::move(r));
  }
  require(off == in.size(), Errc::malformed_frame, "trailing record bytes");
  return out;
}

struct PodSkipReport {
  std::size_t provider = 0;
  std::string reason;
};

struct RejectReport {
  std::uint16_t sender = 0;
  std::string reason;
};

// ---- Encryption agent: reads pods, bins client-side, shares histograms,
// and verifies the enclave before any reveal happens. ----

class EncryptionAgent {
 public:
  EncryptionAgent(std::uint16_t id, const Field& field, std::uint64_t seed,
                  Digest256 expected_measurement)
      : id_(id),
        field_(field),
        rng_(seed),
        expected_measurement_(expected_measurement) {}

  std::uint16_t id() const { return id_; }

  // Builds per-marginal histograms from one pod and sends share vector j to
  // player j. A missing grant skips the pod with a report; it never aborts
  // the run.
  void share_pod(const Pod& pod, std::size_t provider_index,
                 const Schema& schema, std::span<const Marginal> marginals,
                 std::uint32_t threshold,
                 std::span<const std::uint16_t> players, Network& net) {
    if (!pod.has_grant(id_)) {
      skipped_.push_back(PodSkipReport{provider_index, "access-denied"});
      return;
    }
    const std::vector<Record>& records = pod.read(id_);
    for (std::size_t m = 0; m < marginals.size(); ++m) {
      Histogram hist = build_histogram(records, marginals[m], schema);
      std::vector<std::vector<Share>> per_player(players.size());
      for (auto& v : per_player) v.reserve(hist.counts.size());
      for (std::uint64_t count : hist.counts) {
        std::vector<Share> shares =
            share_secret(field_, encode_count(field_, count), threshold,
                         static_cast<std::uint32_t>(players.size()), rng_);
        for (std::size_t j = 0; j < players.size(); ++j) {
          per_player[j].push_back(shares[j]);
        }
      }
      for (std::size_t j = 0; j < players.size(); ++j) {
        ShareVectorMsg msg;
        msg.provider = static_cast<std::uint16_t>(provider_index);
        msg.marginal = static_cast<std::uint16_t>(m);
        msg.threshold = static_cast<std::uint8_t>(threshold);
        msg.shares = std::move(per_player[j]);
        Frame f;
        f.type = MsgType::share_vector;
        f.sender = id_;
        f.payload = encode_share_vector(msg);
        net.send(id_, players[j], f);
      }
    }
  }

  // Challenger side of remote attestation.
  void begin_attestation(std::uint16_t enclave_id, Network& net) {
    pending_nonce_ = rng_.next_u64();
    attestation_done_ = false;
    attestation_ok_ = false;
    AttestationMsg msg;
    msg.kind = AttestationKind::request;
    msg.nonce = pending_nonce_;
    Frame f;
    f.type = MsgType::attestation;
    f.sender = id_;
    f.payload = encode_attestation(msg);
    net.send(id_, enclave_id, f);
  }

  void handle(const Frame& frame, Network&) {
    if (frame.type != MsgType::attestation) return;
    AttestationMsg msg = decode_attestation(frame.payload);
    if (msg.kind != AttestationKind::report) return;
    AttestationReport report{msg.measurement, msg.nonce, msg.session_key};
    attestation_ok_ =
        verify_attestation(report, expected_measurement_, pending_nonce_);
    attestation_done_ = true;
    if (attestation_ok_) session_key_ = msg.session_key;
  }

  bool attestation_done() const { return attestation_done_; }
  bool attestation_ok() const { return attestation_ok_; }
  const std::vector<PodSkipReport>& skipped() const { return skipped_; }

 private:
  std::uint16_t id_;
  Field field_;
  Rng rng_;
  Digest256 expected_measurement_;
  std::uint64_t pending_nonce_ = 0;
  bool attestation_done_ = false;
  bool attestation_ok_ = false;
  Digest256 session_key_{};
  std::vector<PodSkipReport> skipped_;
};

// ---- Computation agent: aggregates share vectors, runs joint random
// selection, and (when chosen) acts as the enclave agent. ----

class ComputationAgent {
 public:
  ComputationAgent(std::uint16_t id, const Field& field, std::uint64_t seed,
                   std::string manifest)
      : id_(id), field_(field), rng_(seed), manifest_(std::move(manifest)) {}

  std::uint16_t id() const { return id_; }

  // Called once the match fixes the active player set.
  void configure(std::vector<std::uint16_t> players, std::uint32_t threshold,
                 std::vector<Marginal> marginals) {
    players_ = std::move(players);
    threshold_ = threshold;
    marginals_ = std::move(marginals);
    player_index_ = 0;
    for (std::size_t j = 0; j < players_.size(); ++j) {
      if (players_[j] == id_) player_index_ = j;
    }
    aggregate_.clear();
    for (const Marginal& m : marginals_) {
      std::vector<Share> zeros(m.cell_count,
                               Share{player_index_ + 1, field_.zero(),
                                     threshold_});
      aggregate_.push_back(std::move(zeros));
    }
    contributions_.assign(marginals_.size(), 0);
  }

  void handle(const Frame& frame, Network& net) {
    switch (frame.type) {
      case MsgType::share_vector:
        on_share_vector(frame);
        break;
      case MsgType::selection_contribution: {
        SelectionMsg msg = decode_selection(frame.payload);
        selection_inputs_.push_back(msg.share);
        break;
      }
      case MsgType::selection_open: {
        SelectionMsg msg = decode_selection(frame.payload);
        selection_opens_.push_back(msg.share);
        break;
      }
      case MsgType::attestation:
        on_attestation(frame, net);
        break;
      case MsgType::reveal:
        on_reveal(frame, net);
        break;
      case MsgType::aggregate_share:
        on_aggregate_share(frame);
        break;
      default:
        break;
    }
  }

  // Step 1 of joint random selection: commit a uniform draw by sharing it.
  void send_selection_contribution(std::uint32_t n_choices, Network& net) {
    std::uint64_t r = rng_.next_below(n_choices);
#ifdef PODSYN_TEST_HOOKS
    if (forced_contribution_) r = *forced_contribution_;
#endif
    std::vector<Share> shares = share_secret(
        field_, field_.element(r), threshold_,
        static_cast<std::uint32_t>(players_.size()), rng_);
    for (std::size_t j = 0; j < players_.size(); ++j) {
      if (players_[j] == id_) {
        selection_inputs_.push_back(shares[j]);
        continue;
      }
      SelectionMsg msg;
      msg.threshold = static_cast<std::uint8_t>(threshold_);
      msg.share = shares[j];
      Frame f;
      f.type = MsgType::selection_contribution;
      f.sender = id_;
      f.payload = encode_selection(msg);
      net.send(id_, players_[j], f);
    }
  }

  // Step 2: every player opens its share of the sum; nobody saw anything
  // before every contribution was committed.
  void send_selection_open(Network& net) {
    require(selection_inputs_.size() == players_.size(),
            Errc::missing_contribution,
            "got " + std::to_string(selection_inputs_.size()) +
                " selection contributions, need " +
                std::to_string(players_.size()));
    Share sum{player_index_ + 1, field_.zero(),
              threshold_};
    for (const Share& s : selection_inputs_) {
      sum.y = field_.add(sum.y, s.y);
    }
    selection_opens_.push_back(sum);
    SelectionMsg msg;
    msg.threshold = static_cast<std::uint8_t>(threshold_);
    msg.share = sum;
    Frame f;
    f.type = MsgType::selection_open;
    f.sender = id_;
    f.payload = encode_selection(msg);
    for (std::uint16_t p : players_) {
      if (p != id_) net.send(id_, p, f);
    }
  }

  std::uint32_t selection_result(std::uint32_t n_choices) const {
    require(selection_opens_.size() == players_.size(),
            Errc::missing_contribution, "missing opened sum shares");
    FieldElement sum = reconstruct(field_, selection_opens_);
    return static_cast<std::uint32_t>(sum.value % n_choices);
  }

  // Enclave duties.
  AttestationReport make_report(std::uint64_t nonce) const {
    return attest(manifest_, nonce);
  }

  std::vector<Histogram> reconstruct_aggregates() const {
    require(incoming_aggregates_.size() == players_.size() - 1,
            Errc::insufficient_shares,
            "expected aggregate shares from every other player");
    std::vector<Histogram> out;
    for (std::size_t m = 0; m < marginals_.size(); ++m) {
      Histogram h;
      h.marginal = marginals_[m];
      h.counts.reserve(marginals_[m].cell_count);
      for (std::size_t c = 0; c < marginals_[m].cell_count; ++c) {
        std::vector<Share> shares;
        shares.push_back(aggregate_[m][c]);
        for (const auto& [sender, vectors] : incoming_aggregates_) {
          shares.push_back(vectors.at(m).at(c));
        }
        h.counts.push_back(decode_count(field_, reconstruct(field_, shares)));
      }
      out.push_back(std::move(h));
    }
    return out;
  }

  void send_result(std::uint16_t to, const Schema& out_schema,
                   const std::vector<Record>& records, Network& net) {
    Frame f;
    f.type = MsgType::result;
    f.sender = id_;
    f.payload = encode_records(out_schema, records);
    net.send(id_, to, f);
  }

  const std::vector<std::vector<Share>>& aggregate_share_vectors() const {
    return aggregate_;
  }
  const std::vector<RejectReport>& rejects() const { return rejects_; }
  std::size_t player_index() const { return player_index_; }

#ifdef PODSYN_TEST_HOOKS
  void force_selection_contribution(std::uint64_t value) {
    forced_contribution_ = value;
  }
  void tamper_manifest() {
    require(!manifest_.empty(), Errc::config_invalid, "empty manifest");
    manifest_[0] ^= 0x01;  // one-byte change
  }
#endif

 private:
  void on_share_vector(const Frame& frame) {
    ShareVectorMsg msg;
    try {
      msg = decode_share_vector(frame.payload);
    } catch (const Error& e) {
      rejects_.push_back(RejectReport{frame.sender, e.what()});
      return;
    }
    if (msg.marginal >= marginals_.size() ||
        msg.shares.size() != marginals_[msg.marginal].cell_count ||
        msg.threshold != threshold_) {
      rejects_.push_back(
          RejectReport{frame.sender, "shape-mismatch: share vector rejected"});
      return;
    }
    for (const Share& s : msg.shares) {
      if (s.x != player_index_ + 1) {
        rejects_.push_back(RejectReport{
            frame.sender, "point-mismatch: share vector rejected"});
        return;
      }
    }
    aggregate_[msg.marginal] = add_share_vectors(
        field_, aggregate_[msg.marginal], msg.shares);
    ++contributions_[msg.marginal];
  }

  void on_attestation(const Frame& frame, Network& net) {
    AttestationMsg msg = decode_attestation(frame.payload);
    if (msg.kind != AttestationKind::request) return;
    AttestationReport report = make_report(msg.nonce);
    AttestationMsg reply;
    reply.kind = AttestationKind::report;
    reply.nonce = report.nonce;
    reply.measurement = report.measurement;
    reply.session_key = report.session_key;
    Frame f;
    f.type = MsgType::attestation;
    f.sender = id_;
    f.payload = encode_attestation(reply);
    net.send(id_, frame.sender, f);
  }

  void on_reveal(const Frame& frame, Network& net) {
    RevealCmdMsg cmd = decode_reveal_cmd(frame.payload);
    if (cmd.chosen == id_) return;  // the enclave keeps its own shares
    for (std::size_t m = 0; m < marginals_.size(); ++m) {
      AggregateShareMsg msg;
      msg.marginal = static_cast<std::uint16_t>(m);
      msg.threshold = static_cast<std::uint8_t>(threshold_);
      msg.shares = aggregate_[m];
      Frame f;
      f.type = MsgType::aggregate_share;
      f.sender = id_;
      f.payload = encode_aggregate_share(msg);
      net.send(id_, cmd.chosen, f);
    }
  }

  // Aggregate shares arriving at the enclave during reveal.
  void on_aggregate_share(const Frame& frame) {
    AggregateShareMsg msg = decode_aggregate_share(frame.payload);
    incoming_aggregates_[frame.sender].resize(marginals_.size());
    incoming_aggregates_[frame.sender][msg.marginal] = msg.shares;
  }

  std::uint16_t id_;
  Field field_;
  Rng rng_;
  std::string manifest_;
  std::vector<std::uint16_t> players_;
  std::uint64_t player_index_ = 0;
  std::uint32_t threshold_ = 0;
  std::vector<Marginal> marginals_;
  std::vector<std::vector<Share>> aggregate_;
  std::vector<std::size_t> contributions_;
  std::vector<RejectReport> rejects_;
  std::vector<Share> selection_inputs_;
  std::vector<Share> selection_opens_;
  std::map<std::uint16_t, std::vector<std::vector<Share>>>
      incoming_aggregates_;
#ifdef PODSYN_TEST_HOOKS
  std::optional<std::uint64_t> forced_contribution_;
#endif
};

}  // namespace podsyn
