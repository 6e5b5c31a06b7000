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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "podsyn/agents.hpp"
#include "podsyn/net.hpp"

namespace podsyn {

struct RunReport {
  std::vector<Record> synthetic_records;  // as decoded by the orchestrator
  Schema synthetic_schema;
  std::vector<PhaseMetrics> phases;
  std::vector<SpendRecord> audit;
  MwemTrace trace;
  double final_tv = 0.0;
  std::uint32_t selection_index = 0;
  std::uint16_t enclave_agent = 0;
  std::vector<std::uint16_t> players;  // active computation set, player 0 first
  std::vector<std::size_t> excluded_providers;
  std::vector<PodSkipReport> skipped_pods;
  std::uint64_t input_records = 0;

  const PhaseMetrics* phase(const std::string& name) const {
    for (const PhaseMetrics& p : phases) {
      if (p.phase == name) return &p;
    }
    return nullptr;
  }
};

// Drives one end-to-end run: match, share, joint random selection,
// attestation, reveal-to-one, in-enclave generation. The orchestrator and
// every roster agent are endpoints on the supplied transport; the driver is
// the only code that crosses phase barriers.
class Simulation {
 public:
  Simulation(ProtocolConfig cfg, Schema schema, std::vector<Pod> pods,
             Roster roster, Network& net)
      : cfg_(std::move(cfg)),
        schema_(std::move(schema)),
        pods_(std::move(pods)),
        roster_(std::move(roster)),
        field_(cfg_.field_modulus),
        net_(net) {
    cfg_.validate();
    schema_.validate();
    require(roster_.computation_agents.size() >= cfg_.n_computation_agents,
            Errc::config_invalid, "roster has too few computation agents");
    require(roster_.encryption_agents.size() >= cfg_.n_encryption_agents,
            Errc::config_invalid, "roster has too few encryption agents");

    std::vector<Marginal> marginals =
        cfg_.workload == WorkloadKind::one_way
            ? one_way_marginals(schema_)
            : all_two_way_marginals(schema_);
    workload_ = make_workload(schema_, std::move(marginals), cfg_.domain_limit);

    manifest_ = cfg_.enclave_manifest.empty() ? make_manifest(cfg_)
                                              : cfg_.enclave_manifest;
    expected_measurement_ = sha256(manifest_);

    net_.register_endpoint(kOrchestratorId, [this](const Frame& f) {
      if (f.type == MsgType::result) result_payload_ = f.payload;
    });
    std::size_t idx = 0;
    for (std::uint16_t id : roster_.computation_agents) {
      auto agent = std::make_unique<ComputationAgent>(
          id, field_, derive_seed(cfg_.seed, "comp", idx), manifest_);
      net_.register_endpoint(id, [a = agent.get(), this](const Frame& f) {
        a->handle(f, net_);
      });
      comp_[id] = std::move(agent);
      ++idx;
    }
    idx = 0;
    for (std::uint16_t id : roster_.encryption_agents) {
      auto agent = std::make_unique<EncryptionAgent>(
          id, field_, derive_seed(cfg_.seed, "enc", idx),
          expected_measurement_);
      net_.register_endpoint(id, [a = agent.get(), this](const Frame& f) {
        a->handle(f, net_);
      });
      enc_[id] = std::move(agent);
      ++idx;
    }
  }

  RunReport run() {
    RunReport report;
    run_phase(report, "match", [&] { phase_match(); });
    run_phase(report, "share", [&] { phase_share(); });
    run_phase(report, "select", [&] { phase_select(); });
    run_phase(report, "attest", [&] { phase_attest(); });
    run_phase(report, "reveal", [&] { phase_reveal(); });
    run_phase(report, "generate", [&] { phase_generate(); });

    report.synthetic_schema = output_schema(schema_, workload_);
    require(result_payload_.has_value(), Errc::no_data,
            "no result released by the enclave agent");
    report.synthetic_records =
        decode_records(report.synthetic_schema, *result_payload_);
    report.audit = generator_output_->audit;
    report.trace = generator_output_->trace;
    report.final_tv = generator_output_->final_tv;
    report.selection_index = selection_index_;
    report.enclave_agent = enclave_id_;
    report.players = players_;
    report.excluded_providers = match_.excluded;
    for (const auto& [id, agent] : enc_) {
      for (const PodSkipReport& s : agent->skipped()) {
        report.skipped_pods.push_back(s);
      }
    }
    report.input_records = input_records_;
    return report;
  }

  // Individual phases, exposed so tests can stop at any protocol point.
  void phase_match() {
    match_ = match_agents(pods_, roster_, cfg_.n_computation_agents);
    require(!match_.included.empty(), Errc::no_data,
            "no provider passed agent matching");
    players_ = match_.computation_set;
    for (std::uint16_t id : players_) {
      comp_.at(id)->configure(players_, cfg_.threshold, workload_.marginals);
    }
  }

  void phase_share() {
    for (std::size_t p : match_.included) {
      std::uint16_t enc_id = match_.assignment.at(p);
      enc_.at(enc_id)->share_pod(pods_[p], p, schema_, workload_.marginals,
                                 cfg_.threshold, players_, net_);
    }
    net_.flush();
  }

  void phase_select() {
    std::uint32_t n_choices =
        static_cast<std::uint32_t>(players_.size());
    for (std::uint16_t id : players_) {
      comp_.at(id)->send_selection_contribution(n_choices, net_);
    }
    net_.advance_round();
    for (std::uint16_t id : players_) {
      comp_.at(id)->send_selection_open(net_);
    }
    net_.advance_round();
    selection_index_ = comp_.at(players_[0])->selection_result(n_choices);
    for (std::uint16_t id : players_) {
      require(comp_.at(id)->selection_result(n_choices) == selection_index_,
              Errc::consistency_violation,
              "players disagree on the selection");
    }
    enclave_id_ = players_[selection_index_];
  }

  void phase_attest() {
    if (!cfg_.require_attestation) return;
    for (const auto& [id, agent] : active_encryption_agents()) {
      agent->begin_attestation(enclave_id_, net_);
    }
    net_.flush();
    for (const auto& [id, agent] : active_encryption_agents()) {
      require(agent->attestation_done() && agent->attestation_ok(),
              Errc::attestation_failed,
              "verifier " + std::to_string(id) +
                  " rejected the enclave measurement");
    }
  }

  void phase_reveal() {
    for (std::uint16_t id : players_) {
      RevealCmdMsg cmd{enclave_id_};
      Frame f;
      f.type = MsgType::reveal;
      f.sender = kOrchestratorId;
      f.payload = encode_reveal_cmd(cmd);
      net_.send(kOrchestratorId, id, f);
    }
    net_.advance_round();
    aggregates_ = comp_.at(enclave_id_)->reconstruct_aggregates();
    input_records_ = aggregates_.front().total();
    require(input_records_ > 0, Errc::no_data, "aggregate is empty");
  }

  void phase_generate() {
    generator_output_ = run_generator(generator_spec(cfg_), schema_,
                                      workload_, aggregates_, cfg_.seed);
    comp_.at(enclave_id_)->send_result(kOrchestratorId,
                                       generator_output_->schema,
                                       generator_output_->records, net_);
    net_.flush();
  }

  const MatchResult& match() const { return match_; }
  const Workload& workload() const { return workload_; }
  const std::vector<std::uint16_t>& players() const { return players_; }
  std::uint32_t selection_index() const { return selection_index_; }
  std::uint16_t enclave_id() const { return enclave_id_; }
  const std::vector<Histogram>& enclave_aggregates() const {
    return aggregates_;
  }
  ComputationAgent& computation_agent(std::uint16_t id) {
    return *comp_.at(id);
  }
  EncryptionAgent& encryption_agent(std::uint16_t id) { return *enc_.at(id); }
  Network& network() { return net_; }
  const std::string& manifest() const { return manifest_; }

#ifdef PODSYN_TEST_HOOKS
  // Reconstructs the aggregate from the players' share vectors in-process,
  // bypassing selection/attestation/reveal. Test use only.
  std::vector<Histogram> plaintext_aggregates_for_test() const {
    std::vector<Histogram> out;
    for (std::size_t m = 0; m < workload_.marginals.size(); ++m) {
      Histogram h;
      h.marginal = workload_.marginals[m];
      for (std::size_t c = 0; c < workload_.marginals[m].cell_count; ++c) {
        std::vector<Share> shares;
        for (std::uint16_t id : players_) {
          shares.push_back(
              comp_.at(id)->aggregate_share_vectors().at(m).at(c));
        }
        h.counts.push_back(decode_count(field_, reconstruct(field_, shares)));
      }
      out.push_back(std::move(h));
    }
    return out;
  }

  void force_selection_contribution(std::size_t player_index,
                                    std::uint64_t value) {
    comp_.at(players_.at(player_index))->force_selection_contribution(value);
  }

  void tamper_enclave_manifest_everywhere() {
    for (auto& [id, agent] : comp_) agent->tamper_manifest();
  }
#endif

 private:
  template <typename Fn>
  void run_phase(RunReport& report, const std::string& name, Fn&& fn) {
    net_.reset_phase(name);
    fn();
    report.phases.push_back(net_.snapshot());
  }

  std::map<std::uint16_t, EncryptionAgent*> active_encryption_agents() {
    // Verifiers are the encryption agents that actually handled data.
    std::map<std::uint16_t, EncryptionAgent*> out;
    for (const auto& [provider, enc_id] : match_.assignment) {
      out[enc_id] = enc_.at(enc_id).get();
    }
    return out;
  }

  ProtocolConfig cfg_;
  Schema schema_;
  std::vector<Pod> pods_;
  Roster roster_;
  Field field_;
  Network& net_;
  Workload workload_;
  std::string manifest_;
  Digest256 expected_measurement_{};
  std::map<std::uint16_t, std::unique_ptr<ComputationAgent>> comp_;
  std::map<std::uint16_t, std::unique_ptr<EncryptionAgent>> enc_;
  MatchResult match_;
  std::vector<std::uint16_t> players_;
  std::uint32_t selection_index_ = 0;
  std::uint16_t enclave_id_ = 0;
  std::vector<Histogram> aggregates_;
  std::uint64_t input_records_ = 0;
  std::optional<GeneratorOutput> generator_output_;
  std::optional<std::vector<std::uint8_t>> result_payload_;
};

// Convenience wrapper for one deterministic-transport run.
inline RunReport run_pipeline(const ProtocolConfig& cfg, const Schema& schema,
                              std::vector<Pod> pods, const Roster& roster) {
  DeterministicNetwork net(cfg.seed);
  Simulation sim(cfg, schema, std::move(pods), roster, net);
  return sim.run();
}

}  // namespace podsyn
