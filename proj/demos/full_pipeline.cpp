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

// End-to-end run: 100 providers share a uniform dataset, three computation
// agents aggregate, a randomly elected enclave attests and generates
// synthetic records. Prints the per-phase communication ledger.

#include <cstdio>

#include "podsyn/pipeline.hpp"

int main() {
  using namespace podsyn;
  ProtocolConfig cfg;
  cfg.epsilon = 2.0;
  cfg.iterations = 30;
  cfg.seed = 1;

  Schema schema = single_numeric_schema("value", 0.0, 20.0, 10);
  Rng data_rng(derive_seed(cfg.seed, "data", 100));
  std::vector<Record> all = simulate_uniform(10000, 0.0, 20.0, data_rng);
  std::vector<std::vector<Record>> chunks = partition_fixed_total(all, 100);

  Roster roster =
      default_roster(cfg.n_computation_agents, cfg.n_encryption_agents);
  std::vector<Pod> pods;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    Pod pod;
    pod.owner = static_cast<std::uint32_t>(i);
    pod.records = std::move(chunks[i]);
    for (std::uint16_t id : roster.encryption_agents) {
      pod.preference.trusted_encryption_agents.insert(id);
      pod.grants.insert(id);
    }
    for (std::uint16_t id : roster.computation_agents) {
      pod.preference.trusted_computation_agents.insert(id);
    }
    pods.push_back(std::move(pod));
  }

  RunReport report = run_pipeline(cfg, schema, std::move(pods), roster);

  std::printf("phase     rounds  global_bytes  local_bytes(player %u)\n",
              report.players.at(0));
  std::uint64_t rounds = 0, bytes = 0;
  for (const PhaseMetrics& pm : report.phases) {
    std::printf("%-8s  %6llu  %12llu  %10llu\n", pm.phase.c_str(),
                (unsigned long long)pm.rounds,
                (unsigned long long)pm.global_bytes,
                (unsigned long long)pm.local_bytes(report.players.at(0)));
    rounds += pm.rounds;
    bytes += pm.global_bytes;
  }
  std::printf("total     %6llu  %12llu\n", (unsigned long long)rounds,
              (unsigned long long)bytes);
  std::printf("enclave agent %u, input %llu records, %zu synthetic records, "
              "final tv %.4f\n",
              report.enclave_agent,
              (unsigned long long)report.input_records,
              report.synthetic_records.size(), report.final_tv);
  return 0;
}
