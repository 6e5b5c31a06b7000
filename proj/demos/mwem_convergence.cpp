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

// Runs the generator alone on a skewed 1-D dataset and prints the error
// trajectory, mirroring the error-vs-iterations experiment.

#include <cstdio>

#include "podsyn/dataset.hpp"
#include "podsyn/synth.hpp"

int main() {
  using namespace podsyn;
  const std::uint32_t bins = 10;
  const double eps = 2.0;
  const std::uint32_t T = 140;

  Schema schema = single_numeric_schema("value", 0.0, bins, bins);
  Rng data_rng(derive_seed(1, "data", bins));
  std::vector<Record> records = simulate_skewed(10000, bins, 0.5, data_rng);
  Workload workload =
      make_workload(schema, one_way_marginals(schema), kDefaultDomainLimit);
  Histogram truth = build_histogram(records, workload.marginals[0], schema);

  PrivacyBudget budget(eps);
  Rng rng(derive_seed(1, "generator"));
  MwemResult result = mwem(workload, truth, eps, T, rng, budget, {});

  std::printf("iter  query  noisy_measurement  tv_error\n");
  for (const MwemTraceEntry& e : result.trace) {
    if (e.iteration % 10 != 0 && e.iteration != 1) continue;
    std::printf("%4u  q%-4u  %12.1f  %10.4f\n", e.iteration, e.query_id,
                e.noisy_value, e.tv_error);
  }
  std::printf("spent %.6f of %.6f across %zu draws\n", budget.epsilon_spent(),
              budget.epsilon_total(), budget.audit_log().size());
  return 0;
}
