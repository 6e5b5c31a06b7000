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

// Command-line front end: `run` executes an experiment sweep, `summarize`
// aggregates metrics files, `gen-schema` drafts a schema from a CSV header.
// Exit codes: 0 success, 1 configuration error, 2 pipeline abort.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "podsyn/podsyn.hpp"

namespace {

// Configuration mistakes (bad keys, unreadable files, malformed input) exit
// with 1; anything that aborts a running pipeline exits with 2.
int exit_code_for(const podsyn::Error& e) {
  switch (e.code()) {
    case podsyn::Errc::config_invalid:
    case podsyn::Errc::file_not_found:
    case podsyn::Errc::header_mismatch:
    case podsyn::Errc::unknown_category:
    case podsyn::Errc::unparseable_numeric:
    case podsyn::Errc::invalid_threshold:
      return 1;
    default:
      return 2;
  }
}

// Every ExperimentConfig key doubles as a long option so a config file is
// optional; later sources win (file, then flags in command-line order).
const std::vector<std::string> kConfigKeys = {
    "dataset",         "csv_path",       "schema_path",
    "partition",       "total_records",  "records_per_provider",
    "providers",       "iterations",     "bins",
    "uniform_lo",      "uniform_hi",     "skew",
    "epsilon",         "generator",      "workload",
    "computation_agents", "encryption_agents", "threshold",
    "seed",            "repetitions",    "output_dir",
    "transport",       "attestation",    "fit_iterations",
    "synthetic_records", "average_iterates"};

int run_command(const std::string& config_path,
                const std::vector<std::pair<std::string, std::string>>& sets,
                bool quiet) {
  podsyn::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = podsyn::load_experiment_config(config_path);
  }
  for (const auto& [key, value] : sets) {
    podsyn::set_config_key(cfg, key, value);
  }
  cfg.validate();
  podsyn::ExperimentResult result = podsyn::run_experiment(cfg);
  if (!quiet) {
    std::cout << "config digest " << podsyn::config_digest(cfg) << "\n";
    for (const std::string& id : result.run_ids) {
      std::cout << "run " << id << " done\n";
    }
    std::cout << "metrics appended to " << result.metrics_path << "\n";
  }
  return 0;
}

int summarize_command(const std::vector<std::string>& files) {
  podsyn::Summary summary = podsyn::summarize_metrics(files);
  std::cout << podsyn::format_summary(summary);
  return summary.violations.empty() ? 0 : 2;
}

int gen_schema_command(const std::string& csv_path, const std::string& out) {
  std::ifstream in(csv_path);
  podsyn::require(in.good(), podsyn::Errc::file_not_found,
                  "cannot open " + csv_path);
  std::string text = podsyn::infer_schema_from_csv(in);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out);
    podsyn::require(os.good(), podsyn::Errc::file_not_found,
                    "cannot open " + out);
    os << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decentralised differentially private synthetic data toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute an experiment sweep");
  std::string config_path;
  bool quiet = false;
  run->add_option("-c,--config", config_path, "key = value experiment config");
  run->add_flag("-q,--quiet", quiet, "suppress progress output");
  // Preserve command-line order across all override options.
  std::vector<std::pair<std::string, std::string>> sets;
  run->add_option_function<std::vector<std::string>>(
         "--set",
         [&sets](const std::vector<std::string>& kvs) {
           for (const std::string& kv : kvs) {
             auto eq = kv.find('=');
             podsyn::require(eq != std::string::npos,
                             podsyn::Errc::config_invalid,
                             "--set expects key=value, got \"" + kv + "\"");
             sets.emplace_back(podsyn::trim(kv.substr(0, eq)),
                               podsyn::trim(kv.substr(eq + 1)));
           }
         },
         "key=value override (repeatable)")
      ->take_all()
      ->trigger_on_parse();
  for (const std::string& key : kConfigKeys) {
    run->add_option_function<std::string>(
           "--" + key,
           [&sets, key](const std::string& value) {
             sets.emplace_back(key, value);
           },
           "override config key " + key)
        ->trigger_on_parse();
  }

  auto* summarize =
      app.add_subcommand("summarize", "mean/stddev table from metrics files");
  std::vector<std::string> metric_files;
  summarize->add_option("files", metric_files, "metrics.jsonl files")
      ->required();

  auto* gen =
      app.add_subcommand("gen-schema", "draft a schema template from a CSV");
  std::string csv_path, schema_out;
  gen->add_option("csv", csv_path, "input CSV file")->required();
  gen->add_option("-o,--output", schema_out, "write template here");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(config_path, sets, quiet);
    if (summarize->parsed()) return summarize_command(metric_files);
    return gen_schema_command(csv_path, schema_out);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // --help exits 0, parse failures exit 1
  } catch (const podsyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
