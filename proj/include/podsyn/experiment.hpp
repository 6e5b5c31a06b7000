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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "podsyn/dataset.hpp"
#include "podsyn/error.hpp"
#include "podsyn/net_socket.hpp"
#include "podsyn/pipeline.hpp"

namespace podsyn {

enum class DatasetKind { uniform, skewed, csv };
enum class TransportKind { deterministic, socket };

// Everything a batch run needs; parsed from key-value text plus command-line
// overrides of the same keys.
struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::uniform;
  std::string csv_path;
  std::string schema_path;
  bool fixed_total = true;
  std::uint64_t total_records = 10000;
  std::uint64_t records_per_provider = 100;
  std::vector<std::uint32_t> providers = {100};
  std::vector<std::uint32_t> iterations = {30};
  std::uint32_t bins = 10;
  double uniform_lo = 0.0;
  double uniform_hi = 20.0;
  double skew = 0.5;
  double epsilon = 2.0;
  GeneratorKind generator = GeneratorKind::mwem;
  std::optional<WorkloadKind> workload;  // default: one_way iff 1 attribute
  std::uint32_t computation_agents = 3;
  std::uint32_t encryption_agents = 2;
  std::optional<std::uint32_t> threshold;  // default floor((n-1)/2)
  std::uint64_t seed = 1;
  std::uint32_t repetitions = 1;
  std::string output_dir = "out";
  TransportKind transport = TransportKind::deterministic;
  bool attestation = true;
  std::uint32_t fit_iterations = 30;
  std::uint64_t synthetic_records = 0;
  bool average_iterates = false;

  void validate() const {
    require(!providers.empty(), Errc::config_invalid, "empty providers sweep");
    require(!iterations.empty(), Errc::config_invalid,
            "empty iterations sweep");
    require(epsilon > 0.0, Errc::config_invalid, "epsilon must be > 0");
    for (std::uint32_t t : iterations) {
      require(t >= 1, Errc::config_invalid, "iterations must be >= 1");
    }
    require(repetitions >= 1, Errc::config_invalid, "repetitions must be >= 1");
    require(bins >= 1, Errc::config_invalid, "bins must be >= 1");
    if (dataset == DatasetKind::csv) {
      require(!csv_path.empty() && !schema_path.empty(), Errc::config_invalid,
              "csv dataset needs csv_path and schema_path");
      require(fixed_total, Errc::config_invalid,
              "csv dataset supports only the fixed_total partition");
    }
    if (dataset == DatasetKind::uniform) {
      require(uniform_lo < uniform_hi, Errc::config_invalid,
              "uniform range requires lo < hi");
    }
    require(skew > 0.0, Errc::config_invalid, "skew must be positive");
  }
};

namespace detail {

inline bool parse_bool(const std::string& v, bool& out) {
  std::string s = to_lower(v);
  if (s == "1" || s == "true" || s == "on" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "0" || s == "false" || s == "off" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

inline std::vector<std::uint32_t> parse_u32_list(const std::string& v) {
  std::vector<std::uint32_t> out;
  for (const std::string& piece : split(v, ',')) {
    std::uint64_t x = 0;
    require(parse_u64(trim(piece), x), Errc::config_invalid,
            "bad integer list entry: \"" + piece + "\"");
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

}  // namespace detail

// Applies one key=value pair; shared by the config file parser and CLI
// overrides so both accept exactly the same keys.
inline void set_config_key(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
  auto bad = [&](const std::string& what) {
    fail(Errc::config_invalid, key + ": " + what + " (got \"" + value + "\")");
  };
  std::uint64_t u = 0;
  double d = 0;
  bool b = false;
  if (key == "dataset") {
    std::string v = to_lower(value);
    if (v == "uniform") cfg.dataset = DatasetKind::uniform;
    else if (v == "skewed") cfg.dataset = DatasetKind::skewed;
    else if (v == "csv") cfg.dataset = DatasetKind::csv;
    else bad("expected uniform|skewed|csv");
  } else if (key == "csv_path") {
    cfg.csv_path = value;
  } else if (key == "schema_path") {
    cfg.schema_path = value;
  } else if (key == "partition") {
    std::string v = to_lower(value);
    if (v == "fixed_total") cfg.fixed_total = true;
    else if (v == "variable_total") cfg.fixed_total = false;
    else bad("expected fixed_total|variable_total");
  } else if (key == "total_records") {
    if (!parse_u64(value, cfg.total_records)) bad("expected integer");
  } else if (key == "records_per_provider") {
    if (!parse_u64(value, cfg.records_per_provider)) bad("expected integer");
  } else if (key == "providers") {
    cfg.providers = detail::parse_u32_list(value);
  } else if (key == "iterations") {
    cfg.iterations = detail::parse_u32_list(value);
  } else if (key == "bins") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.bins = static_cast<std::uint32_t>(u);
  } else if (key == "uniform_lo") {
    if (!parse_double(value, cfg.uniform_lo)) bad("expected number");
  } else if (key == "uniform_hi") {
    if (!parse_double(value, cfg.uniform_hi)) bad("expected number");
  } else if (key == "skew") {
    if (!parse_double(value, cfg.skew)) bad("expected number");
  } else if (key == "epsilon") {
    if (!parse_double(value, d)) bad("expected number");
    cfg.epsilon = d;
  } else if (key == "generator") {
    std::string v = to_lower(value);
    if (v == "mwem") cfg.generator = GeneratorKind::mwem;
    else if (v == "measure_generate")
      cfg.generator = GeneratorKind::measure_generate;
    else bad("expected mwem|measure_generate");
  } else if (key == "workload") {
    std::string v = to_lower(value);
    if (v == "one_way") cfg.workload = WorkloadKind::one_way;
    else if (v == "two_way") cfg.workload = WorkloadKind::two_way;
    else bad("expected one_way|two_way");
  } else if (key == "computation_agents") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.computation_agents = static_cast<std::uint32_t>(u);
  } else if (key == "encryption_agents") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.encryption_agents = static_cast<std::uint32_t>(u);
  } else if (key == "threshold") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.threshold = static_cast<std::uint32_t>(u);
  } else if (key == "seed") {
    if (!parse_u64(value, cfg.seed)) bad("expected integer");
  } else if (key == "repetitions") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.repetitions = static_cast<std::uint32_t>(u);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "transport") {
    std::string v = to_lower(value);
    if (v == "deterministic") cfg.transport = TransportKind::deterministic;
    else if (v == "socket") cfg.transport = TransportKind::socket;
    else bad("expected deterministic|socket");
  } else if (key == "attestation") {
    if (!detail::parse_bool(value, b)) bad("expected on|off");
    cfg.attestation = b;
  } else if (key == "fit_iterations") {
    if (!parse_u64(value, u)) bad("expected integer");
    cfg.fit_iterations = static_cast<std::uint32_t>(u);
  } else if (key == "synthetic_records") {
    if (!parse_u64(value, cfg.synthetic_records)) bad("expected integer");
  } else if (key == "average_iterates") {
    if (!detail::parse_bool(value, b)) bad("expected on|off");
    cfg.average_iterates = b;
  } else {
    fail(Errc::config_invalid, "unknown config key: \"" + key + "\"");
  }
}

inline ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, Errc::config_invalid,
            "config line " + std::to_string(lineno) + ": expected '='");
    set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::file_not_found, "cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

inline std::string u32_list_to_string(const std::vector<std::uint32_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// Canonical resolved-config text; its digest rides in each metrics record.
inline std::string canonical_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "attestation = " << (c.attestation ? "on" : "off") << '\n';
  out << "average_iterates = " << (c.average_iterates ? "on" : "off") << '\n';
  out << "bins = " << c.bins << '\n';
  out << "computation_agents = " << c.computation_agents << '\n';
  out << "csv_path = " << c.csv_path << '\n';
  out << "dataset = "
      << (c.dataset == DatasetKind::uniform
              ? "uniform"
              : c.dataset == DatasetKind::skewed ? "skewed" : "csv")
      << '\n';
  out << "encryption_agents = " << c.encryption_agents << '\n';
  out << "epsilon = " << format_double(c.epsilon) << '\n';
  out << "fit_iterations = " << c.fit_iterations << '\n';
  out << "generator = " << generator_name(c.generator) << '\n';
  out << "iterations = " << u32_list_to_string(c.iterations) << '\n';
  out << "partition = " << (c.fixed_total ? "fixed_total" : "variable_total")
      << '\n';
  out << "providers = " << u32_list_to_string(c.providers) << '\n';
  out << "records_per_provider = " << c.records_per_provider << '\n';
  out << "repetitions = " << c.repetitions << '\n';
  out << "schema_path = " << c.schema_path << '\n';
  out << "seed = " << c.seed << '\n';
  out << "skew = " << format_double(c.skew) << '\n';
  out << "synthetic_records = " << c.synthetic_records << '\n';
  out << "threshold = "
      << (c.threshold ? std::to_string(*c.threshold) : std::string("auto"))
      << '\n';
  out << "total_records = " << c.total_records << '\n';
  out << "transport = "
      << (c.transport == TransportKind::deterministic ? "deterministic"
                                                      : "socket")
      << '\n';
  out << "uniform_hi = " << format_double(c.uniform_hi) << '\n';
  out << "uniform_lo = " << format_double(c.uniform_lo) << '\n';
  out << "workload = "
      << (c.workload ? workload_name(*c.workload) : std::string("auto"))
      << '\n';
  return out.str();
}

inline std::string config_digest(const ExperimentConfig& c) {
  return hex_digest(sha256(canonical_config_text(c))).substr(0, 12);
}

struct ExperimentResult {
  std::vector<std::string> run_ids;
  std::string metrics_path;
};

namespace detail {

inline std::vector<Pod> make_pods(std::vector<std::vector<Record>> per_provider,
                                  const Roster& roster) {
  std::vector<Pod> pods;
  pods.reserve(per_provider.size());
  for (std::size_t p = 0; p < per_provider.size(); ++p) {
    Pod pod;
    pod.owner = static_cast<std::uint32_t>(p);
    pod.records = std::move(per_provider[p]);
    for (std::uint16_t id : roster.encryption_agents) {
      pod.preference.trusted_encryption_agents.insert(id);
      pod.grants.insert(id);
    }
    for (std::uint16_t id : roster.computation_agents) {
      pod.preference.trusted_computation_agents.insert(id);
    }
    pods.push_back(std::move(pod));
  }
  return pods;
}

inline std::vector<std::vector<Record>> build_point_data(
    const ExperimentConfig& cfg, std::uint32_t n_providers,
    const std::vector<Record>& csv_records) {
  if (cfg.dataset == DatasetKind::csv) {
    return partition_fixed_total(csv_records, n_providers);
  }
  Rng rng(derive_seed(cfg.seed, "data", n_providers));
  if (cfg.fixed_total) {
    std::vector<Record> all =
        cfg.dataset == DatasetKind::uniform
            ? simulate_uniform(cfg.total_records, cfg.uniform_lo,
                               cfg.uniform_hi, rng)
            : simulate_skewed(cfg.total_records, cfg.bins, cfg.skew, rng);
    return partition_fixed_total(all, n_providers);
  }
  std::vector<std::size_t> counts =
      partition_variable_total(n_providers, cfg.records_per_provider);
  std::vector<std::vector<Record>> out;
  out.reserve(counts.size());
  for (std::size_t c : counts) {
    out.push_back(cfg.dataset == DatasetKind::uniform
                      ? simulate_uniform(c, cfg.uniform_lo, cfg.uniform_hi,
                                         rng)
                      : simulate_skewed(c, cfg.bins, cfg.skew, rng));
  }
  return out;
}

}  // namespace detail

inline ProtocolConfig protocol_config_for(const ExperimentConfig& cfg,
                                          const Schema& schema,
                                          std::uint32_t T,
                                          std::uint64_t run_seed) {
  ProtocolConfig pc;
  pc.n_computation_agents = cfg.computation_agents;
  pc.n_encryption_agents = cfg.encryption_agents;
  pc.threshold = cfg.threshold ? *cfg.threshold
                               : (cfg.computation_agents - 1) / 2;
  pc.epsilon = cfg.epsilon;
  pc.iterations = T;
  pc.generator = cfg.generator;
  pc.workload = cfg.workload
                    ? *cfg.workload
                    : (schema.non_pii_indices().size() == 1
                           ? WorkloadKind::one_way
                           : WorkloadKind::two_way);
  pc.fit_iterations = cfg.fit_iterations;
  pc.average_iterates = cfg.average_iterates;
  pc.synthetic_records = cfg.synthetic_records;
  pc.seed = run_seed;
  pc.require_attestation = cfg.attestation;
  return pc;
}

inline Schema experiment_schema(const ExperimentConfig& cfg) {
  switch (cfg.dataset) {
    case DatasetKind::uniform:
      return single_numeric_schema("value", cfg.uniform_lo, cfg.uniform_hi,
                                   cfg.bins);
    case DatasetKind::skewed:
      return single_numeric_schema("value", 0.0,
                                   static_cast<double>(cfg.bins), cfg.bins);
    case DatasetKind::csv:
      return load_schema_file(cfg.schema_path);
  }
  fail(Errc::config_invalid, "unreachable dataset kind");
}

// Runs the full sweep and appends plot-ready JSON-lines metrics, one record
// per phase per run, plus per-run trace/audit/synthetic-data files.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Schema schema = experiment_schema(cfg);
  std::vector<Record> csv_records;
  if (cfg.dataset == DatasetKind::csv) {
    csv_records = load_dataset_file(cfg.csv_path, schema);
    require(!csv_records.empty(), Errc::no_data,
            "dataset has no complete rows");
  }

  std::filesystem::create_directories(cfg.output_dir);
  ExperimentResult result;
  result.metrics_path =
      (std::filesystem::path(cfg.output_dir) / "metrics.jsonl").string();
  std::ofstream metrics(result.metrics_path, std::ios::app);
  require(metrics.good(), Errc::file_not_found,
          "cannot open " + result.metrics_path);
  const std::string digest = config_digest(cfg);

  for (std::size_t pi = 0; pi < cfg.providers.size(); ++pi) {
    std::uint32_t n_providers = cfg.providers[pi];
    std::vector<std::vector<Record>> point_data =
        detail::build_point_data(cfg, n_providers, csv_records);
    for (std::size_t ti = 0; ti < cfg.iterations.size(); ++ti) {
      std::uint32_t T = cfg.iterations[ti];
      // Repetitions re-execute the same seeded run; they exist to measure
      // wall-time spread, so rounds and bytes must not vary across them.
      std::uint64_t key =
          (static_cast<std::uint64_t>(pi) << 20) | static_cast<std::uint64_t>(ti);
      std::uint64_t run_seed = derive_seed(cfg.seed, "run", key);
      for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
        ProtocolConfig pc = protocol_config_for(cfg, schema, T, run_seed);
        Roster roster =
            default_roster(pc.n_computation_agents, pc.n_encryption_agents);
        std::vector<Pod> pods = detail::make_pods(point_data, roster);

        RunReport report;
        if (cfg.transport == TransportKind::deterministic) {
          DeterministicNetwork net(run_seed);
          Simulation sim(pc, schema, std::move(pods), roster, net);
          report = sim.run();
        } else {
          SocketNetwork net;
          Simulation sim(pc, schema, std::move(pods), roster, net);
          report = sim.run();
          net.close_all();
        }

        std::string run_id = "p" + std::to_string(n_providers) + "-T" +
                             std::to_string(T) + "-r" + std::to_string(rep);
        result.run_ids.push_back(run_id);
        std::uint16_t player0 = report.players.at(0);
        for (const PhaseMetrics& pm : report.phases) {
          nlohmann::ordered_json j;
          j["run_id"] = run_id;
          j["phase"] = pm.phase;
          j["time_ms"] = pm.time_ms;
          j["rounds"] = pm.rounds;
          j["local_bytes_player0"] = pm.local_bytes(player0);
          j["global_bytes"] = pm.global_bytes;
          j["config_digest"] = digest;
          metrics << j.dump() << '\n';
        }

        std::filesystem::path dir(cfg.output_dir);
        {
          std::ofstream trace(dir / ("trace-" + run_id + ".jsonl"));
          for (const MwemTraceEntry& e : report.trace) {
            nlohmann::ordered_json j;
            j["iteration"] = e.iteration;
            j["query_id"] = e.query_id;
            j["noisy_value"] = e.noisy_value;
            j["tv_error"] = e.tv_error;
            trace << j.dump() << '\n';
          }
        }
        {
          std::ofstream audit(dir / ("audit-" + run_id + ".jsonl"));
          for (const SpendRecord& s : report.audit) {
            nlohmann::ordered_json j;
            j["step"] = s.step;
            j["mechanism"] = s.mechanism;
            j["epsilon"] = s.epsilon;
            j["timestamp"] = s.timestamp;
            audit << j.dump() << '\n';
          }
        }
        {
          std::ofstream synth(dir / ("synthetic-" + run_id + ".csv"));
          write_records_csv(synth, report.synthetic_schema,
                            report.synthetic_records);
        }
      }
    }
  }
  return result;
}

// ---- Summaries over metrics files ----

struct SummaryRow {
  std::string point;  // run_id minus the repetition suffix
  std::size_t runs = 0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t global_bytes = 0;
  std::uint64_t local_bytes_player0 = 0;
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<std::string> violations;
};

namespace detail {

struct RunAccum {
  double total_ms = 0.0;
  // phase -> (rounds, global_bytes, local_bytes_player0)
  std::map<std::string, std::array<std::uint64_t, 3>> phases;
};

}  // namespace detail

inline Summary summarize_metrics(const std::vector<std::string>& paths) {
  require(!paths.empty(), Errc::no_data, "no metrics files given");
  std::vector<std::string> run_order;
  std::map<std::string, detail::RunAccum> runs;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    require(in.good(), Errc::file_not_found, "cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      require(!j.is_discarded(), Errc::config_invalid,
              "unparseable metrics line in " + path);
      std::string run_id = j.at("run_id").get<std::string>();
      if (!runs.contains(run_id)) run_order.push_back(run_id);
      detail::RunAccum& acc = runs[run_id];
      acc.total_ms += j.at("time_ms").get<double>();
      acc.phases[j.at("phase").get<std::string>()] = {
          j.at("rounds").get<std::uint64_t>(),
          j.at("global_bytes").get<std::uint64_t>(),
          j.at("local_bytes_player0").get<std::uint64_t>()};
    }
  }
  require(!runs.empty(), Errc::no_data, "metrics files contain no records");

  // Group by sweep point: strip a trailing "-r<k>" repetition suffix.
  auto point_of = [](const std::string& run_id) {
    auto pos = run_id.rfind("-r");
    return pos == std::string::npos ? run_id : run_id.substr(0, pos);
  };
  std::vector<std::string> point_order;
  std::map<std::string, std::vector<std::string>> points;
  for (const std::string& id : run_order) {
    std::string p = point_of(id);
    if (!points.contains(p)) point_order.push_back(p);
    points[p].push_back(id);
  }

  Summary summary;
  for (const std::string& p : point_order) {
    const std::vector<std::string>& ids = points[p];
    const detail::RunAccum& first = runs[ids.front()];
    SummaryRow row;
    row.point = p;
    row.runs = ids.size();
    for (const auto& [phase, v] : first.phases) {
      row.rounds += v[0];
      row.global_bytes += v[1];
      row.local_bytes_player0 += v[2];
    }
    double sum = 0.0;
    for (const std::string& id : ids) sum += runs[id].total_ms;
    row.mean_ms = sum / static_cast<double>(ids.size());
    double var = 0.0;
    for (const std::string& id : ids) {
      double d = runs[id].total_ms - row.mean_ms;
      var += d * d;
    }
    row.stddev_ms =
        ids.size() > 1 ? std::sqrt(var / static_cast<double>(ids.size() - 1))
                       : 0.0;
    for (const std::string& id : ids) {
      if (runs[id].phases != first.phases) {
        summary.violations.push_back(
            "consistency-violation: rounds/bytes of " + id +
            " differ from " + ids.front());
      }
    }
    summary.rows.push_back(row);
  }
  return summary;
}

inline std::string format_summary(const Summary& summary) {
  std::ostringstream out;
  out << "point                runs  time_ms              rounds  "
         "global_bytes  local_bytes_player0\n";
  char buf[64];
  for (const SummaryRow& r : summary.rows) {
    std::snprintf(buf, sizeof(buf), "%.2f +/- %.2f", r.mean_ms, r.stddev_ms);
    out << r.point;
    for (std::size_t i = r.point.size(); i < 21; ++i) out << ' ';
    std::string runs = std::to_string(r.runs);
    out << runs;
    for (std::size_t i = runs.size(); i < 6; ++i) out << ' ';
    std::string t(buf);
    out << t;
    for (std::size_t i = t.size(); i < 21; ++i) out << ' ';
    std::string rounds = std::to_string(r.rounds);
    out << rounds;
    for (std::size_t i = rounds.size(); i < 8; ++i) out << ' ';
    std::string gb = std::to_string(r.global_bytes);
    out << gb;
    for (std::size_t i = gb.size(); i < 14; ++i) out << ' ';
    out << r.local_bytes_player0 << '\n';
  }
  for (const std::string& v : summary.violations) {
    out << v << '\n';
  }
  return out.str();
}

// ---- Schema templates from raw CSVs ----

inline std::string infer_schema_from_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::header_mismatch,
          "missing header row");
  std::vector<std::string> header = detail::split_csv_line(detail::strip_cr(line));
  struct Column {
    bool numeric = true;
    bool any = false;
    double lo = 0.0, hi = 0.0;
    std::vector<std::string> values;  // first-seen order
  };
  std::vector<Column> cols(header.size());
  while (std::getline(in, line)) {
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = detail::split_csv_line(line);
    for (std::size_t c = 0; c < cols.size() && c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      if (cell.empty()) continue;
      Column& col = cols[c];
      double v = 0;
      if (col.numeric && parse_double(trim(cell), v)) {
        if (!col.any) {
          col.lo = col.hi = v;
        } else {
          col.lo = std::min(col.lo, v);
          col.hi = std::max(col.hi, v);
        }
      } else {
        col.numeric = false;
      }
      if (std::find(col.values.begin(), col.values.end(), cell) ==
          col.values.end()) {
        col.values.push_back(cell);
      }
      col.any = true;
    }
  }

  std::ostringstream out;
  out << "# generated schema template: review kinds, bins, and pii flags\n";
  for (std::size_t c = 0; c < header.size(); ++c) {
    const Column& col = cols[c];
    std::string name = trim(header[c]);
    if (!col.any) {
      out << "# " << name << ": no values observed\n";
      continue;
    }
    if (col.numeric) {
      double hi = col.hi > col.lo ? col.hi : col.lo + 1.0;
      out << name << " = numeric:" << format_double(col.lo) << ':'
          << format_double(hi) << ":10\n";
    } else {
      out << name << " = categorical:";
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        if (i) out << '|';
        out << col.values[i];
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace podsyn
