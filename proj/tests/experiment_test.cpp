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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "podsyn/experiment.hpp"

namespace fs = std::filesystem;

namespace podsyn {
namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "podsyn_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << path;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
Errc catch_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::consistency_violation;
}

TEST(ConfigParse, KeyValueTextWithCommentsAndOverrides) {
  ExperimentConfig cfg = parse_experiment_config(
      "# sweep definition\n"
      "dataset = skewed\n"
      "\n"
      "providers = 10,50,100   # grows the federation\n"
      "iterations=5,30\n"
      "epsilon = 1.5\n"
      "attestation = off\n"
      "transport = socket\n"
      "generator = measure_generate\n"
      "workload = two_way\n"
      "partition = variable_total\n"
      "threshold = 2\n");
  EXPECT_EQ(cfg.dataset, DatasetKind::skewed);
  EXPECT_EQ(cfg.providers, (std::vector<std::uint32_t>{10, 50, 100}));
  EXPECT_EQ(cfg.iterations, (std::vector<std::uint32_t>{5, 30}));
  EXPECT_DOUBLE_EQ(cfg.epsilon, 1.5);
  EXPECT_FALSE(cfg.attestation);
  EXPECT_EQ(cfg.transport, TransportKind::socket);
  EXPECT_EQ(cfg.generator, GeneratorKind::measure_generate);
  ASSERT_TRUE(cfg.workload.has_value());
  EXPECT_EQ(*cfg.workload, WorkloadKind::two_way);
  EXPECT_FALSE(cfg.fixed_total);
  ASSERT_TRUE(cfg.threshold.has_value());
  EXPECT_EQ(*cfg.threshold, 2u);

  // CLI overrides reuse the same setter, so they accept the same keys.
  set_config_key(cfg, "epsilon", "2.5");
  EXPECT_DOUBLE_EQ(cfg.epsilon, 2.5);
}

TEST(ConfigParse, RejectsUnknownAndMalformedInput) {
  ExperimentConfig cfg;
  EXPECT_EQ(catch_code([&] { set_config_key(cfg, "episode", "2"); }),
            Errc::config_invalid);
  EXPECT_EQ(catch_code([&] { set_config_key(cfg, "epsilon", "abc"); }),
            Errc::config_invalid);
  EXPECT_EQ(catch_code([&] { set_config_key(cfg, "dataset", "parquet"); }),
            Errc::config_invalid);
  EXPECT_EQ(catch_code([&] { set_config_key(cfg, "providers", "10,x"); }),
            Errc::config_invalid);
  EXPECT_EQ(catch_code([&] { set_config_key(cfg, "attestation", "maybe"); }),
            Errc::config_invalid);
  EXPECT_EQ(catch_code([&] { parse_experiment_config("just words\n"); }),
            Errc::config_invalid);
  EXPECT_EQ(
      catch_code([&] { load_experiment_config("/nonexistent/conf.txt"); }),
      Errc::file_not_found);
}

TEST(ConfigParse, ValidationCatchesBadCombinations) {
  ExperimentConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);

  cfg = ExperimentConfig{};
  cfg.providers.clear();
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);

  cfg = ExperimentConfig{};
  cfg.iterations = {0};
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);

  cfg = ExperimentConfig{};
  cfg.dataset = DatasetKind::csv;  // csv_path/schema_path missing
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);

  cfg = ExperimentConfig{};
  cfg.uniform_lo = 5.0;
  cfg.uniform_hi = 5.0;
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);

  cfg = ExperimentConfig{};
  cfg.repetitions = 0;
  EXPECT_EQ(catch_code([&] { cfg.validate(); }), Errc::config_invalid);
}

TEST(ConfigDigest, StableAndSensitive) {
  ExperimentConfig a;
  ExperimentConfig b;
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 12u);
  b.seed = 2;
  EXPECT_NE(config_digest(a), config_digest(b));

  // Canonical text is sorted by key so the digest cannot depend on the
  // order keys were assigned in.
  std::string text = canonical_config_text(a);
  std::vector<std::string> keys;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    keys.push_back(line.substr(0, line.find(' ')));
  }
  ASSERT_FALSE(keys.empty());
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(keys.front(), "attestation");
  EXPECT_EQ(keys.back(), "workload");
}

TEST(ProtocolConfigFor, DefaultsFollowSchemaShape) {
  ExperimentConfig cfg;
  Schema one = single_numeric_schema("v", 0.0, 10.0, 10);
  ProtocolConfig pc = protocol_config_for(cfg, one, 30, 7);
  EXPECT_EQ(pc.threshold, 1u);  // floor((3-1)/2)
  EXPECT_EQ(pc.workload, WorkloadKind::one_way);
  EXPECT_EQ(pc.seed, 7u);
  EXPECT_EQ(pc.iterations, 30u);

  Schema two = parse_schema(
      "a = numeric:0:1:2\n"
      "b = numeric:0:1:2\n");
  pc = protocol_config_for(cfg, two, 30, 7);
  EXPECT_EQ(pc.workload, WorkloadKind::two_way);

  cfg.threshold = 0;
  cfg.computation_agents = 2;
  pc = protocol_config_for(cfg, one, 30, 7);
  EXPECT_EQ(pc.threshold, 0u);
}

TEST(ExperimentSchema, BuiltinDatasets) {
  ExperimentConfig cfg;
  cfg.bins = 4;
  cfg.uniform_lo = -1.0;
  cfg.uniform_hi = 3.0;
  Schema s = experiment_schema(cfg);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.at(0).name, "value");
  EXPECT_EQ(s.at(0).bin_count, 4u);
  EXPECT_DOUBLE_EQ(s.at(0).lo, -1.0);
  EXPECT_DOUBLE_EQ(s.at(0).hi, 3.0);

  cfg.dataset = DatasetKind::skewed;
  s = experiment_schema(cfg);
  EXPECT_DOUBLE_EQ(s.at(0).lo, 0.0);
  EXPECT_DOUBLE_EQ(s.at(0).hi, 4.0);
}

ExperimentConfig sweep_config(const fs::path& dir) {
  ExperimentConfig cfg;
  cfg.dataset = DatasetKind::uniform;
  cfg.total_records = 60;
  cfg.providers = {3};
  cfg.iterations = {2};
  cfg.repetitions = 2;
  cfg.epsilon = 2.0;
  cfg.seed = 1;
  cfg.output_dir = dir.string();
  return cfg;
}

TEST(RunExperiment, WritesMetricsTraceAuditAndData) {
  fs::path dir = fresh_dir("sweep");
  ExperimentConfig cfg = sweep_config(dir);
  ExperimentResult result = run_experiment(cfg);

  EXPECT_EQ(result.run_ids,
            (std::vector<std::string>{"p3-T2-r0", "p3-T2-r1"}));

  // One metrics record per phase per run.
  std::vector<std::string> lines = read_lines(result.metrics_path);
  ASSERT_EQ(lines.size(), 12u);
  const std::string digest = config_digest(cfg);
  std::uint64_t rounds_r0 = 0;
  for (const std::string& line : lines) {
    nlohmann::json j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("config_digest").get<std::string>(), digest);
    EXPECT_EQ(j.at("time_ms").get<double>(), 0.0);  // deterministic transport
    if (j.at("run_id").get<std::string>() == "p3-T2-r0") {
      rounds_r0 += j.at("rounds").get<std::uint64_t>();
    }
  }
  EXPECT_EQ(rounds_r0, 3u);

  for (const std::string& id : result.run_ids) {
    EXPECT_EQ(read_lines(dir / ("trace-" + id + ".jsonl")).size(), 2u);

    double spent = 0.0;
    for (const std::string& line : read_lines(dir / ("audit-" + id +
                                                     ".jsonl"))) {
      nlohmann::json j = nlohmann::json::parse(line);
      spent += j.at("epsilon").get<double>();
      EXPECT_FALSE(j.at("mechanism").get<std::string>().empty());
    }
    EXPECT_EQ(spent, 2.0);

    std::vector<Record> synth = load_dataset_file(
        (dir / ("synthetic-" + id + ".csv")).string(), experiment_schema(cfg));
    EXPECT_EQ(synth.size(), 60u);
  }

  Summary summary = summarize_metrics({result.metrics_path});
  EXPECT_TRUE(summary.violations.empty());
  ASSERT_EQ(summary.rows.size(), 1u);
  EXPECT_EQ(summary.rows[0].point, "p3-T2");
  EXPECT_EQ(summary.rows[0].runs, 2u);
  EXPECT_EQ(summary.rows[0].rounds, 3u);
}

TEST(RunExperiment, MetricsAreByteIdenticalAcrossRuns) {
  fs::path a = fresh_dir("repro_a");
  fs::path b = fresh_dir("repro_b");
  ExperimentConfig ca = sweep_config(a);
  ExperimentConfig cb = sweep_config(b);
  ExperimentResult ra = run_experiment(ca);
  ExperimentResult rb = run_experiment(cb);

  std::string ma = read_file(ra.metrics_path);
  std::string mb = read_file(rb.metrics_path);
  // output_dir is not part of the canonical config text, so the digests and
  // therefore the whole files must match byte for byte.
  EXPECT_EQ(ma, mb);
  for (const std::string& id : ra.run_ids) {
    EXPECT_EQ(read_file(a / ("synthetic-" + id + ".csv")),
              read_file(b / ("synthetic-" + id + ".csv")));
    EXPECT_EQ(read_file(a / ("trace-" + id + ".jsonl")),
              read_file(b / ("trace-" + id + ".jsonl")));
  }
}

TEST(RunExperiment, RepetitionsShareRoundsAndBytes) {
  fs::path dir = fresh_dir("reps");
  ExperimentConfig cfg = sweep_config(dir);
  cfg.repetitions = 3;
  ExperimentResult result = run_experiment(cfg);
  Summary summary = summarize_metrics({result.metrics_path});
  EXPECT_TRUE(summary.violations.empty()) << format_summary(summary);
  EXPECT_EQ(summary.rows.at(0).runs, 3u);
}

void write_metrics_line(std::ostream& out, const std::string& run_id,
                        const std::string& phase, double time_ms,
                        std::uint64_t rounds, std::uint64_t local_bytes,
                        std::uint64_t global_bytes) {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["phase"] = phase;
  j["time_ms"] = time_ms;
  j["rounds"] = rounds;
  j["local_bytes_player0"] = local_bytes;
  j["global_bytes"] = global_bytes;
  j["config_digest"] = "abcdef012345";
  out << j.dump() << '\n';
}

TEST(Summarize, MeanAndSampleStddevOracle) {
  // Hand-checked: mean(70,72,74,76,78) = 74,
  // sample stddev = sqrt((16+4+0+4+16)/4) = sqrt(10) = 3.1623.
  fs::path dir = fresh_dir("summary");
  fs::path path = dir / "metrics.jsonl";
  {
    std::ofstream out(path);
    double totals[] = {70, 72, 74, 76, 78};
    for (int rep = 0; rep < 5; ++rep) {
      std::string id = "p10-T30-r" + std::to_string(rep);
      write_metrics_line(out, id, "share", 50.0, 0, 120, 480);
      write_metrics_line(out, id, "select", totals[rep] - 50.0, 2, 40, 96);
    }
  }
  Summary summary = summarize_metrics({path.string()});
  ASSERT_EQ(summary.rows.size(), 1u);
  const SummaryRow& row = summary.rows[0];
  EXPECT_EQ(row.point, "p10-T30");
  EXPECT_EQ(row.runs, 5u);
  EXPECT_DOUBLE_EQ(row.mean_ms, 74.0);
  EXPECT_NEAR(row.stddev_ms, 3.1622776601683795, 1e-12);
  EXPECT_EQ(row.rounds, 2u);
  EXPECT_EQ(row.global_bytes, 576u);
  EXPECT_EQ(row.local_bytes_player0, 160u);
  EXPECT_TRUE(summary.violations.empty());

  std::string table = format_summary(summary);
  EXPECT_NE(table.find("74.00 +/- 3.16"), std::string::npos);
  EXPECT_NE(table.find("p10-T30"), std::string::npos);
}

TEST(Summarize, FlagsRoundsOrByteDriftAcrossRepetitions) {
  fs::path dir = fresh_dir("violation");
  fs::path path = dir / "metrics.jsonl";
  {
    std::ofstream out(path);
    write_metrics_line(out, "p5-T10-r0", "select", 1.0, 2, 40, 96);
    write_metrics_line(out, "p5-T10-r1", "select", 1.0, 2, 40, 97);
  }
  Summary summary = summarize_metrics({path.string()});
  ASSERT_EQ(summary.violations.size(), 1u);
  EXPECT_NE(summary.violations[0].find("consistency-violation"),
            std::string::npos);
  EXPECT_NE(summary.violations[0].find("p5-T10-r1"), std::string::npos);
  EXPECT_NE(format_summary(summary).find("consistency-violation"),
            std::string::npos);
}

TEST(Summarize, ErrorPaths) {
  EXPECT_EQ(catch_code([&] { summarize_metrics({}); }), Errc::no_data);
  EXPECT_EQ(catch_code([&] { summarize_metrics({"/nonexistent.jsonl"}); }),
            Errc::file_not_found);
  fs::path dir = fresh_dir("empty_metrics");
  fs::path path = dir / "metrics.jsonl";
  std::ofstream(path) << "\n";
  EXPECT_EQ(catch_code([&] { summarize_metrics({path.string()}); }),
            Errc::no_data);
}

TEST(InferSchema, BuildsReviewableTemplate) {
  std::istringstream csv(
      "age,city,flag,ghost\n"
      "34,ams,1,\n"
      "28.5,ber,1,\n"
      ",rome,1,\n"
      "51,ams,1,\n");
  std::string tpl = infer_schema_from_csv(csv);
  EXPECT_NE(tpl.find("# generated schema template"), std::string::npos);
  EXPECT_NE(tpl.find("age = numeric:28.5:51:10"), std::string::npos);
  EXPECT_NE(tpl.find("city = categorical:ams|ber|rome"), std::string::npos);
  // Constant numeric column widens to a one-unit range.
  EXPECT_NE(tpl.find("flag = numeric:1:2:10"), std::string::npos);
  EXPECT_NE(tpl.find("# ghost: no values observed"), std::string::npos);

  // The template must parse as a schema once commented lines are dropped.
  std::string cleaned;
  std::istringstream in(tpl);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') cleaned += line + "\n";
  }
  Schema s = parse_schema(cleaned);
  EXPECT_EQ(s.size(), 3u);
}

TEST(InferSchema, MixedColumnFallsBackToCategorical) {
  std::istringstream csv(
      "v\n"
      "12\n"
      "low\n"
      "13\n");
  std::string tpl = infer_schema_from_csv(csv);
  EXPECT_NE(tpl.find("v = categorical:12|low|13"), std::string::npos);
}

}  // namespace
}  // namespace podsyn
