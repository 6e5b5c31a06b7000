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

// Exercises the installed binary end to end: exit code 0 on success, 1 on
// configuration mistakes, 2 on aborted pipelines or inconsistent metrics.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "podsyn_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  ASSERT_TRUE(out.good()) << path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = std::string(PODSYN_CLI_PATH) + " " + args;
  if (capture.empty()) {
    cmd += " > /dev/null 2>&1";
  } else {
    cmd += " > \"" + capture.string() + "\" 2>&1";
  }
  int status = std::system(cmd.c_str());
  EXPECT_NE(status, -1);
  return WEXITSTATUS(status);
}

std::string tiny_config(const fs::path& out_dir) {
  return
      "dataset = uniform\n"
      "total_records = 40\n"
      "providers = 2\n"
      "iterations = 2\n"
      "repetitions = 1\n"
      "seed = 3\n"
      "output_dir = " + out_dir.string() + "\n";
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("run --help"), 0);
}

TEST(Cli, MissingSubcommandExitsOne) {
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST(Cli, RunsSweepFromConfigFile) {
  fs::path dir = fresh_dir("run_ok");
  fs::path cfg = dir / "exp.conf";
  write_file(cfg, tiny_config(dir / "out"));
  fs::path log = dir / "stdout.txt";
  EXPECT_EQ(run_cli("run -c \"" + cfg.string() + "\"", log), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "metrics.jsonl"));
  std::string out = read_file(log);
  EXPECT_NE(out.find("run p2-T2-r0 done"), std::string::npos);
  EXPECT_NE(out.find("config digest"), std::string::npos);
}

TEST(Cli, QuietSuppressesProgress) {
  fs::path dir = fresh_dir("run_quiet");
  fs::path cfg = dir / "exp.conf";
  write_file(cfg, tiny_config(dir / "out"));
  fs::path log = dir / "stdout.txt";
  EXPECT_EQ(run_cli("run -q -c \"" + cfg.string() + "\"", log), 0);
  EXPECT_TRUE(read_file(log).empty());
}

TEST(Cli, FlagOverridesWinOverConfigFile) {
  fs::path dir = fresh_dir("run_override");
  fs::path cfg = dir / "exp.conf";
  write_file(cfg, tiny_config(dir / "ignored"));
  fs::path out = dir / "flag_out";
  EXPECT_EQ(run_cli("run -c \"" + cfg.string() + "\" --output_dir \"" +
                    out.string() + "\" --set iterations=1 --providers 3"),
            0);
  EXPECT_TRUE(fs::exists(out / "metrics.jsonl"));
  EXPECT_TRUE(fs::exists(out / "synthetic-p3-T1-r0.csv"));
  EXPECT_FALSE(fs::exists(dir / "ignored" / "metrics.jsonl"));
}

TEST(Cli, ConfigMistakesExitOne) {
  fs::path dir = fresh_dir("run_bad");
  fs::path bad_key = dir / "bad_key.conf";
  write_file(bad_key, "bogus = 1\n");
  EXPECT_EQ(run_cli("run -c \"" + bad_key.string() + "\""), 1);
  EXPECT_EQ(run_cli("run -c /nonexistent/exp.conf"), 1);
  EXPECT_EQ(run_cli("run --epsilon abc"), 1);
  EXPECT_EQ(run_cli("run --set epsilon"), 1);  // missing '='
  fs::path out = dir / "out";
  EXPECT_EQ(run_cli("run --threshold 5 --output_dir \"" + out.string() + "\""),
            1);  // threshold >= player count
}

TEST(Cli, PipelineAbortExitsTwo) {
  fs::path dir = fresh_dir("run_abort");
  // Zero records shares cleanly but reveals an empty aggregate.
  EXPECT_EQ(run_cli("run --total_records 0 --providers 2 --output_dir \"" +
                    (dir / "out").string() + "\""),
            2);
}

TEST(Cli, SummarizeTableAndViolations) {
  fs::path dir = fresh_dir("summarize");
  fs::path cfg = dir / "exp.conf";
  write_file(cfg, tiny_config(dir / "out"));
  ASSERT_EQ(run_cli("run -q -c \"" + cfg.string() + "\""), 0);
  fs::path metrics = dir / "out" / "metrics.jsonl";
  fs::path log = dir / "stdout.txt";
  EXPECT_EQ(run_cli("summarize \"" + metrics.string() + "\"", log), 0);
  std::string out = read_file(log);
  EXPECT_NE(out.find("point"), std::string::npos);
  EXPECT_NE(out.find("p2-T2"), std::string::npos);

  EXPECT_EQ(run_cli("summarize /nonexistent.jsonl"), 1);
  EXPECT_EQ(run_cli("summarize"), 1);  // files argument is required

  fs::path doctored = dir / "doctored.jsonl";
  write_file(
      doctored,
      "{\"run_id\":\"p1-T1-r0\",\"phase\":\"select\",\"time_ms\":1.0,"
      "\"rounds\":2,\"local_bytes_player0\":4,\"global_bytes\":9}\n"
      "{\"run_id\":\"p1-T1-r1\",\"phase\":\"select\",\"time_ms\":1.0,"
      "\"rounds\":3,\"local_bytes_player0\":4,\"global_bytes\":9}\n");
  EXPECT_EQ(run_cli("summarize \"" + doctored.string() + "\"", log), 2);
  EXPECT_NE(read_file(log).find("consistency-violation"), std::string::npos);
}

TEST(Cli, GenSchemaDraftsTemplate) {
  fs::path dir = fresh_dir("gen_schema");
  fs::path csv = dir / "people.csv";
  write_file(csv,
             "age,city\n"
             "34,ams\n"
             "51,ber\n");
  fs::path log = dir / "stdout.txt";
  EXPECT_EQ(run_cli("gen-schema \"" + csv.string() + "\"", log), 0);
  EXPECT_NE(read_file(log).find("age = numeric:34:51:10"), std::string::npos);

  fs::path out = dir / "people.schema";
  EXPECT_EQ(run_cli("gen-schema \"" + csv.string() + "\" -o \"" +
                    out.string() + "\""),
            0);
  EXPECT_NE(read_file(out).find("city = categorical:ams|ber"),
            std::string::npos);

  EXPECT_EQ(run_cli("gen-schema /nonexistent.csv"), 1);
}

}  // namespace
