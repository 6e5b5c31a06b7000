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
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/rng.hpp"
#include "podsyn/schema.hpp"
#include "podsyn/text.hpp"

namespace podsyn {

namespace detail {

// RFC-4180-ish field splitting: quoted fields may contain commas and
// doubled quotes. Trailing \r is stripped before the call.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

struct LoadStats {
  std::size_t rows_seen = 0;
  std::size_t rows_dropped_missing = 0;
};

// Reads a CSV with a header row into schema-shaped records. Rows with an
// empty cell in any schema column are dropped. Columns not named in the
// schema are ignored. Cell text is validated (categorical) or parsed
// (numeric) eagerly so downstream code never sees malformed values.
inline std::vector<Record> load_dataset(std::istream& in, const Schema& schema,
                                        LoadStats* stats = nullptr) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::header_mismatch,
          "missing header row");
  std::vector<std::string> header = detail::split_csv_line(detail::strip_cr(line));

  std::vector<std::size_t> column_of(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    bool found = false;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (trim(header[c]) == schema.at(a).name) {
        column_of[a] = c;
        found = true;
        break;
      }
    }
    require(found, Errc::header_mismatch,
            "header lacks attribute \"" + schema.at(a).name + "\"");
  }

  std::vector<Record> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = detail::split_csv_line(line);
    if (stats) ++stats->rows_seen;

    bool missing = false;
    for (std::size_t a = 0; a < schema.size() && !missing; ++a) {
      missing = column_of[a] >= fields.size() || fields[column_of[a]].empty();
    }
    if (missing) {
      if (stats) ++stats->rows_dropped_missing;
      continue;
    }

    Record rec;
    rec.cells.reserve(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const AttributeSpec& spec = schema.at(a);
      const std::string& text = fields[column_of[a]];
      if (spec.kind == AttrKind::numeric) {
        double v = 0;
        require(parse_double(trim(text), v), Errc::unparseable_numeric,
                "line " + std::to_string(lineno) + ", " + spec.name + ": \"" +
                    text + "\"");
        rec.cells.emplace_back(v);
      } else {
        bool known = false;
        for (const std::string& dv : spec.values) {
          if (dv == text) {
            known = true;
            break;
          }
        }
        require(known, Errc::unknown_category,
                "line " + std::to_string(lineno) + ", " + spec.name + ": \"" +
                    text + "\"");
        rec.cells.emplace_back(text);
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<Record> load_dataset_file(const std::string& path,
                                             const Schema& schema,
                                             LoadStats* stats = nullptr) {
  std::ifstream in(path);
  require(in.good(), Errc::file_not_found, "cannot open dataset: " + path);
  return load_dataset(in, schema, stats);
}

inline void write_records_csv(std::ostream& out, const Schema& schema,
                              const std::vector<Record>& records) {
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (a) out << ',';
    out << schema.at(a).name;
  }
  out << '\n';
  for (const Record& r : records) {
    for (std::size_t a = 0; a < r.cells.size(); ++a) {
      if (a) out << ',';
      std::string s = cell_to_string(r.cells[a]);
      if (s.find(',') != std::string::npos ||
          s.find('"') != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
          if (c == '"') quoted += "\"\"";
          else quoted.push_back(c);
        }
        quoted += '"';
        s = std::move(quoted);
      }
      out << s;
    }
    out << '\n';
  }
}

// Splits one dataset across n providers in contiguous chunks whose sizes
// differ by at most one (larger chunks first).
inline std::vector<std::vector<Record>> partition_fixed_total(
    const std::vector<Record>& records, std::size_t n_providers) {
  require(n_providers >= 1, Errc::config_invalid, "need at least one provider");
  std::vector<std::vector<Record>> parts(n_providers);
  std::size_t base = records.size() / n_providers;
  std::size_t extra = records.size() % n_providers;
  std::size_t pos = 0;
  for (std::size_t p = 0; p < n_providers; ++p) {
    std::size_t take = base + (p < extra ? 1 : 0);
    parts[p].assign(records.begin() + pos, records.begin() + pos + take);
    pos += take;
  }
  return parts;
}

// Variable-total strategy: every provider contributes the same number of
// (simulated) records; returns the per-provider counts.
inline std::vector<std::size_t> partition_variable_total(
    std::size_t n_providers, std::size_t per_provider) {
  require(n_providers >= 1, Errc::config_invalid, "need at least one provider");
  return std::vector<std::size_t>(n_providers, per_provider);
}

// i.i.d. uniform numeric records over [lo, hi).
inline std::vector<Record> simulate_uniform(std::size_t n, double lo,
                                            double hi, Rng& rng) {
  std::vector<Record> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    r.cells.emplace_back(lo + rng.next_unit() * (hi - lo));
    out.push_back(std::move(r));
  }
  return out;
}

// Skewed numeric records over [0, domain): bin b is drawn with weight
// skew^b (normalised); the emitted value is the bin midpoint. skew = 1
// degenerates to uniform over bins.
inline std::vector<Record> simulate_skewed(std::size_t n, std::size_t domain,
                                           double skew, Rng& rng) {
  require(domain >= 1, Errc::config_invalid, "empty skewed domain");
  require(skew > 0.0, Errc::config_invalid, "skew must be positive");
  std::vector<double> cumulative(domain);
  double acc = 0.0;
  double w = 1.0;
  for (std::size_t b = 0; b < domain; ++b) {
    acc += w;
    cumulative[b] = acc;
    w *= skew;
  }
  std::vector<Record> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_unit() * acc;
    std::size_t b = 0;
    while (b + 1 < domain && u >= cumulative[b]) ++b;
    Record r;
    r.cells.emplace_back(static_cast<double>(b) + 0.5);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace podsyn
