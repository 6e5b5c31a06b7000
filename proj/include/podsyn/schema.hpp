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
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/text.hpp"

namespace podsyn {

enum class AttrKind { categorical, numeric };

// One column of a dataset. Numeric attributes are discretised into
// bin_count equal-width bins over [lo, hi]; categorical attributes carry an
// explicit value list. pii columns survive ingestion but are barred from
// every marginal.
struct AttributeSpec {
  std::string name;
  AttrKind kind = AttrKind::categorical;
  std::vector<std::string> values;  // categorical domain
  double lo = 0.0;                  // numeric range
  double hi = 0.0;
  std::uint32_t bin_count = 0;
  bool pii = false;

  std::size_t domain_size() const {
    return kind == AttrKind::categorical ? values.size() : bin_count;
  }
};

using CellValue = std::variant<double, std::string>;

struct Record {
  std::vector<CellValue> cells;  // one per schema attribute, in order

  bool operator==(const Record&) const = default;
};

struct Schema {
  std::vector<AttributeSpec> attributes;

  std::size_t size() const { return attributes.size(); }
  const AttributeSpec& at(std::size_t i) const { return attributes.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (attributes[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::vector<std::size_t> non_pii_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (!attributes[i].pii) out.push_back(i);
    }
    return out;
  }

  void validate() const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      const AttributeSpec& a = attributes[i];
      require(!a.name.empty(), Errc::config_invalid, "attribute without name");
      for (std::size_t j = i + 1; j < attributes.size(); ++j) {
        require(attributes[j].name != a.name, Errc::config_invalid,
                "duplicate attribute name: " + a.name);
      }
      if (a.kind == AttrKind::categorical) {
        require(!a.values.empty(), Errc::config_invalid,
                a.name + ": empty categorical domain");
      } else {
        require(a.lo < a.hi, Errc::config_invalid,
                a.name + ": numeric range requires lo < hi");
        require(a.bin_count >= 1, Errc::config_invalid,
                a.name + ": bin_count must be >= 1");
      }
    }
  }
};

// Maps an in-domain cell value to its bin index. Numeric values outside
// [lo, hi] clamp to the edge bins; v = hi lands in the last bin.
inline std::size_t bin_value(const AttributeSpec& spec, const CellValue& raw) {
  if (spec.kind == AttrKind::categorical) {
    const std::string& s = std::get<std::string>(raw);
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      if (spec.values[i] == s) return i;
    }
    fail(Errc::unknown_category,
         spec.name + ": value \"" + s + "\" not in domain");
  }
  double v = std::get<double>(raw);
  if (v <= spec.lo) return 0;
  if (v >= spec.hi) return spec.bin_count - 1;
  double width = (spec.hi - spec.lo) / spec.bin_count;
  auto b = static_cast<std::size_t>((v - spec.lo) / width);
  return b < spec.bin_count ? b : spec.bin_count - 1;
}

// Inverse of bin_value up to discretisation: bin -> representative value
// (category token, or the bin midpoint for numeric attributes).
inline CellValue decode_bin(const AttributeSpec& spec, std::size_t bin) {
  require(bin < spec.domain_size(), Errc::domain_mismatch,
          spec.name + ": bin index out of range");
  if (spec.kind == AttrKind::categorical) return spec.values[bin];
  double width = (spec.hi - spec.lo) / spec.bin_count;
  return spec.lo + (static_cast<double>(bin) + 0.5) * width;
}

inline std::string cell_to_string(const CellValue& cell) {
  if (std::holds_alternative<double>(cell)) {
    return format_double(std::get<double>(cell));
  }
  return std::get<std::string>(cell);
}

// Schema files are line-oriented key-value text:
//   <name> = categorical:<v1|v2|...>[:pii]
//   <name> = numeric:<lo>:<hi>:<bins>[:pii]
// '#' starts a comment; blank lines are ignored. Categorical values may not
// contain ':' or '|'.
inline Schema parse_schema(std::string_view text) {
  Schema schema;
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
            "schema line " + std::to_string(lineno) + ": expected '='");
    std::string name = trim(line.substr(0, eq));
    std::vector<std::string> parts = split(trim(line.substr(eq + 1)), ':');
    require(!name.empty() && !parts.empty(), Errc::config_invalid,
            "schema line " + std::to_string(lineno) + ": malformed");

    AttributeSpec spec;
    spec.name = name;
    if (parts.back() == "pii" && parts.size() > 2) {
      spec.pii = true;
      parts.pop_back();
    }
    std::string kind = to_lower(trim(parts[0]));
    if (kind == "categorical") {
      require(parts.size() == 2, Errc::config_invalid,
              name + ": categorical takes one value list");
      spec.kind = AttrKind::categorical;
      for (const std::string& v : split(parts[1], '|')) {
        spec.values.push_back(trim(v));
      }
    } else if (kind == "numeric") {
      require(parts.size() == 4, Errc::config_invalid,
              name + ": numeric takes lo:hi:bins");
      spec.kind = AttrKind::numeric;
      std::uint64_t bins = 0;
      require(parse_double(trim(parts[1]), spec.lo) &&
                  parse_double(trim(parts[2]), spec.hi) &&
                  parse_u64(trim(parts[3]), bins),
              Errc::config_invalid, name + ": unparseable numeric spec");
      spec.bin_count = static_cast<std::uint32_t>(bins);
    } else {
      fail(Errc::config_invalid, name + ": unknown kind \"" + kind + "\"");
    }
    schema.attributes.push_back(std::move(spec));
  }
  schema.validate();
  return schema;
}

inline Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::file_not_found, "cannot open schema: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

inline std::string format_schema(const Schema& schema) {
  std::ostringstream out;
  for (const AttributeSpec& a : schema.attributes) {
    out << a.name << " = ";
    if (a.kind == AttrKind::categorical) {
      out << "categorical:";
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (i) out << '|';
        out << a.values[i];
      }
    } else {
      out << "numeric:" << format_double(a.lo) << ':' << format_double(a.hi)
          << ':' << a.bin_count;
    }
    if (a.pii) out << ":pii";
    out << '\n';
  }
  return out.str();
}

// Convenience for simulated 1-D experiments.
inline Schema single_numeric_schema(std::string name, double lo, double hi,
                                    std::uint32_t bins) {
  Schema s;
  AttributeSpec a;
  a.name = std::move(name);
  a.kind = AttrKind::numeric;
  a.lo = lo;
  a.hi = hi;
  a.bin_count = bins;
  s.attributes.push_back(std::move(a));
  s.validate();
  return s;
}

}  // namespace podsyn
