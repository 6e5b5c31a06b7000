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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/schema.hpp"

namespace podsyn {

// A subset of schema attributes whose joint histogram is measured. Indices
// are strictly increasing and row-major: the first attribute varies slowest.
struct Marginal {
  std::vector<std::size_t> attribute_indices;
  std::vector<std::size_t> sizes;  // domain size per listed attribute
  std::size_t cell_count = 0;

  bool operator==(const Marginal&) const = default;
};

inline Marginal make_marginal(const Schema& schema,
                              std::vector<std::size_t> attribute_indices) {
  require(!attribute_indices.empty(), Errc::config_invalid,
          "marginal over zero attributes");
  Marginal m;
  m.attribute_indices = std::move(attribute_indices);
  m.cell_count = 1;
  for (std::size_t i = 0; i < m.attribute_indices.size(); ++i) {
    std::size_t idx = m.attribute_indices[i];
    require(idx < schema.size(), Errc::config_invalid,
            "marginal attribute index out of range");
    require(i == 0 || m.attribute_indices[i - 1] < idx, Errc::config_invalid,
            "marginal indices must be strictly increasing");
    const AttributeSpec& spec = schema.at(idx);
    require(!spec.pii, Errc::pii_in_marginal,
            "attribute \"" + spec.name + "\" is pii");
    m.sizes.push_back(spec.domain_size());
    m.cell_count *= spec.domain_size();
  }
  require(m.cell_count > 0, Errc::config_invalid, "empty marginal domain");
  return m;
}

// Row-major flatten over an arbitrary size vector; shared by marginals and
// the full generation domain.
inline std::size_t flatten_index(std::span<const std::size_t> sizes,
                                 std::span<const std::size_t> tuple) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    flat = flat * sizes[i] + tuple[i];
  }
  return flat;
}

inline std::vector<std::size_t> unflatten_index(
    std::span<const std::size_t> sizes, std::size_t flat) {
  std::vector<std::size_t> tuple(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    tuple[i] = flat % sizes[i];
    flat /= sizes[i];
  }
  return tuple;
}

struct Histogram {
  Marginal marginal;
  std::vector<std::uint64_t> counts;  // length = marginal.cell_count

  std::uint64_t total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  }
};

inline Histogram build_histogram(const std::vector<Record>& records,
                                 const Marginal& marginal,
                                 const Schema& schema) {
  Histogram h;
  h.marginal = marginal;
  h.counts.assign(marginal.cell_count, 0);
  std::vector<std::size_t> tuple(marginal.attribute_indices.size());
  for (const Record& r : records) {
    for (std::size_t i = 0; i < marginal.attribute_indices.size(); ++i) {
      std::size_t a = marginal.attribute_indices[i];
      tuple[i] = bin_value(schema.at(a), r.cells.at(a));
    }
    ++h.counts[flatten_index(marginal.sizes, tuple)];
  }
  return h;
}

inline Histogram add_histograms(const Histogram& a, const Histogram& b) {
  require(a.marginal == b.marginal && a.counts.size() == b.counts.size(),
          Errc::shape_mismatch, "histogram shapes differ");
  Histogram out = a;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.counts[i] += b.counts[i];
  }
  return out;
}

}  // namespace podsyn
