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
#include <span>
#include <string>
#include <vector>

#include "podsyn/dp.hpp"
#include "podsyn/error.hpp"
#include "podsyn/histogram.hpp"
#include "podsyn/rng.hpp"
#include "podsyn/schema.hpp"

namespace podsyn {

// Full-domain distributions above this cell count are refused; marginal
// aggregation still works, only generation is off the table.
inline constexpr std::size_t kDefaultDomainLimit = 1'000'000;

// Synthetic-data carrier: nonnegative weights over the generation domain
// holding a fixed total mass n (the record count).
struct Distribution {
  std::vector<double> weights;
  double mass = 0.0;

  std::size_t cells() const { return weights.size(); }
};

inline Distribution uniform_distribution(std::size_t cells, double mass) {
  require(cells > 0, Errc::config_invalid, "empty distribution domain");
  require(mass > 0.0, Errc::no_data, "distribution with zero mass");
  Distribution d;
  d.weights.assign(cells, mass / static_cast<double>(cells));
  d.mass = mass;
  return d;
}

// One counting query: indicator of a single cell of one workload marginal.
struct WorkloadQuery {
  std::uint32_t marginal_index = 0;
  std::uint32_t cell = 0;
};

// A marginal workload over the generation domain (all non-pii attributes in
// schema order). When the full domain is tractable, per-marginal projection
// tables map each full-domain cell to its marginal cell.
struct Workload {
  std::vector<std::size_t> attribute_indices;  // into the source schema
  std::vector<std::size_t> domain_sizes;
  std::size_t domain_cells = 0;       // valid only when tractable
  double domain_cells_approx = 0.0;   // always set, may exceed size_t
  bool tractable = false;
  std::vector<Marginal> marginals;
  std::vector<WorkloadQuery> queries;
  std::vector<std::vector<std::uint32_t>> projections;  // per marginal
};

inline std::vector<Marginal> one_way_marginals(const Schema& schema) {
  std::vector<Marginal> out;
  for (std::size_t i : schema.non_pii_indices()) {
    out.push_back(make_marginal(schema, {i}));
  }
  return out;
}

inline std::vector<Marginal> all_two_way_marginals(const Schema& schema) {
  std::vector<std::size_t> idx = schema.non_pii_indices();
  require(idx.size() >= 2, Errc::config_invalid,
          "two-way workload needs at least two non-pii attributes");
  std::vector<Marginal> out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      out.push_back(make_marginal(schema, {idx[i], idx[j]}));
    }
  }
  return out;
}

inline Workload make_workload(const Schema& schema,
                              std::vector<Marginal> marginals,
                              std::size_t domain_limit = kDefaultDomainLimit) {
  require(!marginals.empty(), Errc::empty_workload, "workload without queries");
  Workload w;
  w.attribute_indices = schema.non_pii_indices();
  require(!w.attribute_indices.empty(), Errc::config_invalid,
          "schema has no non-pii attributes");
  double approx = 1.0;
  for (std::size_t a : w.attribute_indices) {
    w.domain_sizes.push_back(schema.at(a).domain_size());
    approx *= static_cast<double>(schema.at(a).domain_size());
  }
  w.domain_cells_approx = approx;
  w.tractable = approx <= static_cast<double>(domain_limit);
  w.marginals = std::move(marginals);

  for (std::size_t m = 0; m < w.marginals.size(); ++m) {
    for (std::size_t c = 0; c < w.marginals[m].cell_count; ++c) {
      w.queries.push_back(WorkloadQuery{static_cast<std::uint32_t>(m),
                                        static_cast<std::uint32_t>(c)});
    }
  }

  if (!w.tractable) return w;

  w.domain_cells = 1;
  for (std::size_t s : w.domain_sizes) w.domain_cells *= s;

  // Position of each marginal attribute within the generation domain.
  std::vector<std::vector<std::size_t>> positions(w.marginals.size());
  for (std::size_t m = 0; m < w.marginals.size(); ++m) {
    for (std::size_t a : w.marginals[m].attribute_indices) {
      auto it = std::find(w.attribute_indices.begin(),
                          w.attribute_indices.end(), a);
      require(it != w.attribute_indices.end(), Errc::domain_mismatch,
              "marginal attribute outside generation domain");
      positions[m].push_back(
          static_cast<std::size_t>(it - w.attribute_indices.begin()));
    }
  }

  w.projections.assign(w.marginals.size(), {});
  for (auto& p : w.projections) p.resize(w.domain_cells);
  std::vector<std::size_t> tuple(w.domain_sizes.size(), 0);
  std::vector<std::size_t> sub;
  for (std::size_t flat = 0; flat < w.domain_cells; ++flat) {
    for (std::size_t m = 0; m < w.marginals.size(); ++m) {
      sub.clear();
      for (std::size_t pos : positions[m]) sub.push_back(tuple[pos]);
      w.projections[m][flat] = static_cast<std::uint32_t>(
          flatten_index(w.marginals[m].sizes, sub));
    }
    for (std::size_t i = tuple.size(); i-- > 0;) {
      if (++tuple[i] < w.domain_sizes[i]) break;
      tuple[i] = 0;
    }
  }
  return w;
}

// Generic linear query q with per-cell coefficients in [-1, 1].
inline double evaluate_query(const Histogram& hist,
                             std::span<const double> coefficients) {
  require(coefficients.size() == hist.counts.size(), Errc::domain_mismatch,
          "query arity does not match histogram");
  double acc = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    acc += coefficients[i] * static_cast<double>(hist.counts[i]);
  }
  return acc;
}

inline double evaluate_query(const Distribution& dist,
                             std::span<const double> coefficients) {
  require(coefficients.size() == dist.weights.size(), Errc::domain_mismatch,
          "query arity does not match distribution");
  double acc = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    acc += coefficients[i] * dist.weights[i];
  }
  return acc;
}

// Projects the full-domain distribution onto one workload marginal.
inline std::vector<double> project_distribution(const Workload& w,
                                                const Distribution& dist,
                                                std::size_t marginal_index) {
  require(w.tractable, Errc::domain_too_large, "workload has no projections");
  require(dist.cells() == w.domain_cells, Errc::domain_mismatch,
          "distribution does not match workload domain");
  const std::vector<std::uint32_t>& proj = w.projections.at(marginal_index);
  std::vector<double> out(w.marginals[marginal_index].cell_count, 0.0);
  for (std::size_t x = 0; x < proj.size(); ++x) {
    out[proj[x]] += dist.weights[x];
  }
  return out;
}

inline double answer_query(const Workload& w,
                           std::span<const Histogram> truth,
                           std::size_t query_index) {
  const WorkloadQuery& q = w.queries.at(query_index);
  return static_cast<double>(truth[q.marginal_index].counts.at(q.cell));
}

namespace detail {

inline void check_truth(const Workload& w, std::span<const Histogram> truth) {
  require(truth.size() == w.marginals.size(), Errc::domain_mismatch,
          "need one histogram per workload marginal");
  for (std::size_t m = 0; m < truth.size(); ++m) {
    require(truth[m].counts.size() == w.marginals[m].cell_count,
            Errc::domain_mismatch, "histogram shape does not match workload");
    require(truth[m].total() == truth[0].total(), Errc::consistency_violation,
            "marginals disagree on record count");
  }
}

inline void mw_update_inplace(const Workload& w, Distribution& dist,
                              std::size_t query_index, double measurement) {
  require(std::isfinite(measurement), Errc::domain_mismatch,
          "non-finite measurement");
  const WorkloadQuery& q = w.queries.at(query_index);
  const std::vector<std::uint32_t>& proj = w.projections[q.marginal_index];
  double q_of_a = 0.0;
  for (std::size_t x = 0; x < proj.size(); ++x) {
    if (proj[x] == q.cell) q_of_a += dist.weights[x];
  }
  double factor = std::exp((measurement - q_of_a) / (2.0 * dist.mass));
  double total = 0.0;
  for (std::size_t x = 0; x < proj.size(); ++x) {
    if (proj[x] == q.cell) dist.weights[x] *= factor;
    total += dist.weights[x];
  }
  double rescale = dist.mass / total;
  for (double& v : dist.weights) v *= rescale;
}

}  // namespace detail

// Multiplicative-weights step against a noisy measurement of one query,
// followed by a rescale back to total mass n. Takes a NoisyMeasurement by
// design: once measured, the true histogram is out of reach.
inline Distribution mw_update(const Workload& w, const Distribution& dist,
                              std::size_t query_index,
                              const NoisyMeasurement& measurement) {
  Distribution out = dist;
  detail::mw_update_inplace(w, out, query_index, measurement.value);
  return out;
}

// Total variation distance between a distribution and a histogram over the
// same cells, both normalised.
inline double tv_error(const Distribution& dist, const Histogram& hist) {
  require(dist.cells() == hist.counts.size(), Errc::domain_mismatch,
          "tv_error domains differ");
  double n = static_cast<double>(hist.total());
  require(n > 0.0 && dist.mass > 0.0, Errc::no_data, "tv_error on empty data");
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.weights.size(); ++i) {
    acc += std::abs(dist.weights[i] / dist.mass -
                    static_cast<double>(hist.counts[i]) / n);
  }
  return acc / 2.0;
}

// Average per-marginal TV between the projected distribution and the true
// marginals; collapses to plain tv_error for a single full-domain marginal.
inline double workload_tv_error(const Workload& w, const Distribution& dist,
                                std::span<const Histogram> truth) {
  detail::check_truth(w, truth);
  double acc = 0.0;
  for (std::size_t m = 0; m < w.marginals.size(); ++m) {
    std::vector<double> proj = project_distribution(w, dist, m);
    double n = static_cast<double>(truth[m].total());
    require(n > 0.0, Errc::no_data, "empty marginal");
    double tv = 0.0;
    for (std::size_t c = 0; c < proj.size(); ++c) {
      tv += std::abs(proj[c] / dist.mass -
                     static_cast<double>(truth[m].counts[c]) / n);
    }
    acc += tv / 2.0;
  }
  return acc / static_cast<double>(w.marginals.size());
}

struct MwemTraceEntry {
  std::uint32_t iteration = 0;  // 1-based
  std::uint32_t query_id = 0;
  double noisy_value = 0.0;
  double tv_error = 0.0;
};
using MwemTrace = std::vector<MwemTraceEntry>;

struct MwemOptions {
  bool average_iterates = false;  // release the mean of A_1..A_T instead of A_T
};

struct MwemResult {
  Distribution dist;
  MwemTrace trace;
};

// MWEM: T rounds of exponential-mechanism query selection (eps/2T), Laplace
// measurement (eps/2T), and multiplicative-weights update. Spends exactly
// eps in total.
inline MwemResult mwem(const Workload& w, std::span<const Histogram> truth,
                       double eps, std::uint32_t T, Rng& rng,
                       PrivacyBudget& budget, const MwemOptions& opts = {}) {
  require(!w.queries.empty(), Errc::empty_workload, "mwem needs queries");
  require(w.tractable, Errc::domain_too_large,
          "full domain has ~" + format_double(w.domain_cells_approx) +
              " cells");
  require(T >= 1, Errc::config_invalid, "mwem needs T >= 1");
  detail::check_truth(w, truth);
  double n = static_cast<double>(truth[0].total());
  require(n > 0.0, Errc::no_data, "mwem on empty data");

  MwemResult result;
  result.dist = uniform_distribution(w.domain_cells, n);
  std::vector<double> average(opts.average_iterates ? w.domain_cells : 0, 0.0);

  EvenSplit split(eps, 2ull * T);
  std::vector<double> scores(w.queries.size());
  for (std::uint32_t it = 1; it <= T; ++it) {
    std::vector<std::vector<double>> proj(w.marginals.size());
    for (std::size_t m = 0; m < w.marginals.size(); ++m) {
      proj[m] = project_distribution(w, result.dist, m);
    }
    for (std::size_t j = 0; j < w.queries.size(); ++j) {
      const WorkloadQuery& q = w.queries[j];
      scores[j] = std::abs(proj[q.marginal_index][q.cell] -
                           static_cast<double>(
                               truth[q.marginal_index].counts[q.cell]));
    }

    double eps_select = split.next();
    budget.spend(eps_select, "mwem.select." + std::to_string(it),
                 "exponential");
    std::size_t chosen = exponential_mechanism(scores, eps_select, 1.0, rng);

    double eps_measure = split.next();
    budget.spend(eps_measure, "mwem.measure." + std::to_string(it), "laplace");
    NoisyMeasurement m =
        laplace_mechanism(answer_query(w, truth, chosen), 1.0, eps_measure,
                          rng);
    m.query_id = static_cast<std::uint32_t>(chosen);

    detail::mw_update_inplace(w, result.dist, chosen, m.value);
    if (opts.average_iterates) {
      for (std::size_t x = 0; x < average.size(); ++x) {
        average[x] += result.dist.weights[x];
      }
    }
    result.trace.push_back(MwemTraceEntry{
        it, m.query_id, m.value, workload_tv_error(w, result.dist, truth)});
  }

  if (opts.average_iterates) {
    for (std::size_t x = 0; x < average.size(); ++x) {
      result.dist.weights[x] = average[x] / static_cast<double>(T);
    }
  }
  return result;
}

inline MwemResult mwem(const Workload& w, const Histogram& truth, double eps,
                       std::uint32_t T, Rng& rng, PrivacyBudget& budget,
                       const MwemOptions& opts = {}) {
  return mwem(w, std::span<const Histogram>(&truth, 1), eps, T, rng, budget,
              opts);
}

struct MeasureGenerateResult {
  Distribution dist;
  std::vector<NoisyMeasurement> measurements;  // one per workload query
};

// Measure-generate baseline: Laplace-noise every cell of every workload
// marginal at eps / (number of marginals), then fit a full-domain
// distribution by cycling multiplicative-weights updates over the noisy
// cells (post-processing, no further budget).
inline MeasureGenerateResult measure_generate(const Workload& w,
                                              std::span<const Histogram> truth,
                                              double eps,
                                              std::uint32_t fit_iterations,
                                              Rng& rng, PrivacyBudget& budget) {
  require(!w.queries.empty(), Errc::empty_workload, "empty workload");
  require(w.tractable, Errc::domain_too_large,
          "full domain has ~" + format_double(w.domain_cells_approx) +
              " cells");
  detail::check_truth(w, truth);
  double n = static_cast<double>(truth[0].total());
  require(n > 0.0, Errc::no_data, "measure_generate on empty data");

  MeasureGenerateResult result;
  EvenSplit split(eps, w.marginals.size());
  std::size_t query_index = 0;
  for (std::size_t m = 0; m < w.marginals.size(); ++m) {
    double eps_m = split.next();
    budget.spend(eps_m, "measure.marginal." + std::to_string(m), "laplace");
    for (std::size_t c = 0; c < w.marginals[m].cell_count; ++c) {
      NoisyMeasurement meas = laplace_mechanism(
          static_cast<double>(truth[m].counts[c]), 1.0, eps_m, rng);
      meas.query_id = static_cast<std::uint32_t>(query_index++);
      result.measurements.push_back(meas);
    }
  }

  result.dist = uniform_distribution(w.domain_cells, n);
  for (std::uint32_t pass = 0; pass < fit_iterations; ++pass) {
    for (const NoisyMeasurement& meas : result.measurements) {
      detail::mw_update_inplace(w, result.dist, meas.query_id, meas.value);
    }
  }
  return result;
}

inline Schema output_schema(const Schema& schema, const Workload& w) {
  Schema out;
  for (std::size_t a : w.attribute_indices) {
    out.attributes.push_back(schema.at(a));
  }
  return out;
}

// m i.i.d. draws from the normalised weights, decoded to attribute cells of
// the generation (non-pii) schema.
inline std::vector<Record> sample_records(const Workload& w,
                                          const Schema& schema,
                                          const Distribution& dist,
                                          std::size_t m, Rng& rng) {
  require(w.tractable && dist.cells() == w.domain_cells, Errc::domain_mismatch,
          "distribution does not match workload domain");
  std::vector<double> cumulative(dist.cells());
  double acc = 0.0;
  for (std::size_t x = 0; x < dist.cells(); ++x) {
    acc += dist.weights[x];
    cumulative[x] = acc;
  }
  require(acc > 0.0, Errc::no_data, "sampling from zero-mass distribution");

  std::vector<Record> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    double u = rng.next_unit() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t flat = it == cumulative.end()
                           ? dist.cells() - 1
                           : static_cast<std::size_t>(it - cumulative.begin());
    std::vector<std::size_t> tuple = unflatten_index(w.domain_sizes, flat);
    Record rec;
    rec.cells.reserve(tuple.size());
    for (std::size_t d = 0; d < tuple.size(); ++d) {
      rec.cells.push_back(
          decode_bin(schema.at(w.attribute_indices[d]), tuple[d]));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace podsyn
