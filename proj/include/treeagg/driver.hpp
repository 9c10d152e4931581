#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treeagg/aggregate.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/labels.hpp"
#include "treeagg/parallel.hpp"
#include "treeagg/rf.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

struct ParserWeights {
  std::vector<double> structure;
  std::vector<double> label;
};

struct DriverConfig {
  int max_iters = 100;
  // Convergence: largest absolute weight change falls below this bound, or
  // the aggregated trees repeat between consecutive iterations.
  double convergence_tol = 1e-6;
  // Smoothing added to distances before the log ratio, so a parser with
  // zero total distance still yields a finite weight.
  double distance_smoothing = 1e-6;
  bool include_preterminals = true;
  double tie_rel_tol = 1e-9;
  int threads = 0;  // 0 = all available cores
};

struct AggregationResult {
  std::vector<ParseTree> trees;           // final labeled trees
  std::vector<ClusterSet> structure_trees;
  ParserWeights weights;
  std::vector<double> objective_trace;        // structure-phase objective per iteration
  std::vector<double> label_objective_trace;  // label-phase objective per iteration
  int structure_iterations = 0;
  int label_iterations = 0;
  bool structure_converged = false;
  bool label_converged = false;
  double structure_seconds = 0.0;
  double label_seconds = 0.0;

  int iterations() const noexcept { return structure_iterations + label_iterations; }
};

// Reliability weights from per-parser total distances:
//   w_k = -log((d_k + eps) / (max_j d_j + eps)).
// The parser with the largest distance lands at 0. When every distance is
// equal the formula zeroes all weights, so it falls back to uniform ones.
inline std::vector<double> reliability_weights(std::span<const double> distances,
                                               double smoothing) {
  std::vector<double> weights(distances.size(), 0.0);
  if (distances.empty()) return weights;
  double max_distance = 0.0;
  for (double d : distances) {
    if (d < 0.0) raise(ErrorCode::invalid_argument, "distances must be non-negative");
    max_distance = std::max(max_distance, d);
  }
  double largest = 0.0;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    weights[k] = std::log((max_distance + smoothing) / (distances[k] + smoothing));
    largest = std::max(largest, weights[k]);
  }
  if (largest <= 0.0) std::fill(weights.begin(), weights.end(), 1.0);
  return weights;
}

inline std::vector<double> update_structure_weights(std::span<const double> per_parser_total_rf,
                                                    double smoothing = 1e-6) {
  return reliability_weights(per_parser_total_rf, smoothing);
}

inline std::vector<double> update_label_weights(std::span<const double> per_parser_mismatches,
                                                double smoothing = 1e-6) {
  return reliability_weights(per_parser_mismatches, smoothing);
}

namespace detail {

inline double max_abs_change(std::span<const double> a, std::span<const double> b) {
  double delta = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) delta = std::max(delta, std::abs(a[i] - b[i]));
  return delta;
}

}  // namespace detail

// Two-phase block coordinate descent. Phase one alternates structure
// aggregation and structure-weight updates until the trees or weights stop
// moving; phase two does the same for label chains on the fixed structures.
// Per-sentence work runs in parallel; per-parser distance totals are exact
// integer sums, so results do not depend on the thread count.
inline AggregationResult run_cptam(const Corpus& corpus, const DriverConfig& config = {}) {
  const std::size_t n = corpus.sentence_count();
  const std::size_t p = corpus.parser_count();
  if (n == 0) raise(ErrorCode::empty_corpus, "corpus has no sentences");
  if (p < 2) raise(ErrorCode::invalid_argument, "aggregation requires at least two parsers");
  for (const SentenceBundle& bundle : corpus.bundles) {
    if (bundle.trees.size() != p)
      raise(ErrorCode::invalid_argument, "every sentence needs one tree per parser");
  }
  if (config.max_iters <= 0 || config.convergence_tol <= 0.0 || config.distance_smoothing <= 0.0 ||
      config.tie_rel_tol <= 0.0)
    raise(ErrorCode::invalid_argument, "driver configuration values must be positive");

  AggregationResult result;
  const AggregateOptions agg_options{config.include_preterminals, config.tie_rel_tol};

  // Parser cluster sets never change across iterations; compute them once.
  std::vector<std::vector<ClusterSet>> parser_clusters(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const SentenceBundle& bundle = corpus.bundles[i];
    parser_clusters[i].reserve(p);
    for (const ParseTree& tree : bundle.trees)
      parser_clusters[i].push_back(clusters_of(tree, config.include_preterminals));
  });

  // Phase 1: structure.
  const auto structure_begin = std::chrono::steady_clock::now();
  std::vector<double> structure_weights(p, 1.0);
  std::vector<ClusterSet> aggregated(n);
  std::vector<ClusterSet> previous(n);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    parallel_for(n, config.threads, [&](std::size_t i) {
      aggregated[i] = aggregate_structure(parser_clusters[i], structure_weights, agg_options);
    });
    result.structure_iterations = iter + 1;
    if (iter > 0 && aggregated == previous) {
      // Identical trees reproduce identical distances and therefore
      // identical weights: a full fixed point.
      result.structure_converged = true;
      break;
    }
    previous = aggregated;

    std::vector<double> totals(p, 0.0);
    std::vector<std::vector<std::int64_t>> partial(n);
    parallel_for(n, config.threads, [&](std::size_t i) {
      partial[i].resize(p);
      for (std::size_t k = 0; k < p; ++k)
        partial[i][k] = rf_distance(aggregated[i], parser_clusters[i][k]);
    });
    std::vector<std::int64_t> exact_totals(p, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < p; ++k) exact_totals[k] += partial[i][k];
    for (std::size_t k = 0; k < p; ++k) totals[k] = static_cast<double>(exact_totals[k]);

    double objective = 0.0;
    for (std::size_t k = 0; k < p; ++k) objective += structure_weights[k] * totals[k];
    result.objective_trace.push_back(objective);

    std::vector<double> next = update_structure_weights(totals, config.distance_smoothing);
    const double delta = detail::max_abs_change(next, structure_weights);
    structure_weights = std::move(next);
    if (delta < config.convergence_tol) {
      result.structure_converged = true;
      break;
    }
  }
  result.structure_trees = aggregated;
  result.weights.structure = structure_weights;
  result.structure_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - structure_begin).count();

  // Phase 2: labels on the fixed aggregated structures.
  const auto label_begin = std::chrono::steady_clock::now();
  std::vector<std::vector<LabeledSpanMap>> parser_chains(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    parser_chains[i].reserve(p);
    for (const ParseTree& tree : corpus.bundles[i].trees)
      parser_chains[i].push_back(labeled_spans_of(tree));
  });

  std::vector<double> label_weights(p, 1.0);
  std::vector<LabeledSpanMap> chosen(n);
  std::vector<LabeledSpanMap> previous_chosen(n);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    parallel_for(n, config.threads, [&](std::size_t i) {
      chosen[i] = aggregate_labels(aggregated[i], parser_chains[i], label_weights);
    });
    result.label_iterations = iter + 1;
    if (iter > 0 && chosen == previous_chosen) {
      result.label_converged = true;
      break;
    }
    previous_chosen = chosen;

    std::vector<std::vector<std::int64_t>> partial(n);
    parallel_for(n, config.threads, [&](std::size_t i) {
      partial[i] = count_label_mismatches(parser_chains[i], chosen[i]);
    });
    std::vector<double> mismatches(p, 0.0);
    std::vector<std::int64_t> exact_mismatches(p, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < p; ++k) exact_mismatches[k] += partial[i][k];
    for (std::size_t k = 0; k < p; ++k) mismatches[k] = static_cast<double>(exact_mismatches[k]);

    double objective = 0.0;
    for (std::size_t k = 0; k < p; ++k) objective += label_weights[k] * mismatches[k];
    result.label_objective_trace.push_back(objective);

    std::vector<double> next = update_label_weights(mismatches, config.distance_smoothing);
    const double delta = detail::max_abs_change(next, label_weights);
    label_weights = std::move(next);
    if (delta < config.convergence_tol) {
      result.label_converged = true;
      break;
    }
  }
  result.weights.label = label_weights;
  result.label_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - label_begin).count();

  result.trees.reserve(n);
  std::vector<std::vector<ParseTree>> built(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    built[i].push_back(finalize_tree(aggregated[i], chosen[i], corpus.bundles[i].tokens));
  });
  for (std::size_t i = 0; i < n; ++i) result.trees.push_back(std::move(built[i].front()));
  return result;
}

}  // namespace treeagg
