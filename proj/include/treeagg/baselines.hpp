#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treeagg/aggregate.hpp"
#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/labels.hpp"
#include "treeagg/parallel.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

// Reference consensus rules, all on unweighted (fraction-of-parsers) support:
//   mrc      - clusters with support strictly above 50%
//   gc       - greedy by support: scan descending, add clusters above the
//              threshold that stay compatible with everything added so far
//   sc       - clusters with 100% support
//   cptam_w  - support >= 50%, exact 50% resolved by maximum independent
//              set; equivalent to weighted aggregation with uniform weights
enum class ConsensusMethod { mrc, gc, sc, cptam_w };

inline const char* to_string(ConsensusMethod method) {
  switch (method) {
    case ConsensusMethod::mrc: return "mrc";
    case ConsensusMethod::gc: return "gc";
    case ConsensusMethod::sc: return "sc";
    case ConsensusMethod::cptam_w: return "cptam-w";
  }
  return "unknown";
}

inline ClusterSet consensus(std::span<const ClusterSet> parser_clusters, ConsensusMethod method,
                            double gc_threshold = 0.2, const AggregateOptions& options = {}) {
  const std::size_t p = parser_clusters.size();
  if (p == 0) raise(ErrorCode::invalid_argument, "consensus needs at least one parser");

  if (method == ConsensusMethod::cptam_w) {
    std::vector<double> uniform(p, 1.0);
    return aggregate_structure(parser_clusters, uniform, options);
  }

  std::unordered_map<Span, std::int32_t, SpanHash> counts;
  for (const ClusterSet& set : parser_clusters)
    for (const Span& s : set) ++counts[s];

  std::vector<Span> result;
  switch (method) {
    case ConsensusMethod::mrc:
      for (const auto& [span, count] : counts)
        if (2 * static_cast<std::size_t>(count) > p) result.push_back(span);
      break;
    case ConsensusMethod::sc:
      for (const auto& [span, count] : counts)
        if (static_cast<std::size_t>(count) == p) result.push_back(span);
      break;
    case ConsensusMethod::gc: {
      if (gc_threshold <= 0.0 || gc_threshold > 1.0)
        raise(ErrorCode::invalid_argument, "greedy consensus threshold must be in (0, 1]");
      // The root span (unanimous by construction) is seeded unconditionally
      // so the output is a tree even at threshold 1.0.
      Span root{0, 0};
      for (const auto& [span, count] : counts) root.end = std::max(root.end, span.end);
      result.push_back(root);
      std::vector<std::pair<Span, std::int32_t>> ranked(counts.begin(), counts.end());
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (a.first.start != b.first.start) return a.first.start < b.first.start;
        return a.first.end < b.first.end;
      });
      for (const auto& [span, count] : ranked) {
        const double fraction = static_cast<double>(count) / static_cast<double>(p);
        if (fraction <= gc_threshold + 1e-12) continue;
        bool ok = true;
        for (const Span& chosen : result) {
          if (!compatible(span, chosen)) {
            ok = false;
            break;
          }
        }
        if (ok) result.push_back(span);
      }
      break;
    }
    case ConsensusMethod::cptam_w:
      break;  // handled above
  }
  return ClusterSet::of(std::move(result));
}

inline ClusterSet consensus(const SentenceBundle& bundle, ConsensusMethod method,
                            double gc_threshold = 0.2, const AggregateOptions& options = {}) {
  std::vector<ClusterSet> sets;
  sets.reserve(bundle.trees.size());
  for (const ParseTree& tree : bundle.trees)
    sets.push_back(clusters_of(tree, options.include_preterminals));
  return consensus(sets, method, gc_threshold, options);
}

// Label vote with every parser weighted equally.
inline LabeledSpanMap majority_vote_labels(const ClusterSet& aggregated,
                                           const SentenceBundle& bundle) {
  std::vector<double> uniform(bundle.trees.size(), 1.0);
  return aggregate_labels(aggregated, bundle, uniform);
}

struct BaselineResult {
  std::vector<ClusterSet> structures;
  std::vector<ParseTree> trees;
};

// Runs a consensus method plus majority-vote labels over a whole corpus.
inline BaselineResult run_baseline(const Corpus& corpus, ConsensusMethod method,
                                   double gc_threshold = 0.2, const AggregateOptions& options = {},
                                   int threads = 0) {
  const std::size_t n = corpus.sentence_count();
  if (n == 0) raise(ErrorCode::empty_corpus, "corpus has no sentences");
  BaselineResult result;
  result.structures.resize(n);
  std::vector<std::vector<ParseTree>> built(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const SentenceBundle& bundle = corpus.bundles[i];
    result.structures[i] = consensus(bundle, method, gc_threshold, options);
    LabeledSpanMap labels = majority_vote_labels(result.structures[i], bundle);
    built[i].push_back(finalize_tree(result.structures[i], labels, bundle.tokens));
  });
  result.trees.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.trees.push_back(std::move(built[i].front()));
  return result;
}

}  // namespace treeagg
