#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

// Symmetric-difference distance between two cluster sets: |a| + |b| - 2|a∩b|,
// with the intersection counted by probing a hash set of the larger side.
inline std::int64_t rf_distance(const ClusterSet& a, const ClusterSet& b) {
  const ClusterSet& small = a.size() <= b.size() ? a : b;
  const ClusterSet& large = a.size() <= b.size() ? b : a;
  std::unordered_set<Span, SpanHash> index(large.begin(), large.end(), large.size() * 2 + 1);
  std::int64_t common = 0;
  for (const Span& s : small)
    if (index.count(s)) ++common;
  return static_cast<std::int64_t>(a.size()) + static_cast<std::int64_t>(b.size()) - 2 * common;
}

// Total weighted distance of the aggregated cluster sets to every parser's
// trees: sum over parsers of w_k times the summed per-sentence distance.
inline double weighted_objective(const Corpus& corpus, const std::vector<ClusterSet>& aggregated,
                                 std::span<const double> structure_weights,
                                 bool include_preterminals = true) {
  if (aggregated.size() != corpus.sentence_count())
    raise(ErrorCode::length_mismatch, "one aggregated cluster set per sentence required");
  if (structure_weights.size() != corpus.parser_count())
    raise(ErrorCode::invalid_argument, "one structure weight per parser required");
  double total = 0.0;
  for (std::size_t k = 0; k < corpus.parser_count(); ++k) {
    std::int64_t distance = 0;
    for (std::size_t i = 0; i < corpus.sentence_count(); ++i) {
      distance += rf_distance(aggregated[i],
                              clusters_of(corpus.bundles[i].trees[k], include_preterminals));
    }
    total += structure_weights[k] * static_cast<double>(distance);
  }
  return total;
}

// Share of sentences where all parsers produce the same structure, where at
// least two (but not all) do, and where all structures are pairwise distinct.
// Judged on cluster sets without singleton spans; labels are ignored.
struct AgreementStats {
  double pct_all_agree = 0.0;
  double pct_partial_agree = 0.0;
  double pct_none_agree = 0.0;
  std::int64_t sentences_all = 0;
  std::int64_t sentences_partial = 0;
  std::int64_t sentences_none = 0;
  std::int64_t sentence_count = 0;
};

inline AgreementStats agreement_stats(const Corpus& corpus) {
  if (corpus.parser_count() < 2)
    raise(ErrorCode::invalid_argument, "agreement needs at least two parsers");
  if (corpus.sentence_count() == 0) raise(ErrorCode::empty_corpus, "no sentences");
  AgreementStats stats;
  stats.sentence_count = static_cast<std::int64_t>(corpus.sentence_count());
  for (const SentenceBundle& bundle : corpus.bundles) {
    std::vector<ClusterSet> sets;
    sets.reserve(bundle.trees.size());
    for (const ParseTree& tree : bundle.trees) sets.push_back(clusters_of(tree, false));
    bool all = true;
    bool some = false;
    for (std::size_t a = 0; a < sets.size(); ++a) {
      for (std::size_t b = a + 1; b < sets.size(); ++b) {
        if (sets[a] == sets[b])
          some = true;
        else
          all = false;
      }
    }
    if (all)
      ++stats.sentences_all;
    else if (some)
      ++stats.sentences_partial;
    else
      ++stats.sentences_none;
  }
  const double n = static_cast<double>(stats.sentence_count);
  stats.pct_all_agree = 100.0 * static_cast<double>(stats.sentences_all) / n;
  stats.pct_partial_agree = 100.0 * static_cast<double>(stats.sentences_partial) / n;
  stats.pct_none_agree = 100.0 * static_cast<double>(stats.sentences_none) / n;
  return stats;
}

}  // namespace treeagg
