#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

// Votes are cast on whole label chains; a chain is keyed by its labels
// joined with '|'. Mixing chain segments from different parsers could
// produce chains no parser proposed.
inline std::string join_chain(const LabelChain& chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0) out += '|';
    out += chain[i];
  }
  return out;
}

// Weighted vote over the label chains the parsers assign to each aggregated
// span. Parsers whose tree lacks the span abstain. Ties go to the chain with
// the single highest-weight voter, then to the lexicographically smaller
// joined chain.
inline LabeledSpanMap aggregate_labels(const ClusterSet& aggregated,
                                       std::span<const LabeledSpanMap> parser_chains,
                                       std::span<const double> label_weights) {
  if (parser_chains.size() != label_weights.size())
    raise(ErrorCode::invalid_argument, "one label weight per parser required");
  double total = 0.0;
  for (double w : label_weights) {
    if (w < 0.0) raise(ErrorCode::invalid_argument, "label weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) raise(ErrorCode::zero_total_weight, "total label weight must be positive");

  LabeledSpanMap chosen;
  for (const Span& span : aggregated) {
    struct Vote {
      const LabelChain* chain = nullptr;
      double weight_sum = 0.0;
      double best_voter = 0.0;
    };
    std::map<std::string, Vote> votes;
    for (std::size_t k = 0; k < parser_chains.size(); ++k) {
      auto it = parser_chains[k].find(span);
      if (it == parser_chains[k].end()) continue;
      Vote& vote = votes[join_chain(it->second)];
      vote.chain = &it->second;
      vote.weight_sum += label_weights[k];
      vote.best_voter = std::max(vote.best_voter, label_weights[k]);
    }
    if (votes.empty())
      raise(ErrorCode::missing_label,
            "no parser provides a label for cluster " + to_string(span));
    const std::pair<const std::string, Vote>* best = nullptr;
    for (const auto& entry : votes) {
      if (best == nullptr || entry.second.weight_sum > best->second.weight_sum ||
          (entry.second.weight_sum == best->second.weight_sum &&
           entry.second.best_voter > best->second.best_voter))
        best = &entry;
    }
    chosen[span] = *best->second.chain;
  }
  return chosen;
}

inline LabeledSpanMap aggregate_labels(const ClusterSet& aggregated, const SentenceBundle& bundle,
                                       std::span<const double> label_weights) {
  std::vector<LabeledSpanMap> chains;
  chains.reserve(bundle.trees.size());
  for (const ParseTree& tree : bundle.trees) chains.push_back(labeled_spans_of(tree));
  return aggregate_labels(aggregated, chains, label_weights);
}

// Zero-one mismatches of each parser's chains against the chosen chains,
// counted over the spans the parser actually labels.
inline std::vector<std::int64_t> count_label_mismatches(
    std::span<const LabeledSpanMap> parser_chains, const LabeledSpanMap& chosen) {
  std::vector<std::int64_t> mismatches(parser_chains.size(), 0);
  for (const auto& [span, chain] : chosen) {
    for (std::size_t k = 0; k < parser_chains.size(); ++k) {
      auto it = parser_chains[k].find(span);
      if (it != parser_chains[k].end() && it->second != chain) ++mismatches[k];
    }
  }
  return mismatches;
}

// Assembles the final labeled tree for one sentence.
inline ParseTree finalize_tree(const ClusterSet& aggregated, const LabeledSpanMap& labels,
                               std::vector<Token> tokens) {
  return tree_from_clusters(aggregated, labels, std::move(tokens));
}

}  // namespace treeagg
