#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/driver.hpp"
#include "treeagg/error.hpp"
#include "treeagg/labels.hpp"
#include "treeagg/rf.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t correct = 0;
  std::int64_t predicted = 0;
  std::int64_t gold = 0;
  // Total symmetric-difference distance to gold; set in structure mode only.
  std::optional<std::int64_t> rf_total;
};

namespace detail {

inline void finish_report(EvalReport& report) {
  report.precision =
      report.predicted > 0 ? static_cast<double>(report.correct) / static_cast<double>(report.predicted) : 0.0;
  report.recall =
      report.gold > 0 ? static_cast<double>(report.correct) / static_cast<double>(report.gold) : 0.0;
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
}

// Distinct (span, label) constituents of a tree, one per chain element.
inline std::vector<std::pair<Span, std::string>> labeled_constituents(const ParseTree& tree) {
  std::vector<std::pair<Span, std::string>> items;
  for (const ParseTree::Node& node : tree.nodes()) items.emplace_back(node.span, node.label);
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

template <class T>
std::int64_t sorted_common(const std::vector<T>& a, const std::vector<T>& b) {
  std::int64_t common = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

inline void check_aligned(std::span<const ParseTree> pred, std::span<const ParseTree> gold) {
  if (pred.size() != gold.size())
    raise(ErrorCode::length_mismatch,
          "predicted " + std::to_string(pred.size()) + " trees vs gold " +
              std::to_string(gold.size()));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].token_texts() != gold[i].token_texts())
      raise(ErrorCode::tokenization_mismatch,
            "sentence " + std::to_string(i) + ": token sequences differ");
  }
}

}  // namespace detail

// P, R, F1 from raw counts; zero denominators score 0.
inline EvalReport score_counts(std::int64_t correct, std::int64_t predicted, std::int64_t gold) {
  EvalReport report;
  report.correct = correct;
  report.predicted = predicted;
  report.gold = gold;
  detail::finish_report(report);
  return report;
}

// Labeled constituent scores. A constituent is a (span, label) pair; POS
// tags of singleton spans count, and each element of a unary chain counts
// once.
inline EvalReport eval_labeled(std::span<const ParseTree> pred, std::span<const ParseTree> gold) {
  detail::check_aligned(pred, gold);
  EvalReport report;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto p = detail::labeled_constituents(pred[i]);
    const auto g = detail::labeled_constituents(gold[i]);
    report.predicted += static_cast<std::int64_t>(p.size());
    report.gold += static_cast<std::int64_t>(g.size());
    report.correct += detail::sorted_common(p, g);
  }
  detail::finish_report(report);
  return report;
}

// Structure-only scores over bare spans (singleton spans excluded), plus the
// total symmetric-difference distance.
inline EvalReport eval_structure(std::span<const ParseTree> pred, std::span<const ParseTree> gold) {
  detail::check_aligned(pred, gold);
  EvalReport report;
  std::int64_t rf_total = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const ClusterSet p = clusters_of(pred[i], false);
    const ClusterSet g = clusters_of(gold[i], false);
    report.predicted += static_cast<std::int64_t>(p.size());
    report.gold += static_cast<std::int64_t>(g.size());
    report.correct += detail::sorted_common(p.spans(), g.spans());
    rf_total += rf_distance(p, g);
  }
  report.rf_total = rf_total;
  detail::finish_report(report);
  return report;
}

// Accuracy of full label chains over spans present in both trees, isolating
// labeling quality from structure quality.
inline double label_accuracy(std::span<const ParseTree> pred, std::span<const ParseTree> gold) {
  detail::check_aligned(pred, gold);
  std::int64_t common = 0;
  std::int64_t matching = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const LabeledSpanMap p = labeled_spans_of(pred[i]);
    const LabeledSpanMap g = labeled_spans_of(gold[i]);
    for (const auto& [span, chain] : p) {
      auto it = g.find(span);
      if (it == g.end()) continue;
      ++common;
      if (it->second == chain) ++matching;
    }
  }
  return common > 0 ? static_cast<double>(matching) / static_cast<double>(common) : 0.0;
}

// Competition ranks (1224 style): equal scores share a rank.
inline std::vector<int> ranks_descending(std::span<const double> scores) {
  std::vector<int> ranks(scores.size(), 1);
  for (std::size_t i = 0; i < scores.size(); ++i)
    for (std::size_t j = 0; j < scores.size(); ++j)
      if (scores[j] > scores[i]) ++ranks[i];
  return ranks;
}

struct ParserRankingEntry {
  std::string parser;
  double structure_f1 = 0.0;
  double label_accuracy = 0.0;
  double structure_weight = 0.0;
  double label_weight = 0.0;
  int rank_by_structure_f1 = 0;
  int rank_by_structure_weight = 0;
  int rank_by_label_accuracy = 0;
  int rank_by_label_weight = 0;
};

struct RankingTable {
  std::vector<ParserRankingEntry> entries;
  bool structure_rankings_match = false;
  bool label_rankings_match = false;
};

// Compares how the estimated weights order the parsers against how their
// gold-truth scores order them.
inline RankingTable rank_parsers(const Corpus& corpus, std::span<const ParseTree> gold,
                                 const ParserWeights& weights) {
  const std::size_t p = corpus.parser_count();
  if (gold.size() != corpus.sentence_count())
    raise(ErrorCode::length_mismatch, "one gold tree per sentence required");
  if (weights.structure.size() != p || weights.label.size() != p)
    raise(ErrorCode::invalid_argument, "one weight pair per parser required");

  std::vector<double> f1(p, 0.0);
  std::vector<double> acc(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    std::vector<ParseTree> trees;
    trees.reserve(corpus.sentence_count());
    for (const SentenceBundle& bundle : corpus.bundles) trees.push_back(bundle.trees[k]);
    f1[k] = eval_structure(trees, gold).f1;
    acc[k] = label_accuracy(trees, gold);
  }

  const std::vector<int> rank_f1 = ranks_descending(f1);
  const std::vector<int> rank_ws = ranks_descending(weights.structure);
  const std::vector<int> rank_acc = ranks_descending(acc);
  const std::vector<int> rank_wl = ranks_descending(weights.label);

  RankingTable table;
  table.entries.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    table.entries.push_back(ParserRankingEntry{corpus.parser_names[k], f1[k], acc[k],
                                               weights.structure[k], weights.label[k], rank_f1[k],
                                               rank_ws[k], rank_acc[k], rank_wl[k]});
  }
  table.structure_rankings_match = rank_f1 == rank_ws;
  table.label_rankings_match = rank_acc == rank_wl;
  return table;
}

}  // namespace treeagg
