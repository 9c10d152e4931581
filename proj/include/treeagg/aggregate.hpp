#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

struct AggregateOptions {
  bool include_preterminals = true;
  // Relative tolerance when classifying a support value against half of the
  // total weight. Exact equality is only reliable with uniform weights.
  double tie_rel_tol = 1e-9;
};

// Union of the parsers' cluster sets with the weighted support of each span.
struct CandidateClusters {
  struct Entry {
    Span span;
    double support = 0.0;
  };
  std::vector<Entry> entries;  // sorted by span
  double total_weight = 0.0;
};

inline CandidateClusters candidate_clusters(std::span<const ClusterSet> parser_clusters,
                                            std::span<const double> weights) {
  if (parser_clusters.size() != weights.size())
    raise(ErrorCode::invalid_argument, "one weight per parser required");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) raise(ErrorCode::invalid_argument, "weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) raise(ErrorCode::zero_total_weight, "total parser weight must be positive");

  std::unordered_map<Span, double, SpanHash> support;
  for (std::size_t k = 0; k < parser_clusters.size(); ++k) {
    for (const Span& s : parser_clusters[k]) support[s] += weights[k];
  }
  CandidateClusters result;
  result.total_weight = total;
  result.entries.reserve(support.size());
  for (const auto& [span, value] : support)
    result.entries.push_back(CandidateClusters::Entry{span, value});
  std::sort(result.entries.begin(), result.entries.end(),
            [](const auto& a, const auto& b) { return a.span < b.span; });
  return result;
}

inline CandidateClusters candidate_clusters(const SentenceBundle& bundle,
                                            std::span<const double> weights,
                                            const AggregateOptions& options = {}) {
  std::vector<ClusterSet> sets;
  sets.reserve(bundle.trees.size());
  for (const ParseTree& tree : bundle.trees)
    sets.push_back(clusters_of(tree, options.include_preterminals));
  return candidate_clusters(sets, weights);
}

namespace detail {

enum class SupportClass { below, at_half, above };

inline SupportClass classify_support(double support, double total, double rel_tol) {
  const double half = 0.5 * total;
  const double scale = std::max(support, half);
  if (std::abs(support - half) <= rel_tol * scale) return SupportClass::at_half;
  return support > half ? SupportClass::above : SupportClass::below;
}

}  // namespace detail

// Candidates whose support sits exactly at half of the total weight and that
// are still compatible with every already-kept span. Majority spans rule out
// any span incompatible with them, so such ties can never be added.
inline std::vector<Span> exact_tie_set(const CandidateClusters& candidates, const ClusterSet& kept,
                                       double tie_rel_tol = 1e-9) {
  std::vector<Span> ties;
  for (const auto& entry : candidates.entries) {
    if (detail::classify_support(entry.support, candidates.total_weight, tie_rel_tol) !=
        detail::SupportClass::at_half)
      continue;
    bool ok = true;
    for (const Span& k : kept) {
      if (!compatible(entry.span, k)) {
        ok = false;
        break;
      }
    }
    if (ok) ties.push_back(entry.span);
  }
  return ties;
}

// Graph over tie spans with an edge between every incompatible pair. Nodes
// are held in preference order (higher support, then smaller start, then
// smaller end) so downstream tie-breaking is deterministic.
struct IncompatibilityGraph {
  std::vector<Span> nodes;
  std::vector<double> support;
  std::vector<std::vector<std::int32_t>> adjacency;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline IncompatibilityGraph incompatibility_graph(std::vector<Span> spans,
                                                  std::vector<double> support) {
  IncompatibilityGraph g;
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (support[a] != support[b]) return support[a] > support[b];
    return spans[a] < spans[b];
  });
  g.nodes.reserve(spans.size());
  g.support.reserve(spans.size());
  for (std::size_t idx : order) {
    g.nodes.push_back(spans[idx]);
    g.support.push_back(support[idx]);
  }
  g.adjacency.assign(g.nodes.size(), {});
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
      if (!compatible(g.nodes[a], g.nodes[b])) {
        g.adjacency[a].push_back(static_cast<std::int32_t>(b));
        g.adjacency[b].push_back(static_cast<std::int32_t>(a));
      }
    }
  }
  return g;
}

namespace detail {

// Exhaustive branch and bound, used when the graph is not two-colorable.
// Vertices are tried in preference order with "include" first, so the first
// maximum found is also the preferred one.
inline std::vector<std::int32_t> exact_mis(const IncompatibilityGraph& g) {
  const std::int32_t n = static_cast<std::int32_t>(g.size());
  std::vector<std::int32_t> best;
  std::vector<std::int32_t> chosen;
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  auto recurse = [&](auto&& self, std::int32_t v) -> void {
    if (v == n) {
      if (chosen.size() > best.size()) best = chosen;
      return;
    }
    if (chosen.size() + static_cast<std::size_t>(n - v) <= best.size()) return;
    if (!blocked[static_cast<std::size_t>(v)]) {
      chosen.push_back(v);
      std::vector<std::int32_t> newly_blocked;
      for (std::int32_t u : g.adjacency[static_cast<std::size_t>(v)]) {
        if (u > v && !blocked[static_cast<std::size_t>(u)]) {
          blocked[static_cast<std::size_t>(u)] = 1;
          newly_blocked.push_back(u);
        }
      }
      self(self, v + 1);
      for (std::int32_t u : newly_blocked) blocked[static_cast<std::size_t>(u)] = 0;
      chosen.pop_back();
    }
    self(self, v + 1);
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace detail

// Maximum-cardinality set of pairwise compatible tie spans. The graph is
// two-colored (it is expected to be bipartite), a maximum matching is built
// with augmenting paths, and the complement of the matching-derived minimum
// vertex cover is returned. Non-bipartite graphs, which can only appear
// through floating-point tie artifacts, fall back to exact search.
inline std::vector<Span> max_independent_set(const IncompatibilityGraph& g) {
  const std::int32_t n = static_cast<std::int32_t>(g.size());
  if (n == 0) return {};

  // Two-color components in preference order; each component's most
  // preferred vertex lands on the side the cover construction spares.
  constexpr std::int8_t kRight = 1;
  constexpr std::int8_t kLeft = 0;
  std::vector<std::int8_t> color(static_cast<std::size_t>(n), -1);
  bool bipartite = true;
  for (std::int32_t s = 0; s < n && bipartite; ++s) {
    if (color[static_cast<std::size_t>(s)] != -1) continue;
    color[static_cast<std::size_t>(s)] = kRight;
    std::queue<std::int32_t> queue;
    queue.push(s);
    while (!queue.empty() && bipartite) {
      const std::int32_t v = queue.front();
      queue.pop();
      for (std::int32_t u : g.adjacency[static_cast<std::size_t>(v)]) {
        if (color[static_cast<std::size_t>(u)] == -1) {
          color[static_cast<std::size_t>(u)] = static_cast<std::int8_t>(
              1 - color[static_cast<std::size_t>(v)]);
          queue.push(u);
        } else if (color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)]) {
          bipartite = false;
          break;
        }
      }
    }
  }

  std::vector<std::int32_t> picked;
  if (!bipartite) {
    picked = detail::exact_mis(g);
  } else {
    // Kuhn's augmenting paths from the left side, vertices and adjacency in
    // preference order.
    std::vector<std::int32_t> match(static_cast<std::size_t>(n), -1);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    auto augment = [&](auto&& self, std::int32_t v) -> bool {
      for (std::int32_t u : g.adjacency[static_cast<std::size_t>(v)]) {
        if (visited[static_cast<std::size_t>(u)]) continue;
        visited[static_cast<std::size_t>(u)] = 1;
        if (match[static_cast<std::size_t>(u)] == -1 ||
            self(self, match[static_cast<std::size_t>(u)])) {
          match[static_cast<std::size_t>(u)] = v;
          match[static_cast<std::size_t>(v)] = u;
          return true;
        }
      }
      return false;
    };
    for (std::int32_t v = 0; v < n; ++v) {
      if (color[static_cast<std::size_t>(v)] == kLeft && match[static_cast<std::size_t>(v)] == -1) {
        std::fill(visited.begin(), visited.end(), 0);
        augment(augment, v);
      }
    }
    // Alternating reachability from unmatched left vertices; the independent
    // set is (left ∩ reached) ∪ (right \ reached).
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::queue<std::int32_t> queue;
    for (std::int32_t v = 0; v < n; ++v) {
      if (color[static_cast<std::size_t>(v)] == kLeft && match[static_cast<std::size_t>(v)] == -1) {
        reached[static_cast<std::size_t>(v)] = 1;
        queue.push(v);
      }
    }
    while (!queue.empty()) {
      const std::int32_t v = queue.front();
      queue.pop();
      for (std::int32_t u : g.adjacency[static_cast<std::size_t>(v)]) {
        if (reached[static_cast<std::size_t>(u)]) continue;
        reached[static_cast<std::size_t>(u)] = 1;
        const std::int32_t w = match[static_cast<std::size_t>(u)];
        if (w != -1 && !reached[static_cast<std::size_t>(w)]) {
          reached[static_cast<std::size_t>(w)] = 1;
          queue.push(w);
        }
      }
    }
    for (std::int32_t v = 0; v < n; ++v) {
      const bool left = color[static_cast<std::size_t>(v)] == kLeft;
      if ((left && reached[static_cast<std::size_t>(v)]) ||
          (!left && !reached[static_cast<std::size_t>(v)]))
        picked.push_back(v);
    }
  }

  std::vector<Span> result;
  result.reserve(picked.size());
  for (std::int32_t v : picked) result.push_back(g.nodes[static_cast<std::size_t>(v)]);
  return result;
}

// Optimal aggregated cluster set for one sentence: every candidate with more
// than half of the total weighted support, plus a maximum independent set of
// the incompatibility graph over candidates at exactly half. The result is
// pairwise compatible and always contains the root span.
inline ClusterSet aggregate_structure(std::span<const ClusterSet> parser_clusters,
                                      std::span<const double> weights,
                                      const AggregateOptions& options = {}) {
  const CandidateClusters candidates = candidate_clusters(parser_clusters, weights);

  std::vector<Span> kept_spans;
  kept_spans.reserve(candidates.entries.size());
  for (const auto& entry : candidates.entries) {
    if (detail::classify_support(entry.support, candidates.total_weight, options.tie_rel_tol) ==
        detail::SupportClass::above)
      kept_spans.push_back(entry.span);
  }
  ClusterSet kept = ClusterSet::of(std::move(kept_spans));

  std::vector<Span> ties = exact_tie_set(candidates, kept, options.tie_rel_tol);
  if (!ties.empty()) {
    std::vector<double> tie_support;
    tie_support.reserve(ties.size());
    for (const Span& s : ties) {
      auto it = std::lower_bound(
          candidates.entries.begin(), candidates.entries.end(), s,
          [](const CandidateClusters::Entry& e, const Span& span) { return e.span < span; });
      tie_support.push_back(it->support);
    }
    std::vector<Span> chosen =
        max_independent_set(incompatibility_graph(std::move(ties), std::move(tie_support)));
    std::vector<Span> merged = kept.spans();
    merged.insert(merged.end(), chosen.begin(), chosen.end());
    return ClusterSet::of(std::move(merged));
  }
  return kept;
}

inline ClusterSet aggregate_structure(const SentenceBundle& bundle, std::span<const double> weights,
                                      const AggregateOptions& options = {}) {
  std::vector<ClusterSet> sets;
  sets.reserve(bundle.trees.size());
  for (const ParseTree& tree : bundle.trees)
    sets.push_back(clusters_of(tree, options.include_preterminals));
  return aggregate_structure(sets, weights, options);
}

}  // namespace treeagg
