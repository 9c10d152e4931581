#pragma once

// Test-only oracles, deliberately written as brute force over small inputs
// and kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/span.hpp"
#include "treeagg/tree.hpp"

namespace oracle {

using treeagg::ClusterSet;
using treeagg::Span;

// |a ∆ b| by quadratic scans, no hashing.
inline std::int64_t brute_rf(const ClusterSet& a, const ClusterSet& b) {
  std::int64_t in_union = 0;
  std::int64_t in_both = 0;
  std::vector<Span> all;
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  in_union = static_cast<std::int64_t>(all.size());
  for (const Span& s : a) {
    for (const Span& t : b) {
      if (s == t) {
        ++in_both;
        break;
      }
    }
  }
  return in_union - in_both;
}

inline bool pairwise_compatible(const std::vector<Span>& spans) {
  for (std::size_t i = 0; i < spans.size(); ++i)
    for (std::size_t j = i + 1; j < spans.size(); ++j)
      if (!treeagg::compatible(spans[i], spans[j])) return false;
  return true;
}

struct BruteAggregate {
  double min_objective = 0.0;
  std::size_t max_cardinality = 0;  // among minimizers
};

// Weighted symmetric-difference objective evaluated by direct scans.
inline double direct_objective(const std::vector<ClusterSet>& parser_sets,
                               const std::vector<double>& weights,
                               const std::vector<Span>& chosen) {
  double objective = 0.0;
  for (std::size_t k = 0; k < parser_sets.size(); ++k) {
    std::int64_t diff = 0;
    for (const Span& s : chosen)
      if (!parser_sets[k].contains(s)) ++diff;
    for (const Span& s : parser_sets[k])
      if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) ++diff;
    objective += weights[k] * static_cast<double>(diff);
  }
  return objective;
}

// Enumerates every pairwise-compatible subset of the candidate union (up to
// 64 candidates, conflicts tracked as bitmasks) and minimizes the weighted
// symmetric-difference objective. Adding span s to a set changes the
// objective by sum_k w_k (1 - 2 * [s in Clu_k]), so the objective is
// accumulated along the recursion.
inline BruteAggregate brute_best_aggregate(const std::vector<ClusterSet>& parser_sets,
                                           const std::vector<double>& weights) {
  std::vector<Span> candidates;
  for (const ClusterSet& set : parser_sets)
    candidates.insert(candidates.end(), set.begin(), set.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const std::size_t m = candidates.size();
  if (m > 64) throw std::runtime_error("oracle instance too large");

  double base = 0.0;  // objective of the empty set
  for (std::size_t k = 0; k < parser_sets.size(); ++k)
    base += weights[k] * static_cast<double>(parser_sets[k].size());
  std::vector<double> add_cost(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < parser_sets.size(); ++k)
      add_cost[i] += weights[k] * (parser_sets[k].contains(candidates[i]) ? -1.0 : 1.0);
  }
  std::vector<std::uint64_t> conflict(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && !treeagg::compatible(candidates[i], candidates[j]))
        conflict[i] |= std::uint64_t{1} << j;

  BruteAggregate best{base, 0};
  auto consider = [&](double objective, std::size_t cardinality) {
    const double eps = 1e-9 * (1.0 + std::abs(objective) + std::abs(best.min_objective));
    if (objective < best.min_objective - eps) {
      best.min_objective = objective;
      best.max_cardinality = cardinality;
    } else if (objective <= best.min_objective + eps) {
      best.max_cardinality = std::max(best.max_cardinality, cardinality);
    }
  };
  auto recurse = [&](auto&& self, std::size_t next, std::uint64_t chosen_mask, double objective,
                     std::size_t cardinality) -> void {
    if (next == m) {
      consider(objective, cardinality);
      return;
    }
    self(self, next + 1, chosen_mask, objective, cardinality);  // skip
    if ((conflict[next] & chosen_mask) == 0) {
      self(self, next + 1, chosen_mask | (std::uint64_t{1} << next), objective + add_cost[next],
           cardinality + 1);
    }
  };
  recurse(recurse, 0, 0, base, 0);
  return best;
}

// Maximum independent set size by bitmask enumeration; n <= 20.
inline std::size_t brute_mis_size(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::uint32_t> neighbor(n, 0);
  for (const auto& [a, b] : edges) {
    neighbor[static_cast<std::size_t>(a)] |= 1u << b;
    neighbor[static_cast<std::size_t>(b)] |= 1u << a;
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool independent = true;
    for (std::size_t v = 0; v < n && independent; ++v)
      if ((mask >> v) & 1u)
        if (neighbor[v] & mask) independent = false;
    if (independent)
      best = std::max(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

// DFS 2-coloring; true when the graph has no odd cycle.
inline bool is_bipartite(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> color(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::vector<int> stack{static_cast<int>(s)};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : adj[static_cast<std::size_t>(v)]) {
        if (color[static_cast<std::size_t>(u)] == -1) {
          color[static_cast<std::size_t>(u)] = 1 - color[static_cast<std::size_t>(v)];
          stack.push_back(u);
        } else if (color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

// Small random-tree builder independent of the library's fixture module.
// Produces a bare structure (every node labeled "X", POS "T") for oracle
// instances where labels do not matter.
inline std::int32_t random_tree_node(std::vector<treeagg::ParseTree::Node>& nodes,
                                     std::mt19937_64& rng, std::int32_t lo, std::int32_t hi) {
  const std::int32_t id = static_cast<std::int32_t>(nodes.size());
  if (hi - lo == 1) {
    nodes.push_back(treeagg::ParseTree::Node{
        "T", Span{lo, hi}, {treeagg::ParseTree::Child{treeagg::ParseTree::Child::Kind::token, lo}}});
    return id;
  }
  nodes.push_back(treeagg::ParseTree::Node{"X", Span{lo, hi}, {}});
  // Random binary split; occasionally a flat three-way split.
  std::vector<std::int32_t> cuts;
  const std::int32_t width = hi - lo;
  std::int32_t parts = (width >= 3 && rng() % 3 == 0) ? 3 : 2;
  while (static_cast<std::int32_t>(cuts.size()) < parts - 1) {
    const std::int32_t cut = lo + 1 + static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(width - 1));
    if (std::find(cuts.begin(), cuts.end(), cut) == cuts.end()) cuts.push_back(cut);
  }
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<treeagg::ParseTree::Child> children;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const std::int32_t child = random_tree_node(nodes, rng, cuts[i], cuts[i + 1]);
    children.push_back(treeagg::ParseTree::Child{treeagg::ParseTree::Child::Kind::node, child});
  }
  nodes[static_cast<std::size_t>(id)].children = std::move(children);
  return id;
}

inline treeagg::ParseTree random_tree(std::mt19937_64& rng, std::int32_t tokens) {
  std::vector<treeagg::Token> toks;
  for (std::int32_t t = 0; t < tokens; ++t) toks.push_back(treeagg::Token{t, "w" + std::to_string(t)});
  std::vector<treeagg::ParseTree::Node> nodes;
  random_tree_node(nodes, rng, 0, tokens);
  return treeagg::ParseTree(std::move(toks), std::move(nodes));
}

}  // namespace oracle
