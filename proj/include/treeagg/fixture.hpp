#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/corpus.hpp"
#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

// Deterministic synthetic corpus: random gold trees plus one noisy copy per
// simulated parser. Structure noise deletes a node (children spliced up) or
// shifts a child across a sibling boundary; label noise flips a node label
// within its inventory. Everything is a pure function of the seed.
struct FixtureConfig {
  std::uint64_t seed = 1;
  std::int32_t sentences = 10;
  std::int32_t min_tokens = 3;
  std::int32_t max_tokens = 12;
  std::vector<double> noise_rates;  // one per simulated parser, each in [0, 1)
};

struct Fixture {
  std::vector<ParseTree> gold;
  Corpus corpus;
};

namespace detail {

inline std::int32_t rand_int(std::mt19937_64& rng, std::int32_t lo, std::int32_t hi) {
  return lo + static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool rand_chance(std::mt19937_64& rng, double prob) { return rand_unit(rng) < prob; }

inline const std::array<const char*, 8>& phrase_labels() {
  static const std::array<const char*, 8> labels = {"S",    "NP",   "VP", "PP",
                                                    "ADJP", "ADVP", "SBAR", "QP"};
  return labels;
}

inline const std::array<const char*, 8>& pos_labels() {
  static const std::array<const char*, 8> labels = {"NN", "VB", "DT", "JJ",
                                                    "IN", "RB", "PRP", "CD"};
  return labels;
}

inline const std::array<const char*, 16>& fixture_vocab() {
  static const std::array<const char*, 16> words = {
      "time", "flies", "like",  "an",    "arrow", "the",  "dog",  "barks",
      "green", "ideas", "sleep", "stocks", "fell", "on",   "news", "banks"};
  return words;
}

template <std::size_t N>
std::string pick_label(std::mt19937_64& rng, const std::array<const char*, N>& inventory) {
  return inventory[static_cast<std::size_t>(rand_int(rng, 0, static_cast<std::int32_t>(N) - 1))];
}

template <std::size_t N>
std::string flip_label(std::mt19937_64& rng, const std::array<const char*, N>& inventory,
                       const std::string& current) {
  std::string candidate = pick_label(rng, inventory);
  while (candidate == current) candidate = pick_label(rng, inventory);
  return candidate;
}

// Mutable arena tree used while building and corrupting.
struct MutNode {
  std::string label;
  std::vector<std::int32_t> kids;
  std::int32_t token = -1;   // >= 0 marks a preterminal
  std::int32_t parent = -1;
  bool alive = true;
};

struct MutTree {
  std::vector<MutNode> nodes;
  std::int32_t root = -1;

  std::int32_t add(std::string label, std::int32_t token = -1) {
    nodes.push_back(MutNode{std::move(label), {}, token, -1, true});
    return static_cast<std::int32_t>(nodes.size()) - 1;
  }
  MutNode& at(std::int32_t id) { return nodes[static_cast<std::size_t>(id)]; }
  const MutNode& at(std::int32_t id) const { return nodes[static_cast<std::size_t>(id)]; }

  void attach(std::int32_t parent, std::int32_t child) {
    at(parent).kids.push_back(child);
    at(child).parent = parent;
  }
};

inline std::int32_t build_gold_node(MutTree& tree, std::mt19937_64& rng, std::int32_t lo,
                                    std::int32_t hi) {
  if (hi - lo == 1) {
    std::int32_t node = tree.add(pick_label(rng, pos_labels()), lo);
    if (rand_chance(rng, 0.15)) {
      std::int32_t wrapper = tree.add(pick_label(rng, phrase_labels()));
      tree.attach(wrapper, node);
      node = wrapper;
    }
    return node;
  }
  const std::int32_t width = hi - lo;
  std::int32_t parts = 2;
  if (width >= 3 && rand_chance(rng, 0.3)) parts = 3;
  // Distinct interior cut points.
  std::vector<std::int32_t> cuts;
  while (static_cast<std::int32_t>(cuts.size()) < parts - 1) {
    const std::int32_t cut = rand_int(rng, lo + 1, hi - 1);
    if (std::find(cuts.begin(), cuts.end(), cut) == cuts.end()) cuts.push_back(cut);
  }
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  const std::int32_t node = tree.add(pick_label(rng, phrase_labels()));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    tree.attach(node, build_gold_node(tree, rng, cuts[i], cuts[i + 1]));
  if (rand_chance(rng, 0.1)) {
    std::int32_t wrapper = tree.add(pick_label(rng, phrase_labels()));
    tree.attach(wrapper, node);
    return wrapper;
  }
  return node;
}

inline void splice_out(MutTree& tree, std::int32_t id) {
  MutNode& node = tree.at(id);
  MutNode& parent = tree.at(node.parent);
  std::vector<std::int32_t> kids;
  kids.reserve(parent.kids.size() + node.kids.size());
  for (std::int32_t kid : parent.kids) {
    if (kid == id) {
      for (std::int32_t grand : node.kids) {
        kids.push_back(grand);
        tree.at(grand).parent = node.parent;
      }
    } else {
      kids.push_back(kid);
    }
  }
  parent.kids = std::move(kids);
  node.alive = false;
  node.kids.clear();
}

// Moves one child of `id` across the boundary to an adjacent internal
// sibling; falls back to deletion when no boundary can move.
inline void rotate_with_sibling(MutTree& tree, std::int32_t id) {
  MutNode& node = tree.at(id);
  MutNode& parent = tree.at(node.parent);
  const auto where = std::find(parent.kids.begin(), parent.kids.end(), id);
  const std::size_t index = static_cast<std::size_t>(where - parent.kids.begin());
  if (node.kids.size() >= 2) {
    if (index + 1 < parent.kids.size()) {
      MutNode& sibling = tree.at(parent.kids[index + 1]);
      if (sibling.token < 0) {
        sibling.kids.insert(sibling.kids.begin(), node.kids.back());
        tree.at(node.kids.back()).parent = parent.kids[index + 1];
        node.kids.pop_back();
        return;
      }
    }
    if (index > 0) {
      MutNode& sibling = tree.at(parent.kids[index - 1]);
      if (sibling.token < 0) {
        sibling.kids.push_back(node.kids.front());
        tree.at(node.kids.front()).parent = parent.kids[index - 1];
        node.kids.erase(node.kids.begin());
        return;
      }
    }
  }
  splice_out(tree, id);
}

inline void corrupt(MutTree& tree, std::mt19937_64& rng, double rate) {
  // Snapshot of the gold-internal nodes; mutations never add internal nodes.
  std::vector<std::int32_t> internal;
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(tree.nodes.size()); ++id) {
    const MutNode& node = tree.at(id);
    if (node.token < 0 && id != tree.root) internal.push_back(id);
  }
  for (std::int32_t id : internal) {
    if (!rand_chance(rng, rate)) continue;
    if (!tree.at(id).alive) continue;
    if (rand_chance(rng, 0.5))
      splice_out(tree, id);
    else
      rotate_with_sibling(tree, id);
  }
  for (auto& node : tree.nodes) {
    if (!node.alive) continue;
    if (!rand_chance(rng, rate)) continue;
    node.label = node.token >= 0 ? flip_label(rng, pos_labels(), node.label)
                                 : flip_label(rng, phrase_labels(), node.label);
  }
}

inline ParseTree to_parse_tree(const MutTree& tree, std::vector<Token> tokens) {
  std::vector<ParseTree::Node> nodes;
  nodes.reserve(tree.nodes.size());
  std::int32_t pos = 0;
  auto emit = [&](auto&& self, std::int32_t mid) -> std::int32_t {
    const MutNode& src = tree.at(mid);
    const std::int32_t id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(ParseTree::Node{src.label, {}, {}});
    const std::int32_t begin = pos;
    std::vector<ParseTree::Child> children;
    if (src.token >= 0) {
      children.push_back(ParseTree::Child{ParseTree::Child::Kind::token, pos});
      ++pos;
    } else {
      children.reserve(src.kids.size());
      for (std::int32_t kid : src.kids)
        children.push_back(ParseTree::Child{ParseTree::Child::Kind::node, self(self, kid)});
    }
    nodes[static_cast<std::size_t>(id)].span = Span{begin, pos};
    nodes[static_cast<std::size_t>(id)].children = std::move(children);
    return id;
  };
  emit(emit, tree.root);
  return ParseTree(std::move(tokens), std::move(nodes));
}

}  // namespace detail

inline Fixture generate_corpus(const FixtureConfig& config) {
  if (config.sentences <= 0) raise(ErrorCode::invalid_argument, "sentence count must be positive");
  if (config.min_tokens < 1 || config.max_tokens < config.min_tokens)
    raise(ErrorCode::invalid_argument, "bad token length range");
  if (config.noise_rates.empty())
    raise(ErrorCode::invalid_argument, "at least one noise rate required");
  for (double rate : config.noise_rates) {
    if (rate < 0.0 || rate >= 1.0)
      raise(ErrorCode::invalid_argument, "noise rates must be in [0, 1)");
  }

  std::mt19937_64 rng(config.seed);
  const std::size_t p = config.noise_rates.size();

  Fixture fixture;
  fixture.corpus.parser_names.reserve(p);
  for (std::size_t k = 0; k < p; ++k)
    fixture.corpus.parser_names.push_back("parser" + std::to_string(k + 1));

  fixture.gold.reserve(static_cast<std::size_t>(config.sentences));
  fixture.corpus.bundles.reserve(static_cast<std::size_t>(config.sentences));
  for (std::int32_t i = 0; i < config.sentences; ++i) {
    const std::int32_t length = detail::rand_int(rng, config.min_tokens, config.max_tokens);
    std::vector<Token> tokens;
    tokens.reserve(static_cast<std::size_t>(length));
    for (std::int32_t t = 0; t < length; ++t)
      tokens.push_back(Token{t, detail::pick_label(rng, detail::fixture_vocab())});

    detail::MutTree gold_tree;
    gold_tree.root = detail::build_gold_node(gold_tree, rng, 0, length);
    fixture.gold.push_back(detail::to_parse_tree(gold_tree, tokens));

    SentenceBundle bundle;
    bundle.sentence_id = i;
    bundle.tokens = tokens;
    bundle.trees.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
      detail::MutTree noisy = gold_tree;
      detail::corrupt(noisy, rng, config.noise_rates[k]);
      bundle.trees.push_back(detail::to_parse_tree(noisy, tokens));
    }
    fixture.corpus.bundles.push_back(std::move(bundle));
  }
  return fixture;
}

}  // namespace treeagg
