#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/cluster_set.hpp"
#include "treeagg/error.hpp"
#include "treeagg/span.hpp"

namespace treeagg {

struct Token {
  std::int32_t index = 0;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

// A rooted, ordered, labeled tree over one sentence. Nodes are stored flat
// in preorder (node 0 is the root, children preserve surface order), so two
// structurally equal trees compare equal member-wise.
//
// A child is either another node or a bare token. In well-formed treebank
// trees every token sits under a preterminal (a node whose only child is
// that token and whose label is the POS tag). Bare token children of wider
// nodes arise only when a tree is rebuilt from a cluster set that lacks a
// singleton span for some token.
class ParseTree {
 public:
  struct Child {
    enum class Kind : std::uint8_t { node, token };
    Kind kind = Kind::node;
    std::int32_t index = 0;  // node id or token index

    friend bool operator==(const Child&, const Child&) = default;
  };

  struct Node {
    std::string label;
    Span span;
    std::vector<Child> children;

    friend bool operator==(const Node&, const Node&) = default;
  };

  ParseTree(std::vector<Token> tokens, std::vector<Node> nodes)
      : tokens_(std::move(tokens)), nodes_(std::move(nodes)) {
    validate();
  }

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& root() const { return nodes_.front(); }
  std::int32_t token_count() const noexcept { return static_cast<std::int32_t>(tokens_.size()); }
  Span root_span() const noexcept { return nodes_.front().span; }

  bool is_preterminal(const Node& n) const noexcept {
    return n.children.size() == 1 && n.children.front().kind == Child::Kind::token;
  }

  std::vector<std::string> token_texts() const {
    std::vector<std::string> out;
    out.reserve(tokens_.size());
    for (const Token& t : tokens_) out.push_back(t.text);
    return out;
  }

  friend bool operator==(const ParseTree&, const ParseTree&) = default;

 private:
  void validate() const {
    if (tokens_.empty()) raise(ErrorCode::invalid_argument, "tree over an empty sentence");
    if (nodes_.empty()) raise(ErrorCode::invalid_argument, "tree without nodes");
    const std::int32_t n = token_count();
    for (std::int32_t i = 0; i < n; ++i) {
      if (tokens_[static_cast<std::size_t>(i)].index != i)
        raise(ErrorCode::invalid_argument, "token indices must run 0..n-1");
    }
    if (nodes_.front().span != Span{0, n})
      raise(ErrorCode::invalid_argument, "root span must cover the whole sentence");
    // Walk from the root: ids must come out in preorder, children must tile
    // the parent span exactly, and every node needs at least one child.
    std::int32_t next_id = 0;
    check_node(0, &next_id);
    if (next_id != static_cast<std::int32_t>(nodes_.size()))
      raise(ErrorCode::invalid_argument, "unreachable nodes in tree");
  }

  void check_node(std::int32_t id, std::int32_t* next_id) const {
    if (id != *next_id) raise(ErrorCode::invalid_argument, "nodes must be stored in preorder");
    ++*next_id;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.children.empty())
      raise(ErrorCode::invalid_argument, "node '" + node.label + "' has no children");
    std::int32_t pos = node.span.start;
    for (const Child& child : node.children) {
      if (child.kind == Child::Kind::token) {
        if (child.index != pos)
          raise(ErrorCode::invalid_argument, "token child out of order");
        ++pos;
      } else {
        if (child.index < 0 || child.index >= static_cast<std::int32_t>(nodes_.size()))
          raise(ErrorCode::invalid_argument, "child node id out of range");
        const Node& sub = nodes_[static_cast<std::size_t>(child.index)];
        if (sub.span.start != pos || sub.span.end <= sub.span.start)
          raise(ErrorCode::invalid_argument, "child spans must tile the parent span");
        check_node(child.index, next_id);
        pos = sub.span.end;
      }
    }
    if (pos != node.span.end)
      raise(ErrorCode::invalid_argument, "children do not cover node span");
  }

  std::vector<Token> tokens_;
  std::vector<Node> nodes_;
};

// Ordered list of node labels sharing one span, topmost first. Length > 1
// encodes a unary chain.
using LabelChain = std::vector<std::string>;
using LabeledSpanMap = std::map<Span, LabelChain>;

// Distinct node spans of the tree. Singleton spans are dropped unless
// `include_preterminals` is set; the root span is always kept. Unary chains
// contribute their shared span once.
inline ClusterSet clusters_of(const ParseTree& tree, bool include_preterminals) {
  std::vector<Span> spans;
  spans.reserve(tree.nodes().size());
  const Span root = tree.root_span();
  for (const ParseTree::Node& node : tree.nodes()) {
    if (include_preterminals || node.span.length() > 1 || node.span == root)
      spans.push_back(node.span);
  }
  return ClusterSet::of(std::move(spans));
}

// Label chain for every distinct node span. Preorder traversal guarantees
// chains list ancestors before descendants.
inline LabeledSpanMap labeled_spans_of(const ParseTree& tree) {
  LabeledSpanMap chains;
  for (const ParseTree::Node& node : tree.nodes()) chains[node.span].push_back(node.label);
  return chains;
}

namespace detail {

struct SpanNesting {
  std::vector<Span> spans;                           // sorted (start asc, end desc)
  std::vector<std::vector<std::size_t>> child_idx;   // nesting children, surface order
  std::vector<std::size_t> roots;                    // top-level spans
};

// Orders spans outermost-first and derives the nesting forest. Rejects
// properly overlapping pairs.
inline SpanNesting nest_spans(const ClusterSet& clusters) {
  SpanNesting nest;
  nest.spans = clusters.spans();
  std::sort(nest.spans.begin(), nest.spans.end(), [](const Span& a, const Span& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end > b.end;
  });
  nest.child_idx.resize(nest.spans.size());
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < nest.spans.size(); ++i) {
    const Span& s = nest.spans[i];
    while (!stack.empty() && nest.spans[stack.back()].end <= s.start) stack.pop_back();
    if (!stack.empty()) {
      const Span& top = nest.spans[stack.back()];
      if (s.end > top.end)
        raise(ErrorCode::incompatible_clusters,
              "clusters " + to_string(top) + " and " + to_string(s) + " overlap");
      nest.child_idx[stack.back()].push_back(i);
    } else {
      nest.roots.push_back(i);
    }
    stack.push_back(i);
  }
  return nest;
}

}  // namespace detail

// Rebuilds the unique tree whose node spans equal `clusters`. A span whose
// chain has m labels expands into m nested nodes. Tokens with no singleton
// span attach directly under the smallest containing span.
inline ParseTree tree_from_clusters(const ClusterSet& clusters, const LabeledSpanMap& labels,
                                    std::vector<Token> tokens) {
  const std::int32_t n = static_cast<std::int32_t>(tokens.size());
  if (n == 0) raise(ErrorCode::invalid_argument, "cannot build a tree over an empty sentence");
  if (!clusters.contains(Span{0, n}))
    raise(ErrorCode::missing_root, "cluster set lacks the root span [0," + std::to_string(n) + ")");
  for (const Span& s : clusters) {
    if (s.start < 0 || s.end > n || s.start >= s.end)
      raise(ErrorCode::invalid_argument, "cluster " + to_string(s) + " out of sentence range");
  }

  detail::SpanNesting nest = detail::nest_spans(clusters);
  std::vector<ParseTree::Node> nodes;
  nodes.reserve(clusters.size() + 4);

  // Emits the chain of nodes for span index i, returns the outermost id.
  auto emit = [&](auto&& self, std::size_t i) -> std::int32_t {
    const Span& span = nest.spans[i];
    auto it = labels.find(span);
    if (it == labels.end() || it->second.empty())
      raise(ErrorCode::missing_label, "no label for cluster " + to_string(span));
    const LabelChain& chain = it->second;

    const std::int32_t outer_id = static_cast<std::int32_t>(nodes.size());
    for (const std::string& label : chain) {
      std::int32_t id = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(ParseTree::Node{label, span, {}});
      if (id != outer_id)
        nodes[static_cast<std::size_t>(id) - 1].children.push_back(
            ParseTree::Child{ParseTree::Child::Kind::node, id});
    }

    // Fill the innermost node: nested spans in surface order, bare tokens
    // in the gaps.
    std::vector<ParseTree::Child> children;
    std::int32_t pos = span.start;
    for (std::size_t child : nest.child_idx[i]) {
      const Span& cs = nest.spans[child];
      while (pos < cs.start) {
        children.push_back(ParseTree::Child{ParseTree::Child::Kind::token, pos});
        ++pos;
      }
      std::int32_t child_id = self(self, child);
      children.push_back(ParseTree::Child{ParseTree::Child::Kind::node, child_id});
      pos = cs.end;
    }
    while (pos < span.end) {
      children.push_back(ParseTree::Child{ParseTree::Child::Kind::token, pos});
      ++pos;
    }
    nodes[static_cast<std::size_t>(outer_id) + chain.size() - 1].children = std::move(children);
    return outer_id;
  };

  // The root span sorts first, so the forest has exactly one top-level span.
  emit(emit, nest.roots.front());
  return ParseTree(std::move(tokens), std::move(nodes));
}

}  // namespace treeagg
