#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

struct BracketReadOptions {
  // Nodes written as "( ...)" with no label: reject by default, or relabel.
  bool allow_empty_labels = false;
  std::string empty_label_substitute = "X";
  // Cut functional-tag suffixes at the first '-' or '=' ("NP-SBJ" -> "NP").
  // "-LRB-"/"-RRB-" and labels that would become empty are left alone.
  bool strip_label_suffixes = false;
};

namespace detail {

inline std::string normalize_label(std::string label, const BracketReadOptions& options) {
  if (!options.strip_label_suffixes) return label;
  if (label == "-LRB-" || label == "-RRB-") return label;
  std::size_t cut = label.find_first_of("-=");
  if (cut == std::string::npos || cut == 0) return label;
  label.resize(cut);
  return label;
}

// Parse-time node; children reference an arena so the tree can be built
// without recursion, then flattened to preorder.
struct RawChild {
  std::int32_t node = -1;  // arena index, or -1 for a bare token
  std::string token;
};
struct RawNode {
  std::string label;
  std::vector<RawChild> children;
};

}  // namespace detail

// Reads one bracketed tree, e.g. "(S (NP (DT the) (NN dog)) (VP (VBZ runs)))".
// An outer "(ROOT ...)", "(TOP ...)" or bare "((...))" wrapper around a single
// subtree is stripped. Escaped bracket tokens (-LRB-, -RRB-) stay verbatim.
inline ParseTree parse_bracketed(std::string_view text, const BracketReadOptions& options = {}) {
  using detail::RawChild;
  using detail::RawNode;

  std::vector<RawNode> arena;
  std::vector<std::int32_t> stack;  // open nodes
  std::int32_t top_level = -1;

  std::size_t i = 0;
  const std::size_t size = text.size();
  auto skip_ws = [&] {
    while (i < size && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n'))
      ++i;
  };
  auto read_atom = [&] {
    std::size_t begin = i;
    while (i < size && text[i] != '(' && text[i] != ')' && text[i] != ' ' && text[i] != '\t' &&
           text[i] != '\r' && text[i] != '\n')
      ++i;
    return std::string(text.substr(begin, i - begin));
  };

  while (true) {
    skip_ws();
    if (i >= size) break;
    const char c = text[i];
    if (c == '(') {
      ++i;
      skip_ws();
      std::string label;
      if (i < size && text[i] != '(' && text[i] != ')') label = read_atom();
      if (label.empty() && !stack.empty()) {
        // Inner unlabeled node; only the outermost wrapper may drop its label.
        if (!options.allow_empty_labels)
          raise(ErrorCode::node_without_label, "node without a label at position " +
                                                   std::to_string(i));
        label = options.empty_label_substitute;
      }
      arena.push_back(RawNode{detail::normalize_label(std::move(label), options), {}});
      const std::int32_t id = static_cast<std::int32_t>(arena.size()) - 1;
      if (!stack.empty()) arena[static_cast<std::size_t>(stack.back())].children.push_back(RawChild{id, {}});
      stack.push_back(id);
    } else if (c == ')') {
      ++i;
      if (stack.empty())
        raise(ErrorCode::unbalanced_brackets, "unmatched ')' at position " + std::to_string(i));
      const std::int32_t id = stack.back();
      stack.pop_back();
      if (arena[static_cast<std::size_t>(id)].children.empty())
        raise(ErrorCode::empty_tree,
              "node '" + arena[static_cast<std::size_t>(id)].label + "' has no children");
      if (stack.empty()) {
        if (top_level >= 0)
          raise(ErrorCode::unbalanced_brackets, "more than one tree on the line");
        top_level = id;
      }
    } else {
      std::string atom = read_atom();
      if (stack.empty())
        raise(ErrorCode::unbalanced_brackets, "token '" + atom + "' outside any tree");
      arena[static_cast<std::size_t>(stack.back())].children.push_back(RawChild{-1, std::move(atom)});
    }
  }
  if (!stack.empty()) raise(ErrorCode::unbalanced_brackets, "unclosed '(' at end of line");
  if (top_level < 0) raise(ErrorCode::empty_tree, "no tree found on the line");

  // Strip wrappers: an outermost ROOT/TOP/unlabeled node with one subtree.
  while (true) {
    RawNode& node = arena[static_cast<std::size_t>(top_level)];
    const bool wrapper_label = node.label.empty() || node.label == "ROOT" || node.label == "TOP";
    if (wrapper_label && node.children.size() == 1 && node.children.front().node >= 0) {
      top_level = node.children.front().node;
      continue;
    }
    break;
  }
  if (arena[static_cast<std::size_t>(top_level)].label.empty()) {
    if (!options.allow_empty_labels)
      raise(ErrorCode::node_without_label, "root node without a label");
    arena[static_cast<std::size_t>(top_level)].label = options.empty_label_substitute;
  }

  // Flatten to preorder, assigning token indices left to right.
  std::vector<Token> tokens;
  std::vector<ParseTree::Node> nodes;
  auto flatten = [&](auto&& self, std::int32_t raw_id) -> std::int32_t {
    const RawNode& raw = arena[static_cast<std::size_t>(raw_id)];
    const std::int32_t id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(ParseTree::Node{raw.label, {}, {}});
    const std::int32_t begin = static_cast<std::int32_t>(tokens.size());
    std::vector<ParseTree::Child> children;
    children.reserve(raw.children.size());
    for (const RawChild& child : raw.children) {
      if (child.node < 0) {
        const std::int32_t tok = static_cast<std::int32_t>(tokens.size());
        tokens.push_back(Token{tok, child.token});
        children.push_back(ParseTree::Child{ParseTree::Child::Kind::token, tok});
      } else {
        children.push_back(
            ParseTree::Child{ParseTree::Child::Kind::node, self(self, child.node)});
      }
    }
    nodes[static_cast<std::size_t>(id)].span = Span{begin, static_cast<std::int32_t>(tokens.size())};
    nodes[static_cast<std::size_t>(id)].children = std::move(children);
    return id;
  };
  flatten(flatten, top_level);
  return ParseTree(std::move(tokens), std::move(nodes));
}

// Canonical single-line form: "(LABEL child child ...)" with single spaces.
// parse_bracketed(write_bracketed(t)) == t.
inline std::string write_bracketed(const ParseTree& tree) {
  std::string out;
  out.reserve(tree.nodes().size() * 8 + tree.tokens().size() * 6);
  auto emit = [&](auto&& self, std::int32_t id) -> void {
    const ParseTree::Node& node = tree.node(id);
    out += '(';
    out += node.label;
    for (const ParseTree::Child& child : node.children) {
      out += ' ';
      if (child.kind == ParseTree::Child::Kind::token)
        out += tree.tokens()[static_cast<std::size_t>(child.index)].text;
      else
        self(self, child.index);
    }
    out += ')';
  };
  emit(emit, 0);
  return out;
}

}  // namespace treeagg
