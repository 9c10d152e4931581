#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "treeagg/bracketed.hpp"
#include "treeagg/error.hpp"
#include "treeagg/tree.hpp"

namespace treeagg {

// One sentence with the aligned trees of all parsers (index = parser id).
struct SentenceBundle {
  std::int32_t sentence_id = 0;
  std::vector<Token> tokens;
  std::vector<ParseTree> trees;

  std::size_t parser_count() const noexcept { return trees.size(); }
};

struct Corpus {
  std::vector<std::string> parser_names;
  std::vector<SentenceBundle> bundles;

  std::size_t parser_count() const noexcept { return parser_names.size(); }
  std::size_t sentence_count() const noexcept { return bundles.size(); }
};

struct SkippedSentence {
  std::int32_t sentence_id = 0;
  std::string parser;
  std::string reason;
};

struct CorpusLoadOptions {
  BracketReadOptions read;
  // Drop misaligned sentences and report them instead of failing.
  bool skip_misaligned = false;
  // Accept trees spanning several lines, delimited by bracket balance.
  bool multiline = false;
};

struct CorpusLoadResult {
  Corpus corpus;
  std::vector<SkippedSentence> skipped;
};

namespace detail {

inline std::vector<std::string> read_tree_lines(const std::string& path, bool multiline) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open '" + path + "'");
  std::vector<std::string> units;
  std::string line;
  std::string pending;
  int depth = 0;
  bool seen_open = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!multiline) {
      const bool blank = line.find_first_not_of(" \t") == std::string::npos;
      if (blank)
        raise(ErrorCode::empty_tree, path + ":" + std::to_string(line_no) + ": blank line");
      units.push_back(line);
      continue;
    }
    for (char c : line) {
      if (c == '(') {
        ++depth;
        seen_open = true;
      } else if (c == ')') {
        --depth;
      }
    }
    if (depth < 0)
      raise(ErrorCode::unbalanced_brackets,
            path + ":" + std::to_string(line_no) + ": unmatched ')'");
    pending += line;
    pending += '\n';
    if (seen_open && depth == 0) {
      units.push_back(pending);
      pending.clear();
      seen_open = false;
    }
  }
  if (multiline && seen_open)
    raise(ErrorCode::unbalanced_brackets, path + ": unclosed tree at end of file");
  if (units.empty()) raise(ErrorCode::empty_tree, path + ": no trees in file");
  return units;
}

}  // namespace detail

inline std::vector<ParseTree> read_bracketed_file(const std::string& path,
                                                  const CorpusLoadOptions& options = {}) {
  std::vector<std::string> units = detail::read_tree_lines(path, options.multiline);
  std::vector<ParseTree> trees;
  trees.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    try {
      trees.push_back(parse_bracketed(units[i], options.read));
    } catch (const Error& e) {
      raise(e.code(), path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return trees;
}

inline void write_bracketed_file(const std::string& path, const std::vector<ParseTree>& trees) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  for (const ParseTree& tree : trees) {
    out << write_bracketed(tree) << '\n';
  }
  if (!out) raise(ErrorCode::io_error, "write to '" + path + "' failed");
}

// Joins one file per parser into aligned per-sentence bundles. Files must
// have the same number of trees, and tree i of every file must yield the
// same token text sequence. Misaligned sentences either fail the load or,
// with skip_misaligned, are dropped and reported.
inline CorpusLoadResult load_corpus(const std::vector<std::string>& paths,
                                    std::vector<std::string> parser_names,
                                    const CorpusLoadOptions& options = {}) {
  if (paths.empty()) raise(ErrorCode::invalid_argument, "no input files");
  if (parser_names.size() != paths.size())
    raise(ErrorCode::invalid_argument, "one parser name per input file required");

  std::vector<std::vector<ParseTree>> per_parser;
  per_parser.reserve(paths.size());
  for (const std::string& path : paths) per_parser.push_back(read_bracketed_file(path, options));

  const std::size_t n = per_parser.front().size();
  for (std::size_t k = 1; k < per_parser.size(); ++k) {
    if (per_parser[k].size() != n)
      raise(ErrorCode::line_count_mismatch,
            "'" + paths[k] + "' has " + std::to_string(per_parser[k].size()) + " trees but '" +
                paths[0] + "' has " + std::to_string(n));
  }

  CorpusLoadResult result;
  result.corpus.parser_names = std::move(parser_names);
  result.corpus.bundles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::string> reference = per_parser[0][i].token_texts();
    std::size_t bad_parser = 0;
    bool aligned = true;
    for (std::size_t k = 1; k < per_parser.size(); ++k) {
      if (per_parser[k][i].token_texts() != reference) {
        aligned = false;
        bad_parser = k;
        break;
      }
    }
    if (!aligned) {
      const std::string reason = "tokenization differs from '" +
                                 result.corpus.parser_names[0] + "' (sentence " +
                                 std::to_string(i) + ")";
      if (!options.skip_misaligned)
        raise(ErrorCode::tokenization_mismatch,
              "sentence " + std::to_string(i) + ", parser '" +
                  result.corpus.parser_names[bad_parser] + "': " + reason);
      result.skipped.push_back(SkippedSentence{static_cast<std::int32_t>(i),
                                               result.corpus.parser_names[bad_parser], reason});
      continue;
    }
    SentenceBundle bundle;
    bundle.sentence_id = static_cast<std::int32_t>(i);
    bundle.tokens = per_parser[0][i].tokens();
    bundle.trees.reserve(per_parser.size());
    for (std::size_t k = 0; k < per_parser.size(); ++k) bundle.trees.push_back(per_parser[k][i]);
    result.corpus.bundles.push_back(std::move(bundle));
  }
  return result;
}

}  // namespace treeagg
