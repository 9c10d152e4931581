#pragma once

#include <stdexcept>
#include <string>

namespace treeagg {

enum class ErrorCode {
  io_error,
  unbalanced_brackets,
  empty_tree,
  node_without_label,
  line_count_mismatch,
  tokenization_mismatch,
  length_mismatch,
  incompatible_clusters,
  missing_root,
  missing_label,
  zero_total_weight,
  empty_corpus,
  invalid_argument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::unbalanced_brackets: return "unbalanced_brackets";
    case ErrorCode::empty_tree: return "empty_tree";
    case ErrorCode::node_without_label: return "node_without_label";
    case ErrorCode::line_count_mismatch: return "line_count_mismatch";
    case ErrorCode::tokenization_mismatch: return "tokenization_mismatch";
    case ErrorCode::length_mismatch: return "length_mismatch";
    case ErrorCode::incompatible_clusters: return "incompatible_clusters";
    case ErrorCode::missing_root: return "missing_root";
    case ErrorCode::missing_label: return "missing_label";
    case ErrorCode::zero_total_weight: return "zero_total_weight";
    case ErrorCode::empty_corpus: return "empty_corpus";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Alignment failures (inputs that parse but do not line up) are reported
  // separately from format/IO failures, e.g. with a distinct CLI exit code.
  bool is_alignment() const noexcept {
    return code_ == ErrorCode::line_count_mismatch || code_ == ErrorCode::tokenization_mismatch ||
           code_ == ErrorCode::length_mismatch;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace treeagg
