#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "treeagg/span.hpp"

namespace treeagg {

// An immutable set of spans, stored sorted by (start, end) without
// duplicates. Sorted storage keeps iteration order deterministic.
class ClusterSet {
 public:
  ClusterSet() = default;

  static ClusterSet of(std::vector<Span> spans) {
    std::sort(spans.begin(), spans.end());
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    return ClusterSet(std::move(spans));
  }

  bool contains(const Span& s) const {
    return std::binary_search(spans_.begin(), spans_.end(), s);
  }

  std::size_t size() const noexcept { return spans_.size(); }
  bool empty() const noexcept { return spans_.empty(); }
  const std::vector<Span>& spans() const noexcept { return spans_; }

  auto begin() const noexcept { return spans_.begin(); }
  auto end() const noexcept { return spans_.end(); }

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;

 private:
  explicit ClusterSet(std::vector<Span> sorted_unique) : spans_(std::move(sorted_unique)) {}

  std::vector<Span> spans_;
};

}  // namespace treeagg
