#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace treeagg {

// Half-open token interval [start, end). A constituent's cluster is the
// contiguous block of tokens it dominates, so an interval identifies it.
struct Span {
  std::int32_t start = 0;
  std::int32_t end = 0;

  std::int32_t length() const noexcept { return end - start; }
  bool is_singleton() const noexcept { return end - start == 1; }
  bool contains(const Span& other) const noexcept {
    return start <= other.start && other.end <= end;
  }
  bool disjoint(const Span& other) const noexcept {
    return end <= other.start || other.end <= start;
  }

  friend bool operator==(const Span&, const Span&) noexcept = default;
  friend auto operator<=>(const Span&, const Span&) noexcept = default;
};

// Two clusters can coexist in one tree iff they are disjoint or nested;
// equal spans count as nested.
inline bool compatible(const Span& a, const Span& b) noexcept {
  return a.disjoint(b) || a.contains(b) || b.contains(a);
}

inline std::string to_string(const Span& s) {
  return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

struct SpanHash {
  std::size_t operator()(const Span& s) const noexcept {
    std::uint64_t x = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.start)) << 32) |
                      static_cast<std::uint32_t>(s.end);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
  }
};

}  // namespace treeagg
