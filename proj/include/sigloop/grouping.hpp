#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sigloop/minhash.hpp"

namespace sigloop {

inline constexpr double kDefaultGroupThreshold = 0.66;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x) noexcept;
  void unite(std::size_t a, std::size_t b) noexcept;

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Partition of item positions (indices into the similarity matrix order).
struct Grouping {
  std::vector<std::vector<std::size_t>> groups;  // each sorted ascending
  double threshold = kDefaultGroupThreshold;

  std::size_t item_count() const noexcept;
  // group index per item position
  std::vector<std::size_t> assignment() const;
  bool operator==(const Grouping&) const = default;
};

// Connected components of sim(i, j) > threshold. Groups are ordered by size
// descending, then by smallest member position.
Grouping group_items(const SimilarityMatrix& matrix, double threshold = kDefaultGroupThreshold);

// Group-level similarity: max member-pair similarity between groups.
SimilarityMatrix group_similarity(const SimilarityMatrix& matrix, const Grouping& grouping);

}  // namespace sigloop
