#include "sigloop/grouping.hpp"

#include <algorithm>
#include <numeric>

namespace sigloop {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) noexcept {
  std::size_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const std::size_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

void UnionFind::unite(std::size_t a, std::size_t b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
}

std::size_t Grouping::item_count() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

std::vector<std::size_t> Grouping::assignment() const {
  std::vector<std::size_t> out(item_count());
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto item : groups[g]) out[item] = g;
  return out;
}

Grouping group_items(const SimilarityMatrix& matrix, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorKind::ConfigError, "group threshold must lie in (0,1)");
  const std::size_t n = matrix.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > threshold) uf.unite(i, j);

  std::vector<std::vector<std::size_t>> by_root(n);
  for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);

  Grouping out;
  out.threshold = threshold;
  for (auto& members : by_root)
    if (!members.empty()) out.groups.push_back(std::move(members));
  std::sort(out.groups.begin(), out.groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

SimilarityMatrix group_similarity(const SimilarityMatrix& matrix, const Grouping& grouping) {
  const auto k = static_cast<Eigen::Index>(grouping.groups.size());
  SimilarityMatrix out;
  out.values = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index g = 0; g < k; ++g) {
    out.order.push_back("group-" + std::to_string(g));
    for (Eigen::Index h = g + 1; h < k; ++h) {
      double best = 0.0;
      for (auto i : grouping.groups[static_cast<std::size_t>(g)])
        for (auto j : grouping.groups[static_cast<std::size_t>(h)])
          best = std::max(best, matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out.values(g, h) = best;
      out.values(h, g) = best;
    }
  }
  return out;
}

}  // namespace sigloop
