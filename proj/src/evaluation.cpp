#include "sigloop/evaluation.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace sigloop {
namespace {

std::uint64_t count_inversions(std::vector<std::size_t>& seq, std::vector<std::size_t>& scratch, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(seq, scratch, lo, mid) + count_inversions(seq, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (seq[i] <= seq[j]) {
      scratch[k++] = seq[i++];
    } else {
      inv += mid - i;
      scratch[k++] = seq[j++];
    }
  }
  while (i < mid) scratch[k++] = seq[i++];
  while (j < hi) scratch[k++] = seq[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            seq.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

Classification nn_classify(std::span<const std::size_t> test, std::span<const std::size_t> train,
                           const LabelList& labels, const SimilarityMatrix& matrix) {
  if (train.empty()) throw Error(ErrorKind::ConfigError, "nearest-neighbour classification needs training items");
  const std::unordered_set<std::size_t> train_set(train.begin(), train.end());
  for (auto t : train)
    if (t >= labels.size() || !labels[t]) throw Error(ErrorKind::ConfigError, "training item without a label");
  for (auto t : test)
    if (train_set.count(t)) throw Error(ErrorKind::ConfigError, "test and training items overlap");

  Classification out;
  std::size_t correct = 0;
  std::size_t scored = 0;
  for (auto t : test) {
    std::size_t best = train.front();
    double best_sim = -1.0;
    for (auto candidate : train) {
      const double s = matrix.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(candidate));
      if (s > best_sim || (s == best_sim && candidate < best)) {
        best_sim = s;
        best = candidate;
      }
    }
    out.predicted.push_back(*labels[best]);
    if (t < labels.size() && labels[t]) {
      ++scored;
      if (*labels[t] == *labels[best]) ++correct;
    }
  }
  out.accuracy = scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(scored);
  return out;
}

std::optional<double> leave_one_out_accuracy(const LabelList& labels, const SimilarityMatrix& matrix) {
  std::vector<std::size_t> labelled;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) labelled.push_back(i);
  if (labelled.size() < 2) return std::nullopt;
  std::size_t correct = 0;
  for (auto t : labelled) {
    std::size_t best = labelled.front() == t ? labelled[1] : labelled.front();
    double best_sim = -1.0;
    for (auto c : labelled) {
      if (c == t) continue;
      const double s = matrix.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c));
      if (s > best_sim || (s == best_sim && c < best)) {
        best_sim = s;
        best = c;
      }
    }
    if (*labels[best] == *labels[t]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labelled.size());
}

double purity(const Grouping& grouping, const LabelList& labels) {
  std::size_t total = 0;
  std::size_t majority_sum = 0;
  for (const auto& group : grouping.groups) {
    std::unordered_map<std::string, std::size_t> counts;
    for (auto item : group) {
      if (item >= labels.size() || !labels[item])
        throw Error(ErrorKind::ConfigError, "purity needs every grouped item labelled");
      ++counts[*labels[item]];
    }
    std::size_t best = 0;
    for (const auto& [label, c] : counts) best = std::max(best, c);
    majority_sum += best;
    total += group.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(majority_sum) / static_cast<double>(total);
}

std::map<std::string, double> per_class_purity(const Grouping& grouping, const LabelList& labels) {
  std::map<std::string, double> weighted;
  std::map<std::string, std::size_t> members;
  for (const auto& group : grouping.groups) {
    std::map<std::string, std::size_t> counts;
    for (auto item : group)
      if (item < labels.size() && labels[item]) ++counts[*labels[item]];
    for (const auto& [label, c] : counts) {
      weighted[label] += static_cast<double>(c) * static_cast<double>(c) / static_cast<double>(group.size());
      members[label] += c;
    }
  }
  for (auto& [label, w] : weighted) w /= static_cast<double>(members[label]);
  return weighted;
}

double kendall_tau(std::span<const std::string> ranking_a, std::span<const std::string> ranking_b) {
  if (ranking_a.size() != ranking_b.size())
    throw Error(ErrorKind::ConfigError, "rankings cover different id sets");
  const std::size_t n = ranking_a.size();
  std::unordered_map<std::string, std::size_t> pos_b;
  for (std::size_t i = 0; i < n; ++i)
    if (!pos_b.emplace(ranking_b[i], i).second) throw Error(ErrorKind::ConfigError, "duplicate id in ranking");
  std::vector<std::size_t> seq;
  seq.reserve(n);
  std::unordered_set<std::string> seen;
  for (const auto& id : ranking_a) {
    const auto it = pos_b.find(id);
    if (it == pos_b.end() || !seen.insert(id).second)
      throw Error(ErrorKind::ConfigError, "rankings cover different id sets");
    seq.push_back(it->second);
  }
  if (n < 2) return 1.0;
  std::vector<std::size_t> scratch(n);
  const std::uint64_t discordant = count_inversions(seq, scratch, 0, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return (pairs - 2.0 * static_cast<double>(discordant)) / pairs;
}

}  // namespace sigloop
