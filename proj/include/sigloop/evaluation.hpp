#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigloop/grouping.hpp"
#include "sigloop/minhash.hpp"

namespace sigloop {

// Ground truth per item position; std::nullopt marks unlabelled items.
using LabelList = std::vector<std::optional<std::string>>;

struct MetricsSnapshot {
  std::optional<double> accuracy;
  double purity = 0.0;
  std::optional<double> kendall_tau;
  std::map<std::string, double> per_class_purity;

  bool operator==(const MetricsSnapshot&) const = default;
};

struct Classification {
  std::vector<std::string> predicted;  // one per test item
  double accuracy = 0.0;
};

// 1-NN over the similarity matrix: the most similar training item wins, ties
// go to the earliest training position.
Classification nn_classify(std::span<const std::size_t> test, std::span<const std::size_t> train,
                           const LabelList& labels, const SimilarityMatrix& matrix);

// Leave-one-out 1-NN accuracy over all labelled items.
std::optional<double> leave_one_out_accuracy(const LabelList& labels, const SimilarityMatrix& matrix);

// (1/N) sum_k max_j |group_k intersect class_j|.
double purity(const Grouping& grouping, const LabelList& labels);

// For class c: sum over groups of |g_c| * (|g_c| / |g|) divided by |c|, i.e.
// the mean purity of the groups the members of c sit in, weighted by member.
std::map<std::string, double> per_class_purity(const Grouping& grouping, const LabelList& labels);

// (concordant - discordant) / (n (n - 1) / 2) over all id pairs.
double kendall_tau(std::span<const std::string> ranking_a, std::span<const std::string> ranking_b);

}  // namespace sigloop
