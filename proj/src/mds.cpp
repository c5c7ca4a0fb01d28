#include "sigloop/mds.hpp"

namespace sigloop {

StressTarget parse_stress_target(std::string_view text) {
  if (text == "one_minus_sim") return StressTarget::one_minus_sim;
  if (text == "raw_sim") return StressTarget::raw_sim;
  throw Error(ErrorKind::ConfigError, "unknown stress target '" + std::string(text) + "'");
}

std::string_view to_string(StressTarget target) noexcept {
  return target == StressTarget::one_minus_sim ? "one_minus_sim" : "raw_sim";
}

Eigen::MatrixXd dissimilarity_targets(const SimilarityMatrix& sim, StressTarget target) {
  Eigen::MatrixXd out = target == StressTarget::one_minus_sim
                            ? Eigen::MatrixXd((1.0 - sim.values.array()).matrix())
                            : sim.values;
  out.diagonal().setZero();
  return out;
}

Embedding embed_similarity(const SimilarityMatrix& sim, int dim, std::uint64_t seed, const WarmStart<double>* warm,
                           StressTarget target, const EmbedOptions& options) {
  return embed<double>(dissimilarity_targets(sim, target), dim, seed, warm, options, sim.order);
}

std::vector<std::string> rank_1d(const Embedding& embedding) {
  if (embedding.dim() != 1) throw Error(ErrorKind::ConfigError, "rank_1d needs a 1-D embedding");
  std::vector<std::size_t> idx(embedding.order.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return embedding.coords(static_cast<Eigen::Index>(a), 0) < embedding.coords(static_cast<Eigen::Index>(b), 0);
  });
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(embedding.order[i]);
  return out;
}

}  // namespace sigloop
