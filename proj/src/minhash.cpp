#include "sigloop/minhash.hpp"

#include <algorithm>

namespace sigloop {

HashFamily::HashFamily(std::uint64_t seed, std::size_t num_hashes, std::size_t sketch_size)
    : seed_(seed), num_hashes_(num_hashes), sketch_size_(sketch_size) {
  if (sketch_size_ == 0 || num_hashes_ < sketch_size_ || num_hashes_ % sketch_size_ != 0)
    throw Error(ErrorKind::ConfigError, "need num_hashes >= sketch_size >= 1 with sketch_size dividing num_hashes");
  SplitMix64 stream(seed);
  hash_seeds_.resize(num_hashes_);
  for (auto& s : hash_seeds_) s = stream.next();
}

SketchSet sketch_signature(const Signature& sig, const Vocabulary& vocab, const HashFamily& family) {
  return sketch_signature_with(sig, vocab, family, SeededHasher{family});
}

double estimate_similarity(const SketchSet& a, const SketchSet& b, std::size_t* comparisons) {
  if (a.family_seed != b.family_seed || a.sketch_size != b.sketch_size || a.minima.size() != b.minima.size())
    throw Error(ErrorKind::FamilyMismatch, "sketches of " + a.item_id + " and " + b.item_id +
                                               " come from different hash families");
  const std::size_t n = a.sketch_size;
  const std::size_t sketches = a.sketch_count();
  if (sketches == 0) return 0.0;
  std::size_t matches = 0;
  std::size_t compared = 0;
  for (std::size_t k = 0; k < sketches; ++k) {
    bool all_equal = true;
    for (std::size_t j = 0; j < n; ++j) {
      ++compared;
      if (a.minima[k * n + j] != b.minima[k * n + j]) {
        all_equal = false;
        break;
      }
    }
    matches += all_equal ? 1 : 0;
  }
  if (comparisons) *comparisons += compared;
  return static_cast<double>(matches) / static_cast<double>(sketches);
}

double exact_jaccard(const Signature& a, const Signature& b) {
  std::uint64_t inter = 0;
  std::uint64_t uni = 0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  const auto ea = a.counts().end();
  const auto eb = b.counts().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      uni += ia->second;
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      uni += ib->second;
      ++ib;
    } else {
      inter += std::min(ia->second, ib->second);
      uni += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

SimilarityMode parse_similarity_mode(std::string_view text) {
  if (text == "sketch") return SimilarityMode::sketch;
  if (text == "exact") return SimilarityMode::exact;
  throw Error(ErrorKind::ConfigError, "unknown similarity mode '" + std::string(text) + "'");
}

std::string_view to_string(SimilarityMode mode) noexcept {
  return mode == SimilarityMode::sketch ? "sketch" : "exact";
}

SimilarityMatrix similarity_from_sketches(std::span<const std::optional<SketchSet>> sketches,
                                          std::vector<std::string> order) {
  const auto n = static_cast<Eigen::Index>(sketches.size());
  SimilarityMatrix m{std::move(order), Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto& a = sketches[static_cast<std::size_t>(i)];
      const auto& b = sketches[static_cast<std::size_t>(j)];
      const double s = (a && b) ? estimate_similarity(*a, *b) : 0.0;
      m.values(i, j) = s;
      m.values(j, i) = s;
    }
  }
  return m;
}

SimilarityMatrix pairwise_similarity(std::span<const Signature> sigs, const Vocabulary& vocab,
                                     const HashFamily& family, SimilarityMode mode) {
  if (sigs.size() < 2) throw Error(ErrorKind::ConfigError, "pairwise similarity needs >= 2 items");
  std::vector<std::string> order;
  order.reserve(sigs.size());
  for (const auto& s : sigs) order.push_back(s.item_id());

  if (mode == SimilarityMode::sketch) {
    std::vector<std::optional<SketchSet>> sketches(sigs.size());
    for (std::size_t i = 0; i < sigs.size(); ++i)
      if (!sigs[i].empty()) sketches[i] = sketch_signature(sigs[i], vocab, family);
    return similarity_from_sketches(sketches, std::move(order));
  }

  const auto n = static_cast<Eigen::Index>(sigs.size());
  SimilarityMatrix m{std::move(order), Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = exact_jaccard(sigs[static_cast<std::size_t>(i)], sigs[static_cast<std::size_t>(j)]);
      m.values(i, j) = s;
      m.values(j, i) = s;
    }
  return m;
}

}  // namespace sigloop
