#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigloop/error.hpp"
#include "sigloop/hashing.hpp"
#include "sigloop/signature.hpp"

namespace sigloop {

inline constexpr std::size_t kDefaultNumHashes = 256;
inline constexpr std::size_t kDefaultSketchSize = 2;

// N implicit permutations realised as seeded 64-bit hashes of symbol
// instances, grouped into N / n sketches of n minima each.
class HashFamily {
 public:
  HashFamily() : HashFamily(0) {}
  explicit HashFamily(std::uint64_t seed, std::size_t num_hashes = kDefaultNumHashes,
             std::size_t sketch_size = kDefaultSketchSize);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t num_hashes() const noexcept { return num_hashes_; }
  std::size_t sketch_size() const noexcept { return sketch_size_; }
  std::size_t sketch_count() const noexcept { return num_hashes_ / sketch_size_; }
  std::span<const std::uint64_t> hash_seeds() const noexcept { return hash_seeds_; }

  bool operator==(const HashFamily& other) const noexcept {
    return seed_ == other.seed_ && num_hashes_ == other.num_hashes_ && sketch_size_ == other.sketch_size_;
  }

 private:
  std::uint64_t seed_;
  std::size_t num_hashes_;
  std::size_t sketch_size_;
  std::vector<std::uint64_t> hash_seeds_;
};

// One expanded symbol (feature, ordinal) with its stable 64-bit key.
struct SymbolInstance {
  FeatureIndex feature;
  SymbolCount ordinal;
  std::uint64_t key;
};

inline std::uint64_t instance_key(std::uint64_t feature_key_hash, SymbolCount ordinal) noexcept {
  return splitmix64(feature_key_hash ^ splitmix64(ordinal));
}

struct SeededHasher {
  const HashFamily& family;
  std::uint64_t operator()(std::size_t hash_index, const SymbolInstance& s) const noexcept {
    return splitmix64(s.key ^ family.hash_seeds()[hash_index]);
  }
};

struct SketchSet {
  std::string item_id;
  std::uint64_t family_seed = 0;
  std::size_t sketch_size = 1;
  std::vector<std::uint64_t> minima;  // one per hash, in hash order

  std::size_t sketch_count() const noexcept { return minima.size() / sketch_size; }
  std::span<const std::uint64_t> sketch(std::size_t k) const {
    return std::span<const std::uint64_t>(minima).subspan(k * sketch_size, sketch_size);
  }
  bool operator==(const SketchSet&) const = default;
};

// Generic over the hash function so explicit permutations can drive the same
// minimisation path. Hasher: (hash_index, SymbolInstance) -> uint64.
template <class Hasher>
SketchSet sketch_signature_with(const Signature& sig, const Vocabulary& vocab, const HashFamily& family,
                                const Hasher& hasher) {
  if (sig.empty()) throw Error(ErrorKind::EmptySignature, "item " + sig.item_id() + " has no symbols");
  SketchSet out;
  out.item_id = sig.item_id();
  out.family_seed = family.seed();
  out.sketch_size = family.sketch_size();
  out.minima.assign(family.num_hashes(), std::numeric_limits<std::uint64_t>::max());
  for (const auto& [feature, count] : sig.counts()) {
    const std::uint64_t feature_hash = vocab.key_hash(feature);
    for (SymbolCount ordinal = 1; ordinal <= count; ++ordinal) {
      const SymbolInstance inst{feature, ordinal, instance_key(feature_hash, ordinal)};
      for (std::size_t i = 0; i < out.minima.size(); ++i) {
        const std::uint64_t h = hasher(i, inst);
        if (h < out.minima[i]) out.minima[i] = h;
      }
    }
  }
  return out;
}

SketchSet sketch_signature(const Signature& sig, const Vocabulary& vocab, const HashFamily& family);

// Fraction of sketch positions whose n minima all agree. When `comparisons`
// is given it accumulates the number of hash values compared.
double estimate_similarity(const SketchSet& a, const SketchSet& b, std::size_t* comparisons = nullptr);

// Sum of min counts over sum of max counts; 0 when both are empty.
double exact_jaccard(const Signature& a, const Signature& b);

enum class SimilarityMode { sketch, exact };
SimilarityMode parse_similarity_mode(std::string_view text);
std::string_view to_string(SimilarityMode mode) noexcept;

struct SimilarityMatrix {
  std::vector<std::string> order;
  Eigen::MatrixXd values;

  std::size_t size() const noexcept { return order.size(); }
  bool operator==(const SimilarityMatrix& other) const {
    return order == other.order && values.rows() == other.values.rows() &&
           values.cols() == other.values.cols() && values == other.values;
  }
};

// Empty sketches (std::nullopt) stand for empty signatures: 0 to every other item.
SimilarityMatrix similarity_from_sketches(std::span<const std::optional<SketchSet>> sketches,
                                          std::vector<std::string> order);

SimilarityMatrix pairwise_similarity(std::span<const Signature> sigs, const Vocabulary& vocab,
                                     const HashFamily& family, SimilarityMode mode);

}  // namespace sigloop
