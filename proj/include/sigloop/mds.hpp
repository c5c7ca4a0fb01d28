#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sigloop/error.hpp"
#include "sigloop/hashing.hpp"
#include "sigloop/minhash.hpp"

namespace sigloop {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class StressTarget { one_minus_sim, raw_sim };
StressTarget parse_stress_target(std::string_view text);
std::string_view to_string(StressTarget target) noexcept;

// Target dissimilarities from similarities. one_minus_sim: 1 - s off the
// diagonal; raw_sim: s itself. The diagonal is always zero.
Eigen::MatrixXd dissimilarity_targets(const SimilarityMatrix& sim, StressTarget target = StressTarget::one_minus_sim);

// Sum over i < j of (||x_i - x_j|| - delta_ij)^2. Rows of `coords` are points.
template <class DerivedX, class DerivedT>
typename DerivedX::Scalar stress_of(const Eigen::MatrixBase<DerivedX>& coords,
                                    const Eigen::MatrixBase<DerivedT>& targets) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = coords.rows();
  Scalar total(0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar r = (coords.row(i) - coords.row(j)).norm() - static_cast<Scalar>(targets(i, j));
      total += r * r;
    }
  return total;
}

// Analytic gradient of stress_of with respect to every coordinate. Coincident
// pairs contribute the zero subgradient.
template <class DerivedX, class DerivedT>
DenseMatrix<typename DerivedX::Scalar> stress_gradient(const Eigen::MatrixBase<DerivedX>& coords,
                                                       const Eigen::MatrixBase<DerivedT>& targets) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Index n = coords.rows();
  DenseMatrix<Scalar> grad = DenseMatrix<Scalar>::Zero(n, coords.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto diff = (coords.row(i) - coords.row(j)).eval();
      const Scalar d = diff.norm();
      if (d <= Scalar(0)) continue;
      const Scalar w = Scalar(2) * (d - static_cast<Scalar>(targets(i, j))) / d;
      grad.row(i) += w * diff;
      grad.row(j) -= w * diff;
    }
  return grad;
}

struct EmbedOptions {
  double step = 0.05;
  int max_iterations = 500;
  double relative_tolerance = 1e-6;
  int max_halvings = 60;
};

// Rows flagged in `known` start from `coords`; the rest start at random.
template <typename Scalar = double>
struct WarmStart {
  DenseMatrix<Scalar> coords;
  std::vector<bool> known;
};

template <typename Scalar = double>
struct BasicEmbedding {
  std::vector<std::string> order;
  DenseMatrix<Scalar> coords;  // one row per item
  Scalar stress = Scalar(0);
  int iterations_used = 0;
  std::vector<Scalar> stress_history;  // stress after every accepted step, starting with the initial layout

  Eigen::Index dim() const noexcept { return coords.cols(); }
  bool operator==(const BasicEmbedding& o) const {
    return order == o.order && coords.rows() == o.coords.rows() && coords.cols() == o.coords.cols() &&
           coords == o.coords && stress == o.stress && iterations_used == o.iterations_used &&
           stress_history == o.stress_history;
  }
};

using Embedding = BasicEmbedding<double>;

template <class DerivedT>
void validate_targets(const Eigen::MatrixBase<DerivedT>& targets) {
  const Eigen::Index n = targets.rows();
  if (targets.cols() != n) throw Error(ErrorKind::InvalidMatrix, "target matrix must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (targets(i, i) != 0) throw Error(ErrorKind::InvalidMatrix, "target diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!std::isfinite(static_cast<double>(targets(i, j))) || targets(i, j) != targets(j, i))
        throw Error(ErrorKind::InvalidMatrix, "target matrix must be finite and symmetric");
      if (targets(i, j) < 0 || targets(i, j) > 1)
        throw Error(ErrorKind::InvalidMatrix, "targets must lie in [0,1]");
    }
  }
}

// Uniform in [-0.5, 0.5)^dim from a SplitMix64 stream, identical on every platform.
template <typename Scalar>
DenseMatrix<Scalar> random_layout(Eigen::Index n, Eigen::Index dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  DenseMatrix<Scalar> out(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index d = 0; d < dim; ++d)
      out(i, d) = static_cast<Scalar>(static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 0.5);
  return out;
}

// Steepest descent on stress with step halving: a step is only accepted if it
// does not increase stress, so stress_history is non-increasing.
template <typename Scalar, class DerivedT>
BasicEmbedding<Scalar> embed(const Eigen::MatrixBase<DerivedT>& targets, int dim, std::uint64_t seed,
                             const WarmStart<Scalar>* warm = nullptr, const EmbedOptions& options = {},
                             std::vector<std::string> order = {}) {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::ConfigError, "embedding dimension must be 1 or 2");
  validate_targets(targets);
  const Eigen::Index n = targets.rows();
  const DenseMatrix<Scalar> delta = targets.template cast<Scalar>();

  BasicEmbedding<Scalar> out;
  out.order = std::move(order);
  out.coords = random_layout<Scalar>(n, dim, seed);
  if (warm) {
    if (warm->coords.rows() != n || warm->coords.cols() != dim ||
        warm->known.size() != static_cast<std::size_t>(n))
      throw Error(ErrorKind::ConfigError, "warm start does not match the target matrix");
    for (Eigen::Index i = 0; i < n; ++i)
      if (warm->known[static_cast<std::size_t>(i)]) out.coords.row(i) = warm->coords.row(i);
  }

  Scalar stress = stress_of(out.coords, delta);
  out.stress_history.push_back(stress);
  Scalar step = static_cast<Scalar>(options.step);
  for (int iter = 0; iter < options.max_iterations && stress > Scalar(0); ++iter) {
    const DenseMatrix<Scalar> grad = stress_gradient(out.coords, delta);
    if (grad.squaredNorm() == Scalar(0)) break;
    bool accepted = false;
    DenseMatrix<Scalar> candidate;
    Scalar candidate_stress = stress;
    for (int h = 0; h <= options.max_halvings; ++h) {
      candidate = out.coords - step * grad;
      candidate_stress = stress_of(candidate, delta);
      if (candidate_stress <= stress) {
        accepted = true;
        break;
      }
      step /= Scalar(2);
    }
    if (!accepted) break;
    const Scalar improvement = (stress - candidate_stress) / stress;
    out.coords = std::move(candidate);
    stress = candidate_stress;
    out.stress_history.push_back(stress);
    ++out.iterations_used;
    if (improvement < static_cast<Scalar>(options.relative_tolerance)) break;
  }
  out.stress = stress_of(out.coords, delta);
  return out;
}

Embedding embed_similarity(const SimilarityMatrix& sim, int dim, std::uint64_t seed,
                           const WarmStart<double>* warm = nullptr,
                           StressTarget target = StressTarget::one_minus_sim, const EmbedOptions& options = {});

// Ascending coordinate, ties by position in the embedding order.
std::vector<std::string> rank_1d(const Embedding& embedding);

}  // namespace sigloop
