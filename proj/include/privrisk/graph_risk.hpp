#pragma once

// Social-graph risk: SimRank structural similarity, PageRank importance and
// their combination. The iteration kernels are Scalar-templated over Eigen
// types; the graph-facing wrappers below instantiate them with double.

#include <cmath>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "privrisk/model.hpp"

namespace privrisk {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

struct SimRankParams {
  enum class PairScope { NeighborsOnly, AllPairs };
  double decay = 0.8;
  int max_iterations = 10;
  double epsilon = 1e-4;
  PairScope pair_scope = PairScope::NeighborsOnly;

  void validate() const;
};

struct PageRankParams {
  double damping = 0.85;
  int max_iterations = 100;
  double epsilon = 1e-8;

  void validate() const;
};

/// Mix of structural and importance risk. Defaults are the 0.68 / 0.55
/// correlations rescaled to sum to one.
struct SgprsWeights {
  double sim = 0.553;
  double imp = 0.447;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Kernels

template <typename Scalar>
SparseMatrix<Scalar> adjacency_matrix(const SocialGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(graph.edge_count() * 2);
  for (SocialGraph::Index u = 0; u < graph.node_count(); ++u)
    for (auto v : graph.neighbors(u)) triplets.emplace_back(u, v, Scalar(1));
  SparseMatrix<Scalar> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

/// Row u holds 1/|N(u)| at each neighbor; rows of isolated nodes are empty.
template <typename Scalar>
SparseMatrix<Scalar> transition_matrix(const SocialGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(graph.edge_count() * 2);
  for (SocialGraph::Index u = 0; u < graph.node_count(); ++u) {
    const Scalar w = Scalar(1) / static_cast<Scalar>(std::max<std::size_t>(graph.degree(u), 1));
    for (auto v : graph.neighbors(u)) triplets.emplace_back(u, v, w);
  }
  SparseMatrix<Scalar> t(n, n);
  t.setFromTriplets(triplets.begin(), triplets.end());
  return t;
}

/// SimRank fixed-point iteration S <- C * T S T^T with the diagonal pinned to
/// one, starting from the identity. Stops when the largest entry change drops
/// below `epsilon` or after `max_iterations` sweeps.
template <typename Scalar>
DenseMatrix<Scalar> simrank_matrix(const SparseMatrix<Scalar>& transition, Scalar decay,
                                   int max_iterations, Scalar epsilon,
                                   int* iterations_run = nullptr) {
  const Eigen::Index n = transition.rows();
  DenseMatrix<Scalar> sim = DenseMatrix<Scalar>::Identity(n, n);
  DenseMatrix<Scalar> half(n, n);
  DenseMatrix<Scalar> next(n, n);
  const SparseMatrix<Scalar> transposed = transition.transpose();
  int it = 0;
  while (it < max_iterations) {
    ++it;
    half.noalias() = sim * transposed;
    next.noalias() = transition * half;
    // Rounding in the two products breaks exact symmetry; average it back.
    half = (next + next.transpose()) * (decay / Scalar(2));
    half.diagonal().setOnes();
    const Scalar delta = (half - sim).cwiseAbs().maxCoeff();
    sim.swap(half);
    if (delta < epsilon) break;
  }
  if (iterations_run) *iterations_run = it;
  return sim;
}

/// Unnormalized-teleport PageRank: P <- (1 - d) + d * A^T (P / deg).
/// Degree-zero nodes settle at 1 - d. Stops on L1 change below `epsilon`.
template <typename Scalar>
DenseVector<Scalar> pagerank_vector(const SparseMatrix<Scalar>& adjacency, Scalar damping,
                                    int max_iterations, Scalar epsilon,
                                    int* iterations_run = nullptr) {
  const Eigen::Index n = adjacency.rows();
  const DenseVector<Scalar> degree = adjacency * DenseVector<Scalar>::Ones(n);
  const DenseVector<Scalar> inv_degree = degree.unaryExpr(
      [](Scalar d) { return d > Scalar(0) ? Scalar(1) / d : Scalar(0); });
  const SparseMatrix<Scalar> incoming = adjacency.transpose();

  DenseVector<Scalar> rank = DenseVector<Scalar>::Ones(n);
  DenseVector<Scalar> next(n);
  int it = 0;
  while (it < max_iterations) {
    ++it;
    next.noalias() = incoming * rank.cwiseProduct(inv_degree);
    next = (next * damping).array() + (Scalar(1) - damping);
    const Scalar delta = (next - rank).template lpNorm<1>();
    rank.swap(next);
    if (delta < epsilon) break;
  }
  if (iterations_run) *iterations_run = it;
  return rank;
}

// ---------------------------------------------------------------------------
// Graph-facing API

/// SimRank scores over the materialized pairs. Neighbors-only scope keeps one
/// value per adjacency slot plus the unit diagonal; all-pairs keeps the dense
/// matrix.
class SimilarityMap {
public:
  using Index = SocialGraph::Index;

  SimilarityMap() = default;

  SimRankParams::PairScope scope() const noexcept { return scope_; }
  int iterations() const noexcept { return iterations_; }
  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  bool materialized(Index u, Index v) const;
  /// Throws std::out_of_range for pairs outside the materialized scope.
  double at(Index u, Index v) const;

  /// Similarity of u with its k-th neighbor (adjacency order).
  double neighbor_similarity(Index u, std::size_t k) const;

  /// Values aligned with the graph's flattened adjacency array.
  std::span<const double> edge_values() const noexcept { return edge_values_; }

  static SimilarityMap from_dense(const SocialGraph& graph, const DenseMatrix<double>& dense,
                                  SimRankParams::PairScope scope, int iterations);
  /// Rebuilds a neighbors-only map from cached per-slot values.
  static SimilarityMap from_edge_values(const SocialGraph& graph, std::vector<double> values,
                                        int iterations);

private:
  SimRankParams::PairScope scope_ = SimRankParams::PairScope::NeighborsOnly;
  int iterations_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Index> neighbors_;
  std::vector<double> edge_values_;
  DenseMatrix<double> dense_;
};

SimilarityMap simrank(const SocialGraph& graph, const SimRankParams& params = {});

/// R_struct(u) = mean over neighbors v of S(u,v) * R_neighbor(v); isolated -> 0.
/// `neighbor_risk` is indexed by graph index.
std::vector<double> structural_risk(const SocialGraph& graph, const SimilarityMap& sim,
                                    std::span<const double> neighbor_risk);

/// Indexed by graph index.
std::vector<double> pagerank(const SocialGraph& graph, const PageRankParams& params = {},
                             int* iterations_run = nullptr);

/// P(u) / max P. Throws PreconditionError on empty input or non-positive max.
std::vector<double> importance_risk(std::span<const double> pagerank_scores);

/// w_sim * R_struct + w_imp * R_imp; sizes must match.
std::vector<double> sgprs(std::span<const double> struct_risk, std::span<const double> imp_risk,
                          const SgprsWeights& weights = {});

}  // namespace privrisk
