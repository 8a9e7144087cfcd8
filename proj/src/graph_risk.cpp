#include "privrisk/graph_risk.hpp"

#include <algorithm>
#include <stdexcept>

namespace privrisk {

void SimRankParams::validate() const {
  if (!(decay > 0.0 && decay < 1.0))
    throw PreconditionError("SimRank decay must lie in (0, 1)");
  if (max_iterations < 1) throw PreconditionError("SimRank max_iterations must be >= 1");
  if (!(epsilon >= 0.0)) throw PreconditionError("SimRank epsilon must be >= 0");
}

void PageRankParams::validate() const {
  if (!(damping > 0.0 && damping < 1.0))
    throw PreconditionError("PageRank damping must lie in (0, 1)");
  if (max_iterations < 1) throw PreconditionError("PageRank max_iterations must be >= 1");
  if (!(epsilon >= 0.0)) throw PreconditionError("PageRank epsilon must be >= 0");
}

void SgprsWeights::validate() const {
  if (!(sim >= 0.0 && imp >= 0.0) || std::abs(sim + imp - 1.0) > 1e-9)
    throw PreconditionError("SGPRS weights must be non-negative and sum to 1");
}

// ---------------------------------------------------------------------------

bool SimilarityMap::materialized(Index u, Index v) const {
  const std::size_t n = node_count();
  if (u >= n || v >= n) return false;
  if (u == v || scope_ == SimRankParams::PairScope::AllPairs) return true;
  auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
  auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
  return std::binary_search(first, last, v);
}

double SimilarityMap::at(Index u, Index v) const {
  const std::size_t n = node_count();
  if (u >= n || v >= n) throw std::out_of_range("similarity pair outside the graph");
  if (scope_ == SimRankParams::PairScope::AllPairs) return dense_(u, v);
  if (u == v) return 1.0;
  auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
  auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
  auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) throw std::out_of_range("similarity pair not materialized");
  return edge_values_[static_cast<std::size_t>(it - neighbors_.begin())];
}

double SimilarityMap::neighbor_similarity(Index u, std::size_t k) const {
  const std::size_t slot = offsets_[u] + k;
  if (scope_ == SimRankParams::PairScope::AllPairs) return dense_(u, neighbors_[slot]);
  return edge_values_[slot];
}

namespace {

void copy_structure(const SocialGraph& graph, std::vector<std::size_t>& offsets,
                    std::vector<SocialGraph::Index>& neighbors) {
  const std::size_t n = graph.node_count();
  offsets.assign(n + 1, 0);
  neighbors.clear();
  neighbors.reserve(graph.edge_count() * 2);
  for (SocialGraph::Index u = 0; u < n; ++u) {
    auto nb = graph.neighbors(u);
    neighbors.insert(neighbors.end(), nb.begin(), nb.end());
    offsets[u + 1] = neighbors.size();
  }
}

}  // namespace

SimilarityMap SimilarityMap::from_dense(const SocialGraph& graph,
                                        const DenseMatrix<double>& dense,
                                        SimRankParams::PairScope scope, int iterations) {
  SimilarityMap map;
  map.scope_ = scope;
  map.iterations_ = iterations;
  copy_structure(graph, map.offsets_, map.neighbors_);
  map.edge_values_.resize(map.neighbors_.size());
  for (SocialGraph::Index u = 0; u < graph.node_count(); ++u)
    for (std::size_t s = map.offsets_[u]; s < map.offsets_[u + 1]; ++s)
      map.edge_values_[s] = dense(u, map.neighbors_[s]);
  if (scope == SimRankParams::PairScope::AllPairs) map.dense_ = dense;
  return map;
}

SimilarityMap SimilarityMap::from_edge_values(const SocialGraph& graph,
                                              std::vector<double> values, int iterations) {
  SimilarityMap map;
  map.scope_ = SimRankParams::PairScope::NeighborsOnly;
  map.iterations_ = iterations;
  copy_structure(graph, map.offsets_, map.neighbors_);
  if (values.size() != map.neighbors_.size())
    throw DataError("cached similarity count does not match the graph adjacency");
  map.edge_values_ = std::move(values);
  return map;
}

SimilarityMap simrank(const SocialGraph& graph, const SimRankParams& params) {
  params.validate();
  if (graph.node_count() == 0) throw PreconditionError("SimRank needs a non-empty graph");
  int iterations = 0;
  const auto dense = simrank_matrix<double>(transition_matrix<double>(graph), params.decay,
                                            params.max_iterations, params.epsilon, &iterations);
  return SimilarityMap::from_dense(graph, dense, params.pair_scope, iterations);
}

std::vector<double> structural_risk(const SocialGraph& graph, const SimilarityMap& sim,
                                    std::span<const double> neighbor_risk) {
  if (neighbor_risk.size() != graph.node_count())
    throw PreconditionError("neighbor risk must cover every node");
  std::vector<double> out(graph.node_count(), 0.0);
  for (SocialGraph::Index u = 0; u < graph.node_count(); ++u) {
    auto nb = graph.neighbors(u);
    if (nb.empty()) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k)
      acc += sim.neighbor_similarity(u, k) * neighbor_risk[nb[k]];
    out[u] = acc / static_cast<double>(nb.size());
  }
  return out;
}

std::vector<double> pagerank(const SocialGraph& graph, const PageRankParams& params,
                             int* iterations_run) {
  params.validate();
  if (graph.node_count() == 0) throw PreconditionError("PageRank needs a non-empty graph");
  const auto v = pagerank_vector<double>(adjacency_matrix<double>(graph), params.damping,
                                         params.max_iterations, params.epsilon,
                                         iterations_run);
  return {v.data(), v.data() + v.size()};
}

std::vector<double> importance_risk(std::span<const double> pagerank_scores) {
  if (pagerank_scores.empty()) throw PreconditionError("importance risk of an empty ranking");
  const double top = *std::max_element(pagerank_scores.begin(), pagerank_scores.end());
  if (!(top > 0.0)) throw PreconditionError("maximum PageRank must be positive");
  std::vector<double> out(pagerank_scores.size());
  std::transform(pagerank_scores.begin(), pagerank_scores.end(), out.begin(),
                 [top](double p) { return p / top; });
  return out;
}

std::vector<double> sgprs(std::span<const double> struct_risk, std::span<const double> imp_risk,
                          const SgprsWeights& weights) {
  weights.validate();
  if (struct_risk.size() != imp_risk.size())
    throw PreconditionError("structural and importance risk cover different node sets");
  std::vector<double> out(struct_risk.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = weights.sim * struct_risk[i] + weights.imp * imp_risk[i];
  return out;
}

}  // namespace privrisk
