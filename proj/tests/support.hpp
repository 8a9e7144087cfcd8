#pragma once

// Test fixtures and brute-force oracles. The oracles use plain nested loops
// over std::vector so they share no code with the Eigen kernels under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "privrisk/model.hpp"

namespace privrisk::testing {

using Edges = std::vector<std::pair<UserId, UserId>>;
using Grid = std::vector<std::vector<double>>;

inline SocialGraph graph_of(const Edges& edges, std::vector<UserId> extra = {}) {
  return SocialGraph::from_edges(edges, extra);
}

inline std::vector<std::vector<std::size_t>> adjacency_lists(const SocialGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.node_count());
  for (SocialGraph::Index u = 0; u < g.node_count(); ++u)
    for (auto v : g.neighbors(u)) adj[u].push_back(v);
  return adj;
}

/// S_{k+1}(a,b) = C / (|N(a)||N(b)|) * sum_{i in N(a)} sum_{j in N(b)} S_k(i,j),
/// S(a,a) = 1, S_0 = I; stops when the max change over all pairs drops below
/// eps or after max_iter sweeps.
inline Grid naive_simrank(const SocialGraph& g, double c, int max_iter, double eps) {
  const auto adj = adjacency_lists(g);
  const std::size_t n = adj.size();
  Grid s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) s[i][i] = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    Grid next(n, std::vector<double>(n, 0.0));
    double delta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) {
          next[a][b] = 1.0;
        } else if (!adj[a].empty() && !adj[b].empty()) {
          double sum = 0.0;
          for (auto i : adj[a])
            for (auto j : adj[b]) sum += s[i][j];
          next[a][b] = c * sum / static_cast<double>(adj[a].size() * adj[b].size());
        }
        delta = std::max(delta, std::abs(next[a][b] - s[a][b]));
      }
    }
    s = std::move(next);
    if (delta < eps) break;
  }
  return s;
}

/// P_{k+1}(u) = (1 - d) + d * sum_{v in N(u)} P_k(v) / deg(v), P_0 = 1, L1 stop.
inline std::vector<double> naive_pagerank(const SocialGraph& g, double d, int max_iter, double eps) {
  const auto adj = adjacency_lists(g);
  const std::size_t n = adj.size();
  std::vector<double> p(n, 1.0);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> next(n, 1.0 - d);
    for (std::size_t u = 0; u < n; ++u)
      for (auto v : adj[u]) next[u] += d * p[v] / static_cast<double>(adj[v].size());
    double delta = 0.0;
    for (std::size_t u = 0; u < n; ++u) delta += std::abs(next[u] - p[u]);
    p = std::move(next);
    if (delta < eps) break;
  }
  return p;
}

/// G(n, p) with ids 0..n-1 (isolated vertices kept).
inline SocialGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Edges edges;
  for (UserId a = 0; a < n; ++a)
    for (UserId b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  std::vector<UserId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return graph_of(edges, all);
}

/// Every labelled simple graph on n vertices, as edge bitmasks over the
/// n(n-1)/2 possible pairs.
inline std::vector<std::pair<UserId, UserId>> pairs_of(std::size_t n) {
  std::vector<std::pair<UserId, UserId>> pairs;
  for (UserId a = 0; a < n; ++a)
    for (UserId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  return pairs;
}

inline SocialGraph graph_from_mask(std::size_t n, std::uint64_t mask) {
  const auto pairs = pairs_of(n);
  Edges edges;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (mask >> k & 1U) edges.push_back(pairs[k]);
  std::vector<UserId> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return graph_of(edges, all);
}

/// Circulant k-regular graph on n vertices (k even, k < n).
inline SocialGraph circulant(std::size_t n, std::size_t k) {
  Edges edges;
  for (UserId u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k / 2; ++j) edges.emplace_back(u, (u + j) % n);
  return graph_of(edges);
}

inline SocialGraph star(std::size_t leaves) {
  Edges edges;
  for (UserId l = 1; l <= leaves; ++l) edges.emplace_back(0, l);
  return graph_of(edges);
}

inline UserProfile profile(UserId user,
                           std::vector<std::tuple<std::string, std::string, PrivacyLevel>> attrs) {
  UserProfile p{user, {}};
  for (auto& [name, value, level] : attrs)
    p.attributes[AttributeKind(name)] = AttributeEntry{value, PrivacySetting{level}};
  return p;
}

}  // namespace privrisk::testing
