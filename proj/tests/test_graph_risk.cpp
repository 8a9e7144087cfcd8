// SimRank, PageRank, structural and importance risk.

#include <doctest.h>

#include <numeric>

#include "privrisk/graph_risk.hpp"
#include "support.hpp"

using namespace privrisk;
using doctest::Approx;
using testing::graph_of;

namespace {

SimilarityMap all_pairs(const SocialGraph& g, double c = 0.8, int iters = 10, double eps = 1e-4) {
  SimRankParams p;
  p.decay = c;
  p.max_iterations = iters;
  p.epsilon = eps;
  p.pair_scope = SimRankParams::PairScope::AllPairs;
  return simrank(g, p);
}

}  // namespace

TEST_CASE("SimRank on a two-leaf path") {
  // a=0, b=1, c=2; edges a-c and b-c.
  const auto g = graph_of({{0, 2}, {1, 2}});
  const auto s = all_pairs(g);
  CHECK(s.at(0, 1) == Approx(0.8).epsilon(1e-12));
  CHECK(s.at(0, 2) == 0.0);
  CHECK(s.at(1, 2) == 0.0);
  for (SocialGraph::Index u = 0; u < 3; ++u) CHECK(s.at(u, u) == 1.0);
}

TEST_CASE("SimRank on K3 matches the brute-force oracle") {
  const auto g = graph_of({{0, 1}, {1, 2}, {0, 2}});
  const auto s = all_pairs(g, 0.8, 20, 0.0);
  const auto oracle = testing::naive_simrank(g, 0.8, 20, 0.0);
  CHECK(s.at(0, 1) == Approx(s.at(1, 2)).epsilon(1e-15));
  CHECK(s.at(0, 2) == Approx(s.at(0, 1)).epsilon(1e-15));
  for (SocialGraph::Index a = 0; a < 3; ++a)
    for (SocialGraph::Index b = 0; b < 3; ++b) CHECK(s.at(a, b) == Approx(oracle[a][b]).epsilon(1e-12));
}

TEST_CASE("SimRank invariants on random graphs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = testing::random_graph(18, 0.2, rng);
    const auto s = all_pairs(g);
    for (SocialGraph::Index a = 0; a < 18; ++a) {
      CHECK(s.at(a, a) == 1.0);
      for (SocialGraph::Index b = 0; b < 18; ++b) {
        CHECK(s.at(a, b) == s.at(b, a));
        CHECK(s.at(a, b) >= 0.0);
        CHECK(s.at(a, b) <= 1.0);
        if (a != b && (g.degree(a) == 0 || g.degree(b) == 0)) CHECK(s.at(a, b) == 0.0);
      }
    }
  }
}

TEST_CASE("SimRank is monotone non-decreasing across iterations") {
  std::mt19937_64 rng(8);
  const auto g = testing::random_graph(15, 0.25, rng);
  const auto t = transition_matrix<double>(g);
  DenseMatrix<double> previous = simrank_matrix<double>(t, 0.8, 1, 0.0);
  for (int k = 2; k <= 12; ++k) {
    const DenseMatrix<double> current = simrank_matrix<double>(t, 0.8, k, 0.0);
    CHECK((current - previous).minCoeff() >= -1e-15);
    previous = current;
  }
}

TEST_CASE("SimRank kernel is scalar-generic") {
  const auto g = graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  const auto sd = simrank_matrix<double>(transition_matrix<double>(g), 0.8, 10, 0.0);
  const auto sl = simrank_matrix<long double>(transition_matrix<long double>(g), 0.8L, 10, 0.0L);
  CHECK((sd - sl.cast<double>()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("neighbors-only scope agrees with all-pairs on materialized pairs") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_graph(50, 0.08, rng);
    const auto full = all_pairs(g);
    const auto local = simrank(g);
    CHECK(local.scope() == SimRankParams::PairScope::NeighborsOnly);
    for (SocialGraph::Index u = 0; u < 50; ++u) {
      const auto nb = g.neighbors(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        CHECK(local.materialized(u, nb[k]));
        CHECK(local.at(u, nb[k]) == full.at(u, nb[k]));
        CHECK(local.neighbor_similarity(u, k) == full.at(u, nb[k]));
      }
    }
  }
  const auto g = graph_of({{0, 1}, {1, 2}});
  CHECK_THROWS_AS(simrank(g).at(0, 2), std::out_of_range);
}

TEST_CASE("SimRank parameter validation") {
  SimRankParams p;
  p.decay = 1.0;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  CHECK_THROWS_AS(simrank(SocialGraph{}), PreconditionError);
}

TEST_CASE("PageRank small cases") {
  const auto pair = pagerank(graph_of({{0, 1}}));
  CHECK(pair[0] == Approx(1.0).epsilon(1e-12));
  CHECK(pair[1] == Approx(1.0).epsilon(1e-12));

  // Star with 3 leaves: fixed point c = 0.15 + 0.85*3*l, l = 0.15 + 0.85*c/3.
  const auto s = pagerank(testing::star(3));
  const double c = (0.15 + 3 * 0.85 * 0.15) / (1 - 0.85 * 0.85);
  const double l = 0.15 + 0.85 * c / 3;
  // L1 stop at 1e-8 leaves at most 1e-8 * d / (1 - d) of error per entry.
  CHECK(s[0] == Approx(c).epsilon(1e-7));
  CHECK(s[1] == Approx(l).epsilon(1e-7));
  CHECK(s[0] > s[1]);
  const auto oracle = testing::naive_pagerank(testing::star(3), 0.85, 100, 1e-8);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s[i] == Approx(oracle[i]).epsilon(1e-12));

  // Isolated vertex holds 1 - d.
  const auto iso = pagerank(graph_of({{0, 1}}, {5}));
  CHECK(iso[2] == Approx(0.15).epsilon(1e-12));
}

TEST_CASE("PageRank sums to |V| and respects the floor") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_graph(25, 0.2, rng);
    bool min_degree_one = true;
    for (SocialGraph::Index u = 0; u < g.node_count(); ++u) min_degree_one &= g.degree(u) > 0;
    const auto p = pagerank(g);
    for (double v : p) CHECK(v >= 0.15 - 1e-12);
    if (min_degree_one)
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == Approx(25.0).epsilon(1e-8));
    const auto oracle = testing::naive_pagerank(g, 0.85, 100, 1e-8);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == Approx(oracle[i]).epsilon(1e-10));
  }
}

TEST_CASE("PageRank is 1 on regular graphs") {
  for (std::size_t k : {2, 4, 6})
    for (double v : pagerank(testing::circulant(31, k))) CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("importance risk") {
  const std::vector<double> p{2.0, 1.0, 1.0};
  const auto r = importance_risk(p);
  CHECK(r == std::vector<double>{1.0, 0.5, 0.5});
  CHECK(importance_risk(std::vector<double>{0.7}) == std::vector<double>{1.0});
  CHECK(importance_risk(std::vector<double>{3.0, 3.0}) == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(importance_risk(std::vector<double>{}), PreconditionError);

  std::mt19937_64 rng(1);
  const auto g = testing::random_graph(40, 0.1, rng);
  const auto pr = pagerank(g);
  const auto ri = importance_risk(pr);
  CHECK(*std::max_element(ri.begin(), ri.end()) == 1.0);
  for (std::size_t a = 0; a < pr.size(); ++a)
    for (std::size_t b = 0; b < pr.size(); ++b)
      if (pr[a] < pr[b]) CHECK(ri[a] <= ri[b]);
}

TEST_CASE("structural risk hand values") {
  // u=0 with one neighbor v=1; S = 0.8, R(v) = 0.5.
  const auto g1 = graph_of({{0, 1}});
  const auto s1 = SimilarityMap::from_edge_values(g1, {0.8, 0.8}, 1);
  CHECK(structural_risk(g1, s1, std::vector<double>{0.0, 0.5})[0] == Approx(0.4));
  CHECK(structural_risk(g1, s1, std::vector<double>{0.0, 0.0})[0] == 0.0);

  // u=0 with neighbors 1 (S 0.8, R 0.5) and 2 (S 0.4, R 1.0).
  const auto g2 = graph_of({{0, 1}, {0, 2}});
  // Slots: 0:[1,2], 1:[0], 2:[0].
  const auto s2 = SimilarityMap::from_edge_values(g2, {0.8, 0.4, 0.8, 0.4}, 1);
  const auto r = structural_risk(g2, s2, std::vector<double>{0.0, 0.5, 1.0});
  CHECK(r[0] == Approx(0.4));

  const auto iso = graph_of({{0, 1}}, {9});
  CHECK(structural_risk(iso, simrank(iso), std::vector<double>{1, 1, 1})[2] == 0.0);
}

TEST_CASE("SGPRS combination") {
  CHECK(sgprs(std::vector<double>{0.4}, std::vector<double>{1.0})[0] == Approx(0.6682).epsilon(1e-12));
  CHECK(sgprs(std::vector<double>{0.0}, std::vector<double>{0.0})[0] == 0.0);
  const std::vector<double> rs{0.1, 0.7}, ri{1.0, 0.3};
  CHECK(sgprs(rs, ri, {1.0, 0.0}) == rs);
  CHECK_THROWS_AS(sgprs(rs, std::vector<double>{1.0}), PreconditionError);
  CHECK_THROWS_AS((SgprsWeights{0.6, 0.6}.validate()), PreconditionError);
}
