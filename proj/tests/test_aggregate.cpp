// Normalization, weights (presets and AHP), CPRS, summaries and
// recommendations.

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "privrisk/aggregate.hpp"
#include "support.hpp"

using namespace privrisk;
using doctest::Approx;

TEST_CASE("min-max normalization") {
  const auto n = normalize_population(std::vector<double>{0.12, 0.45, 0.89});
  CHECK(n[0] == 0.0);
  CHECK(n[1] == Approx(0.42857).epsilon(1e-5));
  CHECK(n[2] == 1.0);
  for (double v : normalize_population(std::vector<double>{3.0, 3.0, 3.0})) CHECK(v == 0.5);
  const std::vector<double> unit{0.0, 0.25, 1.0};
  CHECK(normalize_population(unit) == unit);
  CHECK_THROWS_AS(normalize_population(std::vector<double>{}), PreconditionError);

  const std::map<UserId, double> raw{{7, 2.0}, {9, 4.0}};
  const auto by_user = normalize_population(raw);
  CHECK(by_user.at(7) == 0.0);
  CHECK(by_user.at(9) == 1.0);
}

TEST_CASE("rank normalization averages ties") {
  const auto r = normalize_population(std::vector<double>{5.0, 1.0, 5.0, 3.0}, Normalization::Rank);
  CHECK(r == std::vector<double>{2.5 / 3, 0.0, 2.5 / 3, 1.0 / 3});
}

TEST_CASE("normalization preserves the user ordering") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> raw(30);
    for (auto& v : raw) v = u(rng);
    for (auto method : {Normalization::MinMax, Normalization::Rank}) {
      const auto n = normalize_population(raw, method);
      for (std::size_t a = 0; a < raw.size(); ++a) {
        CHECK(n[a] >= 0.0);
        CHECK(n[a] <= 1.0);
        for (std::size_t b = 0; b < raw.size(); ++b)
          if (raw[a] < raw[b]) CHECK(n[a] < n[b]);
      }
    }
  }
}

TEST_CASE("table of weighting presets") {
  const auto s = default_scenarios();
  REQUIRE(s.size() == 3);
  CHECK(s[0].name == "equal");
  CHECK(s[1].weights.cbprs == 0.5);
  CHECK(s[2].weights.sgprs == 0.6);
  // Component means 0.45 / 0.52 / 0.48.
  const double expected[] = {0.478, 0.486, 0.501};
  for (std::size_t i = 0; i < 3; ++i) {
    const double v = cprs(0.45, 0.52, 0.48, s[i].weights);
    CHECK(std::abs(v - expected[i]) < 1e-3);
  }
  CHECK(cprs(0.45, 0.52, 0.48, s[0].weights) == Approx(0.4785).epsilon(1e-12));
  CHECK_THROWS_AS(cprs(0.1, 0.2, 0.3, WeightVector{0.5, 0.5, 0.5}), PreconditionError);
}

TEST_CASE("cprs is monotone in each component and (1,0,0) reproduces APRS") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = u(rng), s = u(rng), c = u(rng), bump = u(rng) * (1 - a);
    CHECK(cprs(a, s, c, {1, 0, 0}) == a);
    for (const auto& sc : default_scenarios()) {
      CHECK(cprs(a + bump, s, c, sc.weights) >= cprs(a, s, c, sc.weights));
      CHECK(cprs(a, std::min(1.0, s + bump), c, sc.weights) >= cprs(a, s, c, sc.weights));
      CHECK(cprs(a, s, std::min(1.0, c + bump), sc.weights) >= cprs(a, s, c, sc.weights));
    }
  }
}

TEST_CASE("AHP on identity and consistent judgments") {
  const auto ones = ahp_weights(AhpMatrix::Ones());
  CHECK(ones.weights.aprs == 1.0 / 3);
  CHECK(ones.weights.sgprs == 1.0 / 3);
  CHECK(ones.weights.cbprs == 1.0 / 3);
  CHECK(ones.consistency_ratio == 0.0);

  AhpMatrix m;
  m << 1, 2, 4, 0.5, 1, 2, 0.25, 0.5, 1;
  const auto w = ahp_weights(m);
  CHECK(w.weights.aprs == Approx(0.5714).epsilon(1e-4));
  CHECK(w.weights.sgprs == Approx(0.2857).epsilon(1e-4));
  CHECK(w.weights.cbprs == Approx(0.1429).epsilon(1e-4));
  CHECK(w.consistency_ratio < 1e-9);
  CHECK(w.consistent);
}

TEST_CASE("AHP of any consistent matrix is its normalized first column") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.1, 9.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector4d v(u(rng), u(rng), u(rng), u(rng));
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = v(i) / v(j);
    const auto r = ahp_priority(m);
    const Eigen::Vector4d expected = m.col(0) / m.col(0).sum();
    CHECK((r.weights - expected).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.consistency_ratio < 1e-9);
  }
}

TEST_CASE("AHP on a perturbed matrix matches a dense eigen-solver") {
  AhpMatrix m;
  m << 1, 3, 5, 1.0 / 3, 1, 4, 0.2, 0.25, 1;
  const auto r = ahp_priority(m);

  Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
  Eigen::Index k = 0;
  solver.eigenvalues().real().maxCoeff(&k);
  const double lambda = solver.eigenvalues()(k).real();
  Eigen::Vector3d vec = solver.eigenvectors().col(k).real();
  vec /= vec.sum();
  const double cr = ((lambda - 3) / 2) / 0.58;

  CHECK(r.lambda_max == Approx(lambda).epsilon(1e-8));
  CHECK((r.weights - vec).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.consistency_ratio == Approx(cr).epsilon(1e-6));
  CHECK(r.consistency_ratio > 0.0);
}

TEST_CASE("AHP rejects invalid judgments") {
  AhpMatrix m = AhpMatrix::Ones();
  m(0, 1) = 2;
  CHECK_THROWS_AS(ahp_weights(m), PreconditionError);
  m(1, 0) = 0.5;
  CHECK_NOTHROW(ahp_weights(m));
  m(2, 2) = -1;
  CHECK_THROWS_AS(ahp_weights(m), PreconditionError);
  CHECK(random_index(3) == 0.58);
}

TEST_CASE("reports carry every scenario") {
  ComponentScores c;
  c.aprs = 0.2;
  c.sgprs = 0.4;
  c.cbprs = 0.6;
  const auto scenarios = default_scenarios();
  const auto r = build_report(3, c, scenarios, {}, {}, {});
  REQUIRE(r.cprs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.cprs[i].first == scenarios[i].name);
    CHECK(r.cprs[i].second == cprs(0.2, 0.4, 0.6, scenarios[i].weights));
  }
}

TEST_CASE("component summary and scenario table") {
  std::vector<RiskReport> one(1);
  one[0].aprs = 0.3;
  const auto s1 = component_summary(one);
  CHECK(s1.aprs.min == 0.3);
  CHECK(s1.aprs.mean == 0.3);
  CHECK(s1.aprs.max == 0.3);
  CHECK_THROWS_AS(component_summary(std::vector<RiskReport>{}), PreconditionError);

  std::vector<RiskReport> reports(3);
  const double a[] = {0.0, 0.35, 1.0}, g[] = {1.0, 0.56, 0.0}, c[] = {0.44, 0.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    reports[i].aprs = a[i];
    reports[i].sgprs = g[i];
    reports[i].cbprs = c[i];
  }
  const auto s = component_summary(reports);
  CHECK(s.aprs.mean == Approx(0.45));
  CHECK(s.sgprs.mean == Approx(0.52));
  CHECK(s.cbprs.mean == Approx(0.48));
  const auto rows = scenario_table(s, default_scenarios());
  REQUIRE(rows.size() == 3);
  CHECK(std::abs(rows[0].cprs - 0.478) < 1e-3);
  CHECK(std::abs(rows[1].cprs - 0.486) < 1e-3);
  CHECK(std::abs(rows[2].cprs - 0.501) < 1e-3);
}

TEST_CASE("attribute recommendations") {
  const auto g = testing::graph_of({{0, 1}, {1, 2}, {2, 3}});
  std::vector<UserProfile> profiles{
      testing::profile(0, {{"Email", "a", PrivacyLevel::Public}}),
      testing::profile(1, {{"Email", "b", PrivacyLevel::OnlyMe}}),
      testing::profile(2, {}), testing::profile(3, {})};
  const auto stats = compute_attribute_stats(profiles, 4);
  const double s_email = sensitivity(stats, AttributeKind("Email"));

  const auto recs = attribute_recommendations(profiles[0], stats, g, {}, 0.1);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].item == "Email");
  CHECK(recs[0].current == PrivacyLevel::Public);
  REQUIRE(recs[0].suggestions.size() == 2);
  CHECK(recs[0].suggestions[1].setting == PrivacyLevel::OnlyMe);
  CHECK(recs[0].suggestions[1].delta == Approx(s_email * 0.9).epsilon(1e-12));
  // Friends-only: one friend of four users.
  CHECK(recs[0].suggestions[0].delta == Approx(s_email * 0.75).epsilon(1e-12));

  CHECK(attribute_recommendations(profiles[1], stats, g, {}, 0.1).empty());
  CHECK(attribute_recommendations(profiles[2], stats, g, {}, 0.1).empty());
}

TEST_CASE("post recommendations use the supplied recomputation") {
  PostRisk a;
  a.post_id = "a";
  a.total = 2.0;
  PostRisk b;
  b.post_id = "b";
  b.total = 0.01;
  const std::vector<PostRisk> risks{a, b};
  const std::vector<PrivacyLevel> levels{PrivacyLevel::Public, PrivacyLevel::Public};
  const auto recs = post_recommendations(risks, levels, 2.01, 0.1, [&](std::size_t i, PrivacyLevel l) {
    const double v = l == PrivacyLevel::OnlyMe ? 0.1 : 0.5;
    return 2.01 - risks[i].total * (1 - v);
  });
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].item == "a");
  CHECK(recs[0].kind == Recommendation::Kind::Post);
  CHECK(recs[0].suggestions[1].delta == Approx(1.8));
}
