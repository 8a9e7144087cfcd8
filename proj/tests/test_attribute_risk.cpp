// Attribute sensitivity, visibility and per-user attribute risk.

#include <doctest.h>

#include <cmath>

#include "privrisk/attribute_risk.hpp"
#include "support.hpp"

using namespace privrisk;
using doctest::Approx;

namespace {

AttributeStats stats_of(std::size_t users, std::map<std::string, std::size_t> freq) {
  AttributeStats s;
  s.users = users;
  for (auto& [name, f] : freq) s.frequency[AttributeKind(name)] = f;
  return s;
}

}  // namespace

TEST_CASE("sensitivity hand values") {
  const auto s = stats_of(4, {{"Email", 2}, {"Mobile", 0}});
  CHECK(sensitivity(s, AttributeKind("Email")) == Approx(2.0 / std::log2(3.0)).epsilon(1e-12));
  CHECK(sensitivity(s, AttributeKind("Email")) == Approx(1.26186).epsilon(1e-5));
  CHECK(sensitivity(s, AttributeKind("Mobile")) == 0.0);
  CHECK(sensitivity(s, AttributeKind("Unseen")) == 0.0);
  CHECK(sensitivity(stats_of(100, {{"Email", 100}}), AttributeKind("Email")) == 100.0);
}

TEST_CASE("inverse-frequency sensitivity scores rare attributes higher") {
  const auto s = stats_of(100, {{"Rare", 1}, {"Common", 90}});
  const auto rare = sensitivity(s, AttributeKind("Rare"), SensitivityModel::InverseFrequency);
  const auto common = sensitivity(s, AttributeKind("Common"), SensitivityModel::InverseFrequency);
  CHECK(rare == Approx(std::log2(101.0)));
  CHECK(rare > common);
}

TEST_CASE("visibility hand values") {
  using L = PrivacyLevel;
  CHECK(visibility({L::Public}, 0, 10) == 1.0);
  CHECK(visibility({L::Public}, 9, 10) == 1.0);
  CHECK(visibility({L::OnlyMe}, 5, 10) == 0.1);
  CHECK(visibility({L::FriendsOnly}, 324, 4039) == Approx(0.080218).epsilon(1e-5));
  CHECK(visibility({L::OnlyMe}, 5, 10, 0.05) == 0.05);
  CHECK_THROWS_AS(visibility({L::FriendsOnly}, 11, 10), PreconditionError);
  CHECK_THROWS_AS(visibility({L::Public}, 0, 0), PreconditionError);
}

TEST_CASE("attribute risk is the product") {
  CHECK(attribute_risk(2.0, 0.5) == 1.0);
  CHECK(attribute_risk(3.7, 0.0) == 0.0);
  CHECK(attribute_risk(1.26186, 0.1) == Approx(0.126186).epsilon(1e-9));
}

TEST_CASE("aprs sums present attributes") {
  // 4 users; user 0 has two friends.
  const auto g = testing::graph_of({{0, 1}, {0, 2}, {2, 3}});
  using L = PrivacyLevel;
  std::vector<UserProfile> profiles{
      testing::profile(0, {{"Email", "a", L::OnlyMe}, {"School", "s", L::FriendsOnly}}),
      testing::profile(1, {{"Email", "b", L::Public}}),
      testing::profile(2, {}),
      testing::profile(3, {{"School", "t", L::Public}})};
  profiles[2].attributes[AttributeKind("Mobile")] = AttributeEntry{std::nullopt, {L::Public}};
  const auto stats = compute_attribute_stats(profiles, g.node_count());
  CHECK(stats.frequency_of(AttributeKind("Email")) == 2);
  CHECK(stats.frequency_of(AttributeKind("Mobile")) == 0);

  const double s2 = 2.0 / std::log2(3.0);   // f = 2 of m = 4
  const auto r0 = aprs(profiles[0], stats, g);
  CHECK(r0.raw == Approx(s2 * 0.1 + s2 * 2.0 / 4.0).epsilon(1e-12));
  CHECK(r0.breakdown.at("Email") == Approx(s2 * 0.1).epsilon(1e-12));
  CHECK(r0.breakdown.at("School") == Approx(s2 * 0.5).epsilon(1e-12));

  const auto r2 = aprs(profiles[2], stats, g);
  CHECK(r2.raw == 0.0);
  CHECK(r2.breakdown.empty());
}

TEST_CASE("single-term aprs equals the hand value") {
  const auto g = testing::graph_of({{0, 1}, {2, 3}});
  const auto stats = stats_of(4, {{"Email", 2}});
  const auto p = testing::profile(0, {{"Email", "x", PrivacyLevel::OnlyMe}});
  CHECK(aprs(p, stats, g).raw == Approx(0.126186).epsilon(1e-5));
}

TEST_CASE("aprs matches an independent per-term recomputation on random profiles") {
  std::mt19937_64 rng(99);
  const auto g = testing::random_graph(60, 0.1, rng);
  const std::vector<std::string> names{"Email", "Mobile", "School", "Workplace", "Gender"};
  std::uniform_int_distribution<int> level(0, 2);
  std::bernoulli_distribution present(0.6);
  std::vector<UserProfile> profiles;
  for (UserId u = 0; u < 60; ++u) {
    UserProfile p{u, {}};
    for (const auto& n : names)
      if (present(rng))
        p.attributes[AttributeKind(n)] = {"v", {static_cast<PrivacyLevel>(level(rng))}};
    profiles.push_back(p);
  }
  const auto stats = compute_attribute_stats(profiles, 60);
  for (const auto& p : profiles) {
    double expected = 0.0;
    for (const auto& [kind, entry] : p.attributes) {
      std::size_t f = 0;
      for (const auto& q : profiles) f += q.attributes.count(kind);
      const double s = f == 0 ? 0.0 : f / std::log2(60.0 / f + 1.0);
      const double deg = static_cast<double>(g.degree(g.index_of(p.user)));
      const double v = entry.setting.level == PrivacyLevel::Public        ? 1.0
                       : entry.setting.level == PrivacyLevel::FriendsOnly ? deg / 60.0
                                                                           : 0.1;
      expected += s * v;
    }
    CHECK(aprs(p, stats, g).raw == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("widening a setting never lowers aprs") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_graph(30, 0.3, rng);
    const auto stats = stats_of(30, {{"Email", 1 + rng() % 30}});
    const UserId u = rng() % 30;
    const auto degree = g.degree(g.index_of(u));
    const auto score = [&](PrivacyLevel l) {
      return aprs(testing::profile(u, {{"Email", "x", l}}), stats, g).raw;
    };
    CHECK(score(PrivacyLevel::Public) >= score(PrivacyLevel::FriendsOnly));
    if (degree > 0.1 * 30) CHECK(score(PrivacyLevel::FriendsOnly) >= score(PrivacyLevel::OnlyMe));
  }
}
