// Entity extraction and post / comment / user content risk.

#include <doctest.h>

#include <random>
#include <sstream>

#include "privrisk/content_risk.hpp"
#include "support.hpp"

using namespace privrisk;
using doctest::Approx;

namespace {

// Treats every whitespace token that names a known type as one entity of
// that type, so tests control the entity multiset exactly.
class TokenExtractor final : public EntityExtractor {
public:
  std::vector<SensitiveEntity> extract(std::string_view text) const override {
    std::vector<SensitiveEntity> out;
    const auto table = SensitivityTable::defaults();
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && text[i] == ' ') ++i;
      const std::size_t start = i;
      while (i < text.size() && text[i] != ' ') ++i;
      const auto token = text.substr(start, i - start);
      if (!token.empty() && table.contains(token))
        out.push_back({std::string(token), start, i, std::string(token)});
    }
    return out;
  }
};

std::vector<std::string> types_of(const std::vector<SensitiveEntity>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(e.entity_type);
  return out;
}

Post make_post(std::string id, UserId author, std::string text,
               std::vector<std::string> comments = {}) {
  Post p;
  p.id = std::move(id);
  p.author = author;
  p.text = std::move(text);
  for (std::size_t k = 0; k < comments.size(); ++k)
    p.comments.push_back({p.id + "c" + std::to_string(k), author + 1, comments[k], 0});
  return p;
}

}  // namespace

TEST_CASE("rule extractor examples") {
  const auto& x = default_extractor();
  const std::string email_text = "Contact me at jane@example.org";
  const auto email = x.extract(email_text);
  REQUIRE(email.size() == 1);
  CHECK(email[0].entity_type == "EMAIL");
  CHECK(email[0].surface == "jane@example.org");
  CHECK(email_text.substr(email[0].start, email[0].end - email[0].start) == email[0].surface);

  CHECK(x.extract("").empty());

  const auto mixed = x.extract("I met Barack Obama in Chicago on May 5, 2020");
  CHECK(types_of(mixed) == std::vector<std::string>{"PERSON", "GPE", "DATE"});
  CHECK(mixed[0].surface == "Barack Obama");
  CHECK(mixed[2].surface == "May 5, 2020");
}

TEST_CASE("rule extractor patterns") {
  const auto& x = default_extractor();
  CHECK(types_of(x.extract("call 555-123-4567 now")) == std::vector<std::string>{"PHONE"});
  CHECK(types_of(x.extract("paid $250 today")) == std::vector<std::string>{"MONEY", "DATE"});
  CHECK(types_of(x.extract("at 7:30 pm")) == std::vector<std::string>{"TIME"});
  CHECK(types_of(x.extract("up 15% this year")).front() == "PERCENT");
  CHECK(x.extract("nothing to see here").empty());
  // Gazetteer matches respect token boundaries.
  CHECK(x.extract("Chicagoland").empty());
  CHECK(types_of(x.extract("moving to BOSTON")) == std::vector<std::string>{"GPE"});
}

TEST_CASE("rule extractor output is sorted, non-overlapping and span-valid") {
  const auto& x = default_extractor();
  const std::vector<std::string> texts{
      "Had lunch with Emily Chen in Seattle May 5, 2020",
      "Moving to Bangalore next month to start at Stanford University",
      "Reach me at user17@example.org or 555-201-3344 on December 25, 2021",
      "John Smith and Maria Garcia paid $40 for 3 tickets at 8:15 am"};
  for (const auto& t : texts) {
    const auto es = x.extract(t);
    CHECK_FALSE(es.empty());
    for (std::size_t i = 0; i < es.size(); ++i) {
      CHECK(es[i].start < es[i].end);
      CHECK(es[i].end <= t.size());
      CHECK(t.substr(es[i].start, es[i].end - es[i].start) == es[i].surface);
      if (i > 0) CHECK(es[i - 1].end <= es[i].start);
    }
    CHECK(types_of(x.extract(t)) == types_of(es));
  }
}

TEST_CASE("overlaps resolve to the longest match") {
  RuleExtractorConfig config;
  config.gazetteer_order = {"GPE", "ORG"};
  config.gazetteers["GPE"] = {"New York"};
  config.gazetteers["ORG"] = {"New York Times"};
  const RuleExtractor x(config);
  const auto es = x.extract("read the New York Times daily");
  REQUIRE(es.size() == 1);
  CHECK(es[0].entity_type == "ORG");
  CHECK(es[0].surface == "New York Times");
}

TEST_CASE("post sensitivity and risk hand values") {
  const auto table = SensitivityTable::defaults();
  CHECK(post_sensitivity({}, table) == 0.0);
  const std::vector<SensitiveEntity> ep{{"EMAIL", 0, 1, "a"}, {"PERSON", 2, 3, "b"}};
  CHECK(post_sensitivity(ep, table) == Approx(1.8));
  const std::vector<SensitiveEntity> ee{{"EMAIL", 0, 1, "a"}, {"EMAIL", 2, 3, "b"}};
  CHECK(post_sensitivity(ee, table) == 2.0);
  const std::vector<SensitiveEntity> unknown{{"GALAXY", 0, 1, "a"}};
  try {
    post_sensitivity(unknown, table);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("GALAXY") != std::string::npos);
  }
  CHECK(post_risk(1.8, 1.0) == Approx(1.8));
  CHECK(post_risk(1.8, 0.1) == Approx(0.18));
  CHECK(post_risk(0.0, 0.7) == 0.0);
}

TEST_CASE("comment risks inherit the post visibility") {
  const auto table = SensitivityTable::defaults();
  const TokenExtractor x;
  CHECK(comment_risks(make_post("p", 1, "EMAIL"), table, x, 1.0).total == 0.0);

  // Sensitivities 1.0 (EMAIL) and 0.5 (ORG).
  const auto post = make_post("p", 1, "", {"EMAIL", "ORG"});
  const auto pub = comment_risks(post, table, x, 1.0);
  REQUIRE(pub.comments.size() == 2);
  CHECK(pub.comments[0].risk == 1.0);
  CHECK(pub.comments[1].risk == 0.5);
  CHECK(pub.total == 1.5);

  const auto priv = comment_risks(post, table, x, 0.1);
  CHECK(priv.comments[0].risk == Approx(0.1));
}

TEST_CASE("post total and user content risk") {
  const auto table = SensitivityTable::defaults();
  const TokenExtractor x;
  // R(p) = 1.8, R(C(p)) = 1.5.
  const auto p1 = make_post("p1", 1, "EMAIL PERSON", {"EMAIL", "ORG"});
  CHECK(post_total_risk(p1, table, x, 1.0) == Approx(3.3));
  CHECK(post_total_risk(make_post("p", 1, "hello", {"world"}), table, x, 1.0) == 0.0);
  const auto only_comments = make_post("p", 1, "", {"EMAIL"});
  CHECK(post_total_risk(only_comments, table, x, 1.0) ==
        comment_risks(only_comments, table, x, 1.0).total);

  // Only-me post with R = 1.8 * 0.1.
  const auto p2 = make_post("p2", 1, "EMAIL PERSON");
  const std::vector<Post> posts{p1, p2};
  const auto result = cbprs(1, posts, table, x, [](const Post& p) { return p.id == "p1" ? 1.0 : 0.1; });
  CHECK(result.raw == Approx(3.48));
  REQUIRE(result.breakdown.size() == 2);
  CHECK(result.breakdown[1].second == Approx(0.18));

  CHECK(cbprs(1, std::span<const Post>{}, table, x, [](const Post&) { return 1.0; }).raw == 0.0);
  CHECK_THROWS_AS(cbprs(2, posts, table, x, [](const Post&) { return 1.0; }), PreconditionError);
}

TEST_CASE("content risk properties over generated posts") {
  const auto table = SensitivityTable::defaults();
  const TokenExtractor x;
  std::vector<std::string> types;
  for (const auto& [t, w] : table.weights()) types.push_back(t);
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
  std::uniform_int_distribution<int> count(0, 6);
  std::uniform_real_distribution<double> vis(0.0, 1.0);
  const auto sentence = [&] {
    std::string s = "w";
    for (int i = count(rng); i > 0; --i) s += " " + types[pick(rng)] + " w";
    return s;
  };

  for (int trial = 0; trial < 1500; ++trial) {
    std::vector<std::string> comments;
    for (int c = count(rng) % 4; c > 0; --c) comments.push_back(sentence());
    const auto post = make_post("p", 1, sentence(), comments);
    const double v = vis(rng);

    // Oracle: sum of weights over every entity token in post and comments.
    double s_all = 0.0;
    std::istringstream words(post.text);
    for (std::string w; words >> w;) s_all += table.contains(w) ? table.at(w) : 0.0;
    for (const auto& c : post.comments) {
      std::istringstream cw(c.text);
      for (std::string w; cw >> w;) s_all += table.contains(w) ? table.at(w) : 0.0;
    }
    const double total = post_total_risk(post, table, x, v);
    CHECK(total == Approx(s_all * v).epsilon(1e-12));

    // Adding an entity never lowers the total.
    auto bigger = post;
    bigger.text += " " + types[pick(rng)];
    CHECK(post_total_risk(bigger, table, x, v) >= total);

    // Linear in visibility.
    const double k = vis(rng);
    CHECK(post_total_risk(post, table, x, v * k) == Approx(total * k).epsilon(1e-12));
  }
}
