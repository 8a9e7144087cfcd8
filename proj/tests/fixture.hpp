#pragma once

// Small hand-built dataset shared by the pipeline, service and CLI tests.

#include <memory>

#include "privrisk/pipeline.hpp"
#include "support.hpp"

namespace privrisk::testing {

/// Users 1..8. User 1 has three friends (2, 3, 4) that are not linked to one
/// another; 8 is isolated; 5-6-7 form a triangle hanging off 4.
inline std::shared_ptr<const Dataset> small_dataset() {
  using L = PrivacyLevel;
  auto graph = graph_of({{1, 2}, {1, 3}, {1, 4}, {4, 5}, {5, 6}, {6, 7}, {5, 7}}, {8});
  std::vector<UserProfile> profiles{
      profile(1, {{"Email", "u1@example.org", L::Public}, {"School", "Central", L::FriendsOnly},
                  {"Mobile", "555-0001", L::Public}}),
      profile(2, {{"Email", "u2@example.org", L::OnlyMe}, {"Gender", "female", L::Public}}),
      profile(3, {{"School", "Central", L::Public}}),
      profile(4, {{"Email", "u4@example.org", L::FriendsOnly}, {"Gender", "male", L::Public}}),
      profile(5, {{"Mobile", "555-0005", L::OnlyMe}}),
      profile(6, {{"Gender", "female", L::FriendsOnly}, {"School", "Tech", L::Public}}),
      profile(7, {}),
      profile(8, {{"Email", "u8@example.org", L::Public}}),
  };
  profiles[6].attributes[AttributeKind("Email")] = AttributeEntry{std::nullopt, {L::Public}};

  const auto post = [](std::string id, UserId author, std::string text, L level,
                       std::int64_t ts, std::vector<Comment> comments = {}) {
    Post p;
    p.id = std::move(id);
    p.author = author;
    p.text = std::move(text);
    p.timestamp = ts;
    p.visibility_setting.level = level;
    p.comments = std::move(comments);
    return p;
  };
  std::vector<Post> posts{
      post("p1", 1, "Had lunch with Barack Obama in Chicago on May 5, 2020", L::Public, 100,
           {{"c1", 2, "Say hi to Emily Chen for me", 101},
            {"c2", 3, "Reach me at friend@example.org", 102}}),
      post("p2", 1, "Reach me at u1@example.org for details", L::FriendsOnly, 200),
      post("p3", 2, "What a lovely morning", L::Public, 300, {{"c3", 1, "I was in Boston too", 301}}),
      post("p4", 4, "Moving to Seattle next month to start at Google", L::OnlyMe, 400),
      post("p5", 6, "Call me at 555-201-3344", L::Public, 500),
      post("p6", 1, "Paid $120 for tickets on December 25, 2021", L::Public, 600),
  };
  return std::make_shared<const Dataset>(
      Dataset::assemble(std::move(graph), std::move(profiles), std::move(posts)));
}

}  // namespace privrisk::testing
