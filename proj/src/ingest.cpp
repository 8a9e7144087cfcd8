#include "privrisk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "privrisk/random.hpp"

namespace privrisk {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::filesystem::filesystem_error("cannot open input file", path,
                                                   std::make_error_code(std::errc::no_such_file_or_directory));
  return in;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

SocialGraph parse_edge_list(std::istream& in, const std::string& source) {
  std::vector<std::pair<UserId, UserId>> edges;
  std::vector<UserId> isolated;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_ws(body);
    UserId a = 0;
    UserId b = 0;
    if (fields.size() == 1 && parse_uint(fields[0], a)) {
      isolated.push_back(a);
      continue;
    }
    if (fields.size() != 2 || !parse_uint(fields[0], a) || !parse_uint(fields[1], b))
      throw DataError(source + ":" + std::to_string(line_no) +
                      ": expected two non-negative integer ids, got '" + std::string(body) + "'");
    edges.emplace_back(a, b);
  }
  return SocialGraph::from_edges(edges, isolated);
}

SocialGraph load_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const SocialGraph& graph) {
  for (const auto& [a, b] : graph.edges()) out << a << ' ' << b << '\n';
  for (SocialGraph::Index u = 0; u < graph.node_count(); ++u)
    if (graph.degree(u) == 0) out << graph.id_of(u) << '\n';
}

// ---------------------------------------------------------------------------

std::vector<ProfileRow> parse_profile_rows(std::istream& in, const std::string& source) {
  std::vector<ProfileRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    if (rows.empty() && line.rfind("user_id", 0) == 0) continue;

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    const auto where = source + ":" + std::to_string(line_no);
    if (fields.size() != 4)
      throw DataError(where + ": expected 4 tab-separated fields (user_id, attribute, value, setting)");
    ProfileRow row;
    if (!parse_uint(trim(fields[0]), row.user)) throw DataError(where + ": bad user id");
    row.attribute = std::string(trim(fields[1]));
    if (row.attribute.empty()) throw DataError(where + ": empty attribute name");
    if (!fields[2].empty()) row.value = std::string(fields[2]);
    try {
      row.setting = parse_privacy_level(trim(fields[3]));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    row.line = line_no;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ProfileRow> load_profile_rows(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_profile_rows(in, path.string());
}

void write_profiles(std::ostream& out, std::span<const UserProfile> profiles,
                    std::span<const std::string> attribute_order) {
  out << "user_id\tattribute\tvalue\tsetting\n";
  for (const auto& profile : profiles) {
    for (const auto& name : attribute_order) {
      auto it = profile.attributes.find(AttributeKind(name));
      if (it == profile.attributes.end()) continue;
      out << profile.user << '\t' << name << '\t' << it->second.value.value_or("") << '\t'
          << to_string(it->second.setting.level) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string id_field(const json& record, const char* key, const std::string& where) {
  if (!record.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  const auto& v = record.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw DataError(where + ": field '" + key + "' must be a string or integer");
}

template <typename T>
T required(const json& record, const char* key, const std::string& where) {
  if (!record.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  const auto& v = record.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw DataError(where + ": field '" + key + "' must be a string");
  } else if constexpr (std::is_same_v<T, UserId>) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw DataError(where + ": field '" + key + "' must be a non-negative integer");
  } else {
    if (!v.is_number_integer()) throw DataError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<T>();
}

}  // namespace

std::vector<Post> parse_posts(std::istream& in, const std::string& source,
                              PrivacyLevel default_visibility) {
  std::vector<Post> posts;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++record;
    const auto where = source + ": record " + std::to_string(record);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw DataError(where + ": record must be an object");
    Post post;
    post.id = id_field(j, "id", where);
    post.author = required<UserId>(j, "author", where);
    post.text = required<std::string>(j, "text", where);
    post.timestamp = required<std::int64_t>(j, "timestamp", where);
    post.visibility_setting.level = default_visibility;
    if (j.contains("visibility") && !j["visibility"].is_null()) {
      if (!j["visibility"].is_string()) throw DataError(where + ": visibility must be a string");
      try {
        post.visibility_setting.level = parse_privacy_level(j["visibility"].get<std::string>());
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
    }
    if (j.contains("comments")) {
      if (!j["comments"].is_array()) throw DataError(where + ": comments must be an array");
      std::size_t k = 0;
      for (const auto& c : j["comments"]) {
        const auto cwhere = where + " comment " + std::to_string(k++);
        if (!c.is_object()) throw DataError(cwhere + ": comment must be an object");
        Comment comment;
        comment.id = id_field(c, "id", cwhere);
        comment.author = required<UserId>(c, "author", cwhere);
        comment.text = required<std::string>(c, "text", cwhere);
        comment.timestamp = required<std::int64_t>(c, "timestamp", cwhere);
        post.comments.push_back(std::move(comment));
      }
    }
    posts.push_back(std::move(post));
  }
  std::stable_sort(posts.begin(), posts.end(),
                   [](const Post& a, const Post& b) { return a.timestamp < b.timestamp; });
  return posts;
}

std::vector<Post> load_posts(const std::filesystem::path& path, PrivacyLevel default_visibility) {
  auto in = open_input(path);
  return parse_posts(in, path.string(), default_visibility);
}

void write_posts(std::ostream& out, std::span<const Post> posts) {
  for (const auto& post : posts) {
    json j;
    j["id"] = post.id;
    j["author"] = post.author;
    j["text"] = post.text;
    j["timestamp"] = post.timestamp;
    j["visibility"] = std::string(to_string(post.visibility_setting.level));
    json comments = json::array();
    for (const auto& c : post.comments)
      comments.push_back(
          {{"id", c.id}, {"author", c.author}, {"text", c.text}, {"timestamp", c.timestamp}});
    j["comments"] = std::move(comments);
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------

void HomophilyConfig::validate() const {
  if (!(strength >= 0.0 && strength <= 1.0))
    throw PreconditionError("homophily strength must lie in [0, 1]");
  for (const auto& a : attributes) {
    if (!(a.presence >= 0.0 && a.presence <= 1.0))
      throw PreconditionError(a.attribute + ": presence must lie in [0, 1]");
    const double vis = a.visibility[0] + a.visibility[1] + a.visibility[2];
    if (std::abs(vis - 1.0) > 1e-9 ||
        std::any_of(a.visibility.begin(), a.visibility.end(), [](double p) { return p < 0.0; }))
      throw PreconditionError(a.attribute + ": visibility distribution must sum to 1");
    if (!a.unique_values) {
      double total = 0.0;
      for (const auto& [_, p] : a.values) {
        if (p < 0.0) throw PreconditionError(a.attribute + ": negative value probability");
        total += p;
      }
      if (a.values.empty() || std::abs(total - 1.0) > 1e-9)
        throw PreconditionError(a.attribute + ": value distribution must sum to 1");
    }
  }
}

namespace {

std::vector<std::pair<std::string, double>> uniform_values(std::initializer_list<const char*> names) {
  std::vector<std::pair<std::string, double>> out;
  const double p = 1.0 / static_cast<double>(names.size());
  for (const char* n : names) out.emplace_back(n, p);
  // Absorb rounding so the distribution sums to one exactly enough.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) total += out[i].second;
  out.back().second = 1.0 - total;
  return out;
}

}  // namespace

HomophilyConfig HomophilyConfig::defaults() {
  HomophilyConfig c;
  c.strength = 0.6;
  const auto cities = uniform_values({"Chicago", "Boston", "Seattle", "Austin", "Denver", "Atlanta",
                                      "Miami", "Portland", "Phoenix", "Detroit", "Houston", "Dallas"});
  std::vector<std::pair<std::string, double>> years;
  for (int y = 1970; y < 2006; ++y) years.emplace_back(std::to_string(y) + "-01-01", 1.0 / 36.0);
  c.attributes = {
      {"Mobile", 0.7, true, {}, {0.3, 0.3, 0.4}},
      {"Email", 0.9, true, {}, {0.2, 0.2, 0.6}},
      {"Gender", 0.95, false, {{"female", 0.48}, {"male", 0.48}, {"nonbinary", 0.04}}, {0.6, 0.3, 0.1}},
      {"Pronoun", 0.6, false, {{"she/her", 0.45}, {"he/him", 0.45}, {"they/them", 0.10}}, {0.5, 0.3, 0.2}},
      {"DateOfBirth", 0.8, false, years, {0.3, 0.4, 0.3}},
      {"RelationshipStatus", 0.6, false,
       {{"single", 0.4}, {"in_a_relationship", 0.25}, {"married", 0.3}, {"complicated", 0.05}},
       {0.4, 0.4, 0.2}},
      {"FromLocation", 0.8, false, cities, {0.5, 0.4, 0.1}},
      {"LivesInLocation", 0.8, false, cities, {0.4, 0.4, 0.2}},
      {"School", 0.7, false,
       uniform_values({"Lincoln High", "Roosevelt High", "Central High", "State University",
                       "City College", "Tech Institute", "Westside Academy", "Northgate School"}),
       {0.3, 0.6, 0.1}},
      {"Workplace", 0.65, false,
       uniform_values({"Acme Corp", "Globex", "Initech", "Umbrella Health", "Stark Industries",
                       "Wayne Enterprises", "Hooli", "City Hospital", "Public Schools", "Self-employed"}),
       {0.4, 0.4, 0.2}},
  };
  return c;
}

std::vector<UserProfile> generate_synthetic_profiles(const SocialGraph& graph,
                                                     const HomophilyConfig& config,
                                                     std::uint64_t seed) {
  config.validate();
  using Index = SocialGraph::Index;
  const std::size_t n = graph.node_count();

  std::vector<Index> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  for (Index root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::queue<Index> q;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
      const Index u = q.front();
      q.pop();
      order.push_back(u);
      for (Index v : graph.neighbors(u))
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
    }
  }

  std::vector<UserProfile> profiles(n);
  for (Index u = 0; u < n; ++u) profiles[u].user = graph.id_of(u);

  Rng rng(seed);
  // assigned[a][u]: index into config.attributes[a].values, or -1.
  std::vector<std::vector<int>> assigned(config.attributes.size(), std::vector<int>(n, -1));
  std::vector<double> weights;
  std::vector<Index> donors;
  for (Index u : order) {
    for (std::size_t a = 0; a < config.attributes.size(); ++a) {
      const auto& dist = config.attributes[a];
      AttributeEntry entry;
      if (rng.bernoulli(dist.presence)) {
        if (dist.unique_values) {
          entry.value = dist.attribute + ":" + std::to_string(graph.id_of(u));
        } else {
          donors.clear();
          for (Index v : graph.neighbors(u))
            if (assigned[a][v] >= 0) donors.push_back(v);
          int choice;
          if (!donors.empty() && rng.bernoulli(config.strength)) {
            choice = assigned[a][donors[rng.below(donors.size())]];
          } else {
            weights.clear();
            for (const auto& [_, p] : dist.values) weights.push_back(p);
            choice = static_cast<int>(rng.categorical(weights));
          }
          assigned[a][u] = choice;
          entry.value = dist.values[static_cast<std::size_t>(choice)].first;
        }
      }
      entry.setting.level = static_cast<PrivacyLevel>(rng.categorical(dist.visibility));
      profiles[u].attributes[AttributeKind(dist.attribute)] = std::move(entry);
    }
  }
  return profiles;
}

// ---------------------------------------------------------------------------

std::int64_t utc_month_index(std::int64_t epoch_seconds) {
  // Civil-from-days (proleptic Gregorian), valid for the whole int64 day range.
  std::int64_t days = epoch_seconds / 86400;
  if (epoch_seconds % 86400 < 0) --days;
  const std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t year = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t month = mp < 10 ? mp + 3 : mp - 9;
  if (month <= 2) ++year;
  return (year - 1970) * 12 + (month - 1);
}

std::vector<Post> temporal_uniform_sample(std::span<const Post> posts, std::size_t k,
                                          std::uint64_t seed) {
  std::vector<std::size_t> chosen;
  if (k >= posts.size()) {
    chosen.resize(posts.size());
    std::iota(chosen.begin(), chosen.end(), 0);
  } else if (k > 0) {
    std::map<std::int64_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < posts.size(); ++i)
      buckets[utc_month_index(posts[i].timestamp)].push_back(i);
    const std::size_t months = buckets.size();
    const std::size_t quota = k / months;
    const std::size_t remainder = k % months;
    Rng rng(seed);
    std::size_t m = 0;
    for (auto& [_, members] : buckets) {
      const std::size_t want = std::min(members.size(), quota + (m < remainder ? 1 : 0));
      for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + rng.below(members.size() - i);
        std::swap(members[i], members[j]);
      }
      chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(want));
      ++m;
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    if (posts[a].timestamp != posts[b].timestamp) return posts[a].timestamp < posts[b].timestamp;
    return a < b;
  });
  std::vector<Post> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(posts[i]);
  return out;
}

std::vector<Post> assign_posts_round_robin(std::span<const Post> posts,
                                           std::span<const UserId> users, std::uint64_t seed) {
  if (users.empty()) throw PreconditionError("cannot assign posts to an empty user set");
  Rng rng(seed);
  std::vector<Post> out(posts.begin(), posts.end());
  for (auto& post : out) {
    post.author = users[rng.below(users.size())];
    for (auto& c : post.comments) c.author = users[rng.below(users.size())];
  }
  return out;
}

// ---------------------------------------------------------------------------

SocialGraph generate_community_graph(const CommunityGraphSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.nodes;
  const std::size_t groups = std::max<std::size_t>(1, std::min(spec.communities, n));
  Rng rng(seed);

  // Community sizes proportional to 1..groups (ego networks differ widely in size).
  std::vector<std::size_t> sizes(groups);
  const std::size_t weight_total = groups * (groups + 1) / 2;
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    sizes[g] = std::max<std::size_t>(2, n * (g + 1) / weight_total);
    assigned += sizes[g];
  }
  while (assigned > n) {
    auto it = std::max_element(sizes.begin(), sizes.end());
    --*it;
    --assigned;
  }
  sizes.back() += n - assigned;
  std::vector<std::size_t> first(groups + 1, 0);
  for (std::size_t g = 0; g < groups; ++g) first[g + 1] = first[g] + sizes[g];

  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<UserId, UserId>> edges;
  const auto add = [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    if (!seen.insert(static_cast<std::uint64_t>(a) * n + b).second) return false;
    edges.emplace_back(a, b);
    return true;
  };

  for (std::size_t g = 0; g < groups; ++g)
    for (std::size_t v = first[g] + 1; v < first[g + 1]; ++v) add(first[g], v);
  for (std::size_t g = 0; g + 1 < groups; ++g) add(first[g], first[g + 1]);
  if (edges.size() > spec.edges)
    throw PreconditionError("edge budget too small for the hub structure");

  const std::size_t cross_target =
      std::min(spec.edges - edges.size(), static_cast<std::size_t>(spec.cross_fraction * spec.edges));
  std::size_t capacity = 0;
  for (auto s : sizes) capacity += s * (s - 1) / 2;
  if (spec.edges - cross_target > capacity)
    throw PreconditionError("edge count exceeds community capacity");

  const std::size_t cross_end = edges.size() + cross_target;
  while (edges.size() < cross_end && groups > 1) add(rng.below(n), rng.below(n));

  std::vector<double> group_weight(groups);
  for (std::size_t g = 0; g < groups; ++g)
    group_weight[g] = static_cast<double>(sizes[g]) * static_cast<double>(sizes[g]);
  while (edges.size() < spec.edges) {
    const std::size_t g = rng.categorical(group_weight);
    const auto pick = [&] {
      const double u = rng.uniform();
      return first[g] + static_cast<std::size_t>(static_cast<double>(sizes[g]) * u * u);
    };
    add(pick(), first[g] + rng.below(sizes[g]));
  }
  return SocialGraph::from_edges(edges);
}

namespace {

constexpr std::array kPeople = {"Barack Obama", "Taylor Swift", "Priya Sharma", "John Smith",
                                "Maria Garcia", "David Lee", "Emily Chen", "Rahul Verma"};
constexpr std::array kPlaces = {"Chicago", "Boston", "Seattle", "Mumbai", "Delhi", "London",
                                "Paris", "Austin", "Bangalore", "Toronto"};
constexpr std::array kOrgs = {"Google", "Microsoft", "Infosys", "Red Cross", "Stanford University",
                              "City Hospital", "Amazon"};
constexpr std::array kDates = {"May 5, 2020", "January 12", "March 3rd", "yesterday",
                               "December 25, 2021", "2019"};
constexpr std::array kPlain = {"What a lovely morning", "Just finished a great book",
                               "Coffee first, then everything else", "Can't wait for the weekend",
                               "Trying a new recipe tonight", "The game last night was wild",
                               "Feeling grateful", "Anyone else love rainy days"};

std::string fill_post(Rng& rng, UserId author) {
  const auto pick = [&](const auto& arr) { return std::string(arr[rng.below(arr.size())]); };
  switch (rng.below(10)) {
    case 0: return "Had lunch with " + pick(kPeople) + " in " + pick(kPlaces) + " " + pick(kDates);
    case 1: return "Reach me at user" + std::to_string(author) + "@example.org for details";
    case 2: return "Moving to " + pick(kPlaces) + " next month to start at " + pick(kOrgs);
    case 3: return "Call me at 555-" + std::to_string(100 + rng.below(900)) + "-" +
                   std::to_string(1000 + rng.below(9000));
    case 4: return "Paid $" + std::to_string(20 + rng.below(980)) + " for tickets on " + pick(kDates);
    case 5: return "Happy birthday to me, born " + pick(kDates);
    default: return pick(kPlain);
  }
}

std::string fill_comment(Rng& rng) {
  const auto pick = [&](const auto& arr) { return std::string(arr[rng.below(arr.size())]); };
  switch (rng.below(6)) {
    case 0: return "Say hi to " + pick(kPeople) + " for me";
    case 1: return "I was in " + pick(kPlaces) + " too";
    case 2: return "See you at 7:30 pm";
    default: return pick(kPlain);
  }
}

}  // namespace

std::vector<Post> generate_synthetic_posts(const SyntheticPostSpec& spec,
                                           std::span<const UserId> users, std::uint64_t seed) {
  if (users.empty()) throw PreconditionError("synthetic posts need at least one user");
  Rng rng(seed);
  const std::int64_t span = static_cast<std::int64_t>(spec.months) * 30 * 86400;
  const auto visibilities = std::array{0.7, 0.2, 0.1};
  std::vector<Post> posts;
  posts.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Post p;
    p.id = "p" + std::to_string(i);
    p.author = users[rng.below(users.size())];
    p.timestamp = spec.start_epoch + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span)));
    p.text = fill_post(rng, p.author);
    p.visibility_setting.level = static_cast<PrivacyLevel>(rng.categorical(visibilities));
    const std::size_t comments = rng.below(spec.max_comments + 1);
    for (std::size_t k = 0; k < comments; ++k) {
      Comment c;
      c.id = p.id + "c" + std::to_string(k);
      c.author = users[rng.below(users.size())];
      c.text = fill_comment(rng);
      c.timestamp = p.timestamp + 60 * static_cast<std::int64_t>(k + 1);
      p.comments.push_back(std::move(c));
    }
    posts.push_back(std::move(p));
  }
  std::stable_sort(posts.begin(), posts.end(),
                   [](const Post& a, const Post& b) { return a.timestamp < b.timestamp; });
  return posts;
}

}  // namespace privrisk
