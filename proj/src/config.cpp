#include "privrisk/config.hpp"

#include <fstream>

namespace privrisk {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

EngineConfig EngineConfig::defaults() {
  EngineConfig c;
  for (auto name : builtin_attribute_names()) c.attributes.emplace_back(name);
  for (auto type : default_entity_types()) c.entity_types.emplace_back(type);
  c.gazetteer_dir = std::filesystem::path(PRIVRISK_DATA_DIR) / "gazetteers";
  return c;
}

std::vector<WeightScenario> EngineConfig::all_scenarios() const {
  auto out = scenarios;
  if (ahp) out.push_back({"ahp", ahp_weights(*ahp).weights});
  return out;
}

void EngineConfig::validate() const {
  if (attributes.empty()) throw PreconditionError("config lists no attributes");
  for (const auto& type : entity_types)
    if (!sensitivity.contains(type))
      throw PreconditionError("entity type " + type + " has no sensitivity weight");
  if (!(only_me_visibility >= 0.0 && only_me_visibility <= 1.0))
    throw PreconditionError("only_me visibility must lie in [0, 1]");
  for (const auto& s : scenarios) {
    try {
      s.weights.validate();
    } catch (const PreconditionError& e) {
      throw PreconditionError("scenario " + s.name + ": " + e.what());
    }
  }
  simrank.validate();
  pagerank.validate();
  sgprs_weights.validate();
  homophily.validate();
  if (recommendation_threshold < 0.0) throw PreconditionError("recommendation threshold must be >= 0");
  if (neighbor_limit == 0) throw PreconditionError("neighbor limit must be positive");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

std::array<double, 3> read_visibility(const json& j) {
  if (j.is_array()) return j.get<std::array<double, 3>>();
  return {j.value("public", 0.0), j.value("friends", 0.0), j.value("only_me", 0.0)};
}

}  // namespace

EngineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  EngineConfig c = EngineConfig::defaults();
  try {
    read(j, "attributes", c.attributes);
    read(j, "entity_types", c.entity_types);
    if (j.contains("sensitivity")) {
      auto weights = std::map<std::string, double>(c.sensitivity.weights().begin(),
                                                   c.sensitivity.weights().end());
      for (const auto& [type, w] : j["sensitivity"].items()) weights[type] = w.get<double>();
      c.sensitivity = SensitivityTable(std::move(weights));
    }
    if (j.contains("visibility")) read(j["visibility"], "only_me", c.only_me_visibility);
    if (j.contains("sensitivity_model")) {
      const auto m = j["sensitivity_model"].get<std::string>();
      if (m == "afiuf") c.sensitivity_model = SensitivityModel::Afiuf;
      else if (m == "inverse") c.sensitivity_model = SensitivityModel::InverseFrequency;
      else throw DataError("unknown sensitivity_model '" + m + "'");
    }
    if (j.contains("normalization")) {
      const auto m = j["normalization"].get<std::string>();
      if (m == "minmax") c.normalization = Normalization::MinMax;
      else if (m == "rank") c.normalization = Normalization::Rank;
      else throw DataError("unknown normalization '" + m + "'");
    }
    if (j.contains("scenarios")) {
      for (const auto& s : j["scenarios"]) {
        const auto name = s.at("name").get<std::string>();
        const auto w = s.at("weights").get<std::array<double, 3>>();
        auto it = std::find_if(c.scenarios.begin(), c.scenarios.end(),
                               [&](const auto& existing) { return existing.name == name; });
        if (it != c.scenarios.end()) {
          if (it->weights.aprs != w[0] || it->weights.sgprs != w[1] || it->weights.cbprs != w[2])
            throw DataError("scenario '" + name + "' is a built-in preset and cannot be redefined");
          continue;
        }
        c.scenarios.push_back({name, {w[0], w[1], w[2]}});
      }
    }
    if (j.contains("ahp") && !j["ahp"].is_null()) {
      const auto rows = j["ahp"].get<std::array<std::array<double, 3>, 3>>();
      AhpMatrix m;
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) m(r, col) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      c.ahp = m;
    }
    if (j.contains("simrank")) {
      const auto& s = j["simrank"];
      read(s, "decay", c.simrank.decay);
      read(s, "max_iterations", c.simrank.max_iterations);
      read(s, "epsilon", c.simrank.epsilon);
      if (s.contains("pair_scope")) {
        const auto scope = s["pair_scope"].get<std::string>();
        if (scope == "neighbors") c.simrank.pair_scope = SimRankParams::PairScope::NeighborsOnly;
        else if (scope == "all") c.simrank.pair_scope = SimRankParams::PairScope::AllPairs;
        else throw DataError("unknown simrank pair_scope '" + scope + "'");
      }
    }
    if (j.contains("pagerank")) {
      const auto& p = j["pagerank"];
      read(p, "damping", c.pagerank.damping);
      read(p, "max_iterations", c.pagerank.max_iterations);
      read(p, "epsilon", c.pagerank.epsilon);
    }
    if (j.contains("sgprs_weights")) {
      read(j["sgprs_weights"], "sim", c.sgprs_weights.sim);
      read(j["sgprs_weights"], "imp", c.sgprs_weights.imp);
    }
    read(j, "recommendation_threshold", c.recommendation_threshold);
    read(j, "commenter_attribution", c.commenter_attribution);
    if (j.contains("default_post_visibility"))
      c.default_post_visibility = parse_privacy_level(j["default_post_visibility"].get<std::string>());
    if (j.contains("gazetteer_dir")) {
      std::filesystem::path dir = j["gazetteer_dir"].get<std::string>();
      c.gazetteer_dir = dir.is_absolute() ? dir : base_dir / dir;
    }
    if (j.contains("homophily")) {
      const auto& h = j["homophily"];
      read(h, "strength", c.homophily.strength);
      if (h.contains("attributes")) {
        c.homophily.attributes.clear();
        for (const auto& a : h["attributes"]) {
          AttributeDistribution d;
          d.attribute = a.at("attribute").get<std::string>();
          read(a, "presence", d.presence);
          read(a, "unique", d.unique_values);
          if (a.contains("values")) {
            const auto& v = a["values"];
            if (v.is_object())
              for (const auto& [value, p] : v.items()) d.values.emplace_back(value, p.get<double>());
            else
              for (const auto& pair : v)
                d.values.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
          }
          if (a.contains("visibility")) d.visibility = read_visibility(a["visibility"]);
          c.homophily.attributes.push_back(std::move(d));
        }
      }
    }
    if (j.contains("service")) read(j["service"], "neighbor_limit", c.neighbor_limit);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::filesystem::filesystem_error(
        "cannot open config", path, std::make_error_code(std::errc::no_such_file_or_directory));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json to_json(const EngineConfig& c) {
  json j;
  j["attributes"] = c.attributes;
  j["entity_types"] = c.entity_types;
  j["sensitivity"] = json::object();
  for (const auto& [type, w] : c.sensitivity.weights()) j["sensitivity"][type] = w;
  j["visibility"] = {{"only_me", c.only_me_visibility}};
  j["sensitivity_model"] = c.sensitivity_model == SensitivityModel::Afiuf ? "afiuf" : "inverse";
  j["normalization"] = c.normalization == Normalization::MinMax ? "minmax" : "rank";
  j["scenarios"] = json::array();
  for (const auto& s : c.scenarios)
    j["scenarios"].push_back({{"name", s.name},
                              {"weights", {s.weights.aprs, s.weights.sgprs, s.weights.cbprs}}});
  if (c.ahp) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({(*c.ahp)(r, 0), (*c.ahp)(r, 1), (*c.ahp)(r, 2)});
    j["ahp"] = rows;
  } else {
    j["ahp"] = nullptr;
  }
  j["simrank"] = {{"decay", c.simrank.decay},
                  {"max_iterations", c.simrank.max_iterations},
                  {"epsilon", c.simrank.epsilon},
                  {"pair_scope", c.simrank.pair_scope == SimRankParams::PairScope::AllPairs
                                     ? "all" : "neighbors"}};
  j["pagerank"] = {{"damping", c.pagerank.damping},
                   {"max_iterations", c.pagerank.max_iterations},
                   {"epsilon", c.pagerank.epsilon}};
  j["sgprs_weights"] = {{"sim", c.sgprs_weights.sim}, {"imp", c.sgprs_weights.imp}};
  j["recommendation_threshold"] = c.recommendation_threshold;
  j["commenter_attribution"] = c.commenter_attribution;
  j["default_post_visibility"] = std::string(to_string(c.default_post_visibility));
  j["gazetteer_dir"] = c.gazetteer_dir.string();
  json attrs = json::array();
  for (const auto& a : c.homophily.attributes) {
    json values = json::array();
    for (const auto& [v, p] : a.values) values.push_back({v, p});
    attrs.push_back({{"attribute", a.attribute},
                     {"presence", a.presence},
                     {"unique", a.unique_values},
                     {"values", values},
                     {"visibility", {{"public", a.visibility[0]},
                                     {"friends", a.visibility[1]},
                                     {"only_me", a.visibility[2]}}}});
  }
  j["homophily"] = {{"strength", c.homophily.strength}, {"attributes", attrs}};
  j["service"] = {{"neighbor_limit", c.neighbor_limit}};
  return j;
}

std::uint64_t EngineConfig::fingerprint() const { return fnv1a(to_json(*this).dump()); }

}  // namespace privrisk
