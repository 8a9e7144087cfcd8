#include "privrisk/aggregate.hpp"

#include <algorithm>
#include <numeric>

namespace privrisk {

std::vector<double> normalize_population(std::span<const double> raw, Normalization method) {
  if (raw.empty()) throw PreconditionError("cannot normalize an empty population");
  std::vector<double> out(raw.size());
  if (method == Normalization::MinMax) {
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < raw.size(); ++i)
      out[i] = range > 0.0 ? (raw[i] - *lo) / range : 0.5;
    return out;
  }

  if (raw.size() == 1) return {0.5};
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  const double denom = static_cast<double>(raw.size() - 1);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && raw[order[j + 1]] == raw[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank / denom;
    i = j + 1;
  }
  return out;
}

std::map<UserId, double> normalize_population(const std::map<UserId, double>& raw,
                                              Normalization method) {
  std::vector<double> values;
  values.reserve(raw.size());
  for (const auto& [_, v] : raw) values.push_back(v);
  const auto scaled = normalize_population(values, method);
  std::map<UserId, double> out;
  std::size_t i = 0;
  for (const auto& [user, _] : raw) out.emplace(user, scaled[i++]);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<WeightScenario> default_scenarios() {
  return {
      {"equal", {0.33, 0.33, 0.33}},
      {"content-focused", {0.20, 0.30, 0.50}},
      {"graph-focused", {0.10, 0.60, 0.30}},
  };
}

double random_index(Eigen::Index n) {
  static constexpr std::array<double, 11> kIndex = {0.0,  0.0,  0.0,  0.58, 0.90, 1.12,
                                                    1.24, 1.32, 1.41, 1.45, 1.49};
  if (n < 0 || n >= static_cast<Eigen::Index>(kIndex.size()))
    throw PreconditionError("no random consistency index for n = " + std::to_string(n));
  return kIndex[static_cast<std::size_t>(n)];
}

AhpWeights ahp_weights(const AhpMatrix& matrix) {
  const auto result = ahp_priority(matrix);
  AhpWeights out;
  out.weights = {result.weights(0), result.weights(1), result.weights(2)};
  out.consistency_ratio = result.consistency_ratio;
  out.consistent = result.consistent();
  return out;
}

double cprs(double aprs, double sgprs, double cbprs, const WeightVector& weights) {
  weights.validate();
  return weights.aprs * aprs + weights.sgprs * sgprs + weights.cbprs * cbprs;
}

// ---------------------------------------------------------------------------

RiskReport build_report(UserId user, const ComponentScores& c,
                        std::span<const WeightScenario> scenarios,
                        std::map<std::string, double> attribute_breakdown,
                        std::vector<std::pair<std::string, double>> post_breakdown,
                        std::vector<Recommendation> recommendations) {
  RiskReport report;
  report.user = user;
  report.aprs_raw = c.aprs_raw;
  report.sgprs_raw = c.sgprs_raw;
  report.cbprs_raw = c.cbprs_raw;
  report.aprs = c.aprs;
  report.sgprs = c.sgprs;
  report.cbprs = c.cbprs;
  report.r_struct = c.r_struct;
  report.r_imp = c.r_imp;
  for (const auto& s : scenarios)
    report.cprs.emplace_back(s.name, cprs(c.aprs, c.sgprs, c.cbprs, s.weights));
  report.attribute_breakdown = std::move(attribute_breakdown);
  report.post_breakdown = std::move(post_breakdown);
  report.recommendations = std::move(recommendations);
  return report;
}

std::vector<Recommendation> attribute_recommendations(const UserProfile& profile,
                                                      const AttributeStats& stats,
                                                      const SocialGraph& graph,
                                                      const AprsOptions& options, double threshold) {
  const auto current = aprs(profile, stats, graph, options);
  std::vector<Recommendation> out;
  for (const auto& [kind, entry] : profile.attributes) {
    if (!entry.present()) continue;
    const double term = current.breakdown.at(kind.name());
    if (term <= 0.0 || term < threshold * current.raw) continue;
    Recommendation rec;
    rec.kind = Recommendation::Kind::Attribute;
    rec.item = kind.name();
    rec.current = entry.setting.level;
    rec.term = term;
    for (int s = strictness(entry.setting.level) + 1; s <= strictness(PrivacyLevel::OnlyMe); ++s) {
      UserProfile changed = profile;
      changed.attributes[kind].setting.level = static_cast<PrivacyLevel>(s);
      const double delta = current.raw - aprs(changed, stats, graph, options).raw;
      if (delta > 0.0) rec.suggestions.push_back({static_cast<PrivacyLevel>(s), delta});
    }
    if (!rec.suggestions.empty()) out.push_back(std::move(rec));
  }
  return out;
}

ComponentSummary component_summary(std::span<const RiskReport> reports) {
  if (reports.empty()) throw PreconditionError("summary needs at least one report");
  const auto distribution = [&](auto field) {
    ComponentDistribution d;
    d.min = d.max = reports.front().*field;
    double sum = 0.0;
    for (const auto& r : reports) {
      d.min = std::min(d.min, r.*field);
      d.max = std::max(d.max, r.*field);
      sum += r.*field;
    }
    d.mean = sum / static_cast<double>(reports.size());
    return d;
  };
  return {distribution(&RiskReport::aprs), distribution(&RiskReport::sgprs),
          distribution(&RiskReport::cbprs)};
}

std::vector<ScenarioRow> scenario_table(const ComponentSummary& summary,
                                        std::span<const WeightScenario> scenarios) {
  std::vector<ScenarioRow> rows;
  for (const auto& s : scenarios)
    rows.push_back({s, cprs(summary.aprs.mean, summary.sgprs.mean, summary.cbprs.mean, s.weights)});
  return rows;
}

}  // namespace privrisk
