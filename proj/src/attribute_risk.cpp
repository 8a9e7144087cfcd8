#include "privrisk/attribute_risk.hpp"

#include <cmath>

namespace privrisk {

std::size_t AttributeStats::frequency_of(const AttributeKind& kind) const {
  auto it = frequency.find(kind);
  return it == frequency.end() ? 0 : it->second;
}

AttributeStats compute_attribute_stats(std::span<const UserProfile> profiles, std::size_t users) {
  AttributeStats stats;
  stats.users = users;
  for (const auto& profile : profiles)
    for (const auto& [kind, entry] : profile.attributes)
      if (entry.present()) ++stats.frequency[kind];
  for (const auto& [kind, f] : stats.frequency)
    if (f > users)
      throw PreconditionError("attribute " + kind.name() + " held by more users than exist");
  return stats;
}

double sensitivity(const AttributeStats& stats, const AttributeKind& attr,
                   SensitivityModel model) {
  const std::size_t f = stats.frequency_of(attr);
  if (f == 0) return 0.0;
  const double freq = static_cast<double>(f);
  const double iuf = std::log2(static_cast<double>(stats.users) / freq + 1.0);
  switch (model) {
    case SensitivityModel::Afiuf: return freq / iuf;
    case SensitivityModel::InverseFrequency: return iuf;
  }
  return 0.0;
}

double visibility(PrivacySetting setting, std::size_t friend_count, std::size_t network_size,
                  double only_me_visibility) {
  if (network_size == 0) throw PreconditionError("network size must be at least 1");
  if (friend_count > network_size)
    throw PreconditionError("friend count " + std::to_string(friend_count) +
                            " exceeds network size " + std::to_string(network_size));
  switch (setting.level) {
    case PrivacyLevel::Public: return 1.0;
    case PrivacyLevel::FriendsOnly:
      return static_cast<double>(friend_count) / static_cast<double>(network_size);
    case PrivacyLevel::OnlyMe: return only_me_visibility;
  }
  return 1.0;
}

double attribute_risk(double sensitivity, double visibility) {
  if (sensitivity < 0.0 || visibility < 0.0)
    throw PreconditionError("sensitivity and visibility must be non-negative");
  return sensitivity * visibility;
}

AprsResult aprs(const UserProfile& profile, const AttributeStats& stats, const SocialGraph& graph,
                const AprsOptions& options) {
  const std::size_t friends = graph.degree(graph.index_of(profile.user));
  AprsResult result;
  for (const auto& [kind, entry] : profile.attributes) {
    if (!entry.present()) continue;
    const double term = attribute_risk(
        sensitivity(stats, kind, options.model),
        visibility(entry.setting, friends, stats.users, options.only_me_visibility));
    result.breakdown[kind.name()] = term;
    result.raw += term;
  }
  return result;
}

}  // namespace privrisk
