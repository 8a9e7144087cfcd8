#pragma once

// Attribute risk: frequency-based sensitivity times audience visibility,
// summed over the attributes a profile exposes.

#include <map>
#include <span>
#include <string>

#include "privrisk/model.hpp"

namespace privrisk {

/// How many of the m users possess each attribute.
struct AttributeStats {
  std::map<AttributeKind, std::size_t> frequency;
  std::size_t users = 0;

  std::size_t frequency_of(const AttributeKind& kind) const;
};

/// Counts present (non-absent) attribute values. `users` is the population
/// size m, normally the graph's node count.
AttributeStats compute_attribute_stats(std::span<const UserProfile> profiles, std::size_t users);

enum class SensitivityModel {
  Afiuf,              ///< f / log2(m/f + 1)
  InverseFrequency,   ///< log2(m/f + 1); rarer attributes score higher
};

inline constexpr double kOnlyMeVisibility = 0.1;

/// Attribute sensitivity; zero when no user has the attribute.
double sensitivity(const AttributeStats& stats, const AttributeKind& attr,
                   SensitivityModel model = SensitivityModel::Afiuf);

/// Public 1.0, FriendsOnly friend_count / network_size, OnlyMe the fixed floor.
double visibility(PrivacySetting setting, std::size_t friend_count, std::size_t network_size,
                  double only_me_visibility = kOnlyMeVisibility);

double attribute_risk(double sensitivity, double visibility);

struct AprsOptions {
  SensitivityModel model = SensitivityModel::Afiuf;
  double only_me_visibility = kOnlyMeVisibility;
};

struct AprsResult {
  double raw = 0.0;
  std::map<std::string, double> breakdown;
};

/// Sum of sensitivity * visibility over the profile's present attributes.
/// FriendsOnly audiences use the user's degree in `graph`.
AprsResult aprs(const UserProfile& profile, const AttributeStats& stats, const SocialGraph& graph,
                const AprsOptions& options = {});

}  // namespace privrisk
