#pragma once

// Population normalization, weight derivation and the comprehensive score.

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "privrisk/attribute_risk.hpp"
#include "privrisk/content_risk.hpp"
#include "privrisk/model.hpp"

namespace privrisk {

enum class Normalization {
  MinMax,   ///< (x - min) / (max - min); constant populations map to 0.5
  Rank,     ///< average rank / (n - 1), ties averaged
};

/// Throws PreconditionError on empty input.
std::vector<double> normalize_population(std::span<const double> raw,
                                         Normalization method = Normalization::MinMax);
std::map<UserId, double> normalize_population(const std::map<UserId, double>& raw,
                                              Normalization method = Normalization::MinMax);

// ---------------------------------------------------------------------------
// Weights

/// Equal (0.33 each), content-focused (0.20, 0.30, 0.50), graph-focused
/// (0.10, 0.60, 0.30).
std::vector<WeightScenario> default_scenarios();

/// Saaty random consistency index for an n x n matrix (n <= 10).
double random_index(Eigen::Index n);

template <typename Scalar>
struct AhpResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Scalar lambda_max{};
  Scalar consistency_ratio{};
  int iterations = 0;

  bool consistent() const { return consistency_ratio <= Scalar(0.1); }
};

/// Principal right eigenvector of a positive reciprocal matrix by power
/// iteration, normalized to sum 1, with Saaty's consistency ratio
/// CR = ((lambda_max - n) / (n - 1)) / RI(n).
template <typename Derived>
AhpResult<typename Derived::Scalar> ahp_priority(const Eigen::MatrixBase<Derived>& matrix,
                                                 typename Derived::Scalar tolerance = 1e-10,
                                                 int max_iterations = 10000) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = matrix.rows();
  if (n == 0 || matrix.cols() != n) throw PreconditionError("AHP matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar a = matrix(i, j);
      if (!(a > Scalar(0))) throw PreconditionError("AHP judgments must be positive");
      if (std::abs(a * matrix(j, i) - Scalar(1)) > Scalar(1e-9))
        throw PreconditionError("AHP matrix is not reciprocal at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
    }
  }

  AhpResult<Scalar> result;
  Vector w = Vector::Constant(n, Scalar(1) / static_cast<Scalar>(n));
  while (result.iterations < max_iterations) {
    ++result.iterations;
    Vector next = matrix * w;
    next /= next.sum();
    const Scalar delta = (next - w).cwiseAbs().maxCoeff();
    w = next;
    if (delta < tolerance) break;
  }
  result.weights = w;
  result.lambda_max = (matrix * w).cwiseQuotient(w).mean();
  if (n > 2) {
    const Scalar ci = (result.lambda_max - static_cast<Scalar>(n)) / static_cast<Scalar>(n - 1);
    result.consistency_ratio = std::max(Scalar(0), ci / static_cast<Scalar>(random_index(n)));
  }
  return result;
}

/// Pairwise judgments of APRS vs SGPRS vs CBPRS.
using AhpMatrix = Eigen::Matrix3d;

struct AhpWeights {
  WeightVector weights;
  double consistency_ratio = 0.0;
  bool consistent = true;
};

AhpWeights ahp_weights(const AhpMatrix& matrix);

/// Weighted sum of normalized components. Throws on invalid weights.
double cprs(double aprs, double sgprs, double cbprs, const WeightVector& weights);

// ---------------------------------------------------------------------------
// Reports

struct ComponentScores {
  double aprs_raw = 0.0;
  double sgprs_raw = 0.0;
  double cbprs_raw = 0.0;
  double aprs = 0.0;
  double sgprs = 0.0;
  double cbprs = 0.0;
  double r_struct = 0.0;
  double r_imp = 0.0;
};

RiskReport build_report(UserId user, const ComponentScores& components,
                        std::span<const WeightScenario> scenarios,
                        std::map<std::string, double> attribute_breakdown,
                        std::vector<std::pair<std::string, double>> post_breakdown,
                        std::vector<Recommendation> recommendations);

/// For each present attribute whose term is at least `threshold` times the
/// raw APRS, suggests every stricter setting that lowers the score. Each delta
/// is the raw APRS recomputed with the changed setting, subtracted from the
/// current raw APRS.
std::vector<Recommendation> attribute_recommendations(const UserProfile& profile,
                                                      const AttributeStats& stats,
                                                      const SocialGraph& graph,
                                                      const AprsOptions& options, double threshold);

/// Post-level counterpart. `cbprs_with(i, level)` must return the user's raw
/// CBPRS recomputed with post i moved to `level`; the suggestion delta is
/// `cbprs_raw` minus that value.
template <typename RecomputeFn>
std::vector<Recommendation> post_recommendations(std::span<const PostRisk> posts,
                                                 std::span<const PrivacyLevel> levels,
                                                 double cbprs_raw, double threshold,
                                                 RecomputeFn&& cbprs_with) {
  std::vector<Recommendation> out;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto& risk = posts[i];
    if (risk.total <= 0.0 || risk.total < threshold * cbprs_raw) continue;
    Recommendation rec;
    rec.kind = Recommendation::Kind::Post;
    rec.item = risk.post_id;
    rec.current = levels[i];
    rec.term = risk.total;
    for (int s = strictness(levels[i]) + 1; s <= strictness(PrivacyLevel::OnlyMe); ++s) {
      const auto level = static_cast<PrivacyLevel>(s);
      const double delta = cbprs_raw - cbprs_with(i, level);
      if (delta > 0.0) rec.suggestions.push_back({level, delta});
    }
    if (!rec.suggestions.empty()) out.push_back(std::move(rec));
  }
  return out;
}

struct ComponentDistribution {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct ComponentSummary {
  ComponentDistribution aprs;
  ComponentDistribution sgprs;
  ComponentDistribution cbprs;
};

/// Exact min / arithmetic mean / max of the normalized components.
ComponentSummary component_summary(std::span<const RiskReport> reports);

struct ScenarioRow {
  WeightScenario scenario;
  double cprs = 0.0;   // weighted sum of the component means
};

std::vector<ScenarioRow> scenario_table(const ComponentSummary& summary,
                                        std::span<const WeightScenario> scenarios);

}  // namespace privrisk
