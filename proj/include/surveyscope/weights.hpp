#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "surveyscope/component.hpp"
#include "surveyscope/discipline.hpp"
#include "surveyscope/judge.hpp"

namespace surveyscope {

/// Raw per-aspect judge scores for one survey component; scores live in
/// [1, x_max] and normalize to score / x_max.
struct AspectScoreVector {
    std::string survey_id;
    Component component = Component::Outline;
    std::map<std::string, double> scores;
    double x_max = 5.0;

    std::map<std::string, double> normalized() const;
};

struct WeightVector {
    std::map<std::string, double> weights;
    bool normalized = false;
};

struct FitConfig {
    double alpha = 0.01;      // L2 regularization strength
    double step_size = 0.1;   // initial trial step per iteration
    int max_iters = 5000;
    double tolerance = 1e-8;  // stop when the objective gain drops below
    std::uint64_t seed = 0;

    void validate() const;
};

using FeatureMap = std::map<std::string, std::map<std::string, double>>;

struct Objective {
    double value = 0.0;
    std::map<std::string, double> gradient;
};

/// Log-likelihood of the preference pairs under the pairwise-logistic model
/// minus alpha * ||w||^2, with its analytic gradient
/// sum sigmoid(-w.d) * d - 2 alpha w over d = x_winner - x_loser.
Objective bt_objective(const WeightVector& w,
                       const std::vector<PreferencePair>& pairs,
                       const FeatureMap& features, double alpha);

struct FitResult {
    WeightVector weights;  // unnormalized, entrywise >= 0
    bool degenerate = false;
    int iterations = 0;
    double objective = 0.0;
};

/// Projected gradient ascent over the nonnegative orthant, starting from
/// zero, with deterministic step halving until the objective improves.
/// All-zero difference vectors yield a uniform weight vector with the
/// degenerate flag set.
FitResult fit_weights(const std::vector<PreferencePair>& pairs,
                      const FeatureMap& features, const FitConfig& cfg = {});

/// Scales weights to sum to one; ZeroMassError when the mass is zero.
WeightVector normalize_weights(const WeightVector& w_hat);

/// One aspect's contribution to the compliance score:
/// 5 * weight * (raw_score / x_max).
double compliance_contribution(double weight, double raw_score, double x_max);

/// 5 * sum_k w_k * (score_k / x_max); requires normalized weights and a
/// score for every weighted aspect. Lies in [1, 5] for raw scores in [1, 5].
double compliance_score(const AspectScoreVector& scores,
                        const WeightVector& normalized_weights);

struct WeightsFile {
    Discipline discipline = Discipline::ComputerScience;
    Component component = Component::Outline;
    double alpha = 0.0;
    WeightVector weights;
    int iterations = 0;
    double objective = 0.0;
    std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const WeightsFile& w);
void from_json(const nlohmann::json& j, WeightsFile& w);
WeightsFile load_weights_json(const std::string& path);
void save_weights_json(const WeightsFile& w, const std::string& path);

}  // namespace surveyscope
