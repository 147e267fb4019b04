#include "surveyscope/weights.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "surveyscope/errors.hpp"

namespace surveyscope {

std::map<std::string, double> AspectScoreVector::normalized() const {
    if (x_max <= 0.0) throw DataError("x_max must be positive");
    std::map<std::string, double> out;
    for (const auto& [aspect, score] : scores) out[aspect] = score / x_max;
    return out;
}

void FitConfig::validate() const {
    if (alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (step_size <= 0.0) throw ConfigError("step_size must be positive");
    if (max_iters <= 0) throw ConfigError("max_iters must be positive");
    if (tolerance <= 0.0) throw ConfigError("tolerance must be positive");
}

namespace {

// log(sigmoid(z)), stable for large |z|.
double log_sigmoid(double z) {
    if (z >= 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

struct DenseProblem {
    std::vector<std::string> aspects;                 // sorted key order
    std::vector<std::vector<double>> differences;     // one per pair
};

DenseProblem build_problem(const std::vector<PreferencePair>& pairs,
                           const FeatureMap& features) {
    DenseProblem problem;
    if (features.empty()) throw DataError("bt: empty feature map");
    for (const auto& [aspect, value] : features.begin()->second) {
        (void)value;
        problem.aspects.push_back(aspect);
    }
    if (problem.aspects.empty()) throw DataError("bt: no aspects in features");

    auto vector_of = [&](const std::string& id) {
        auto it = features.find(id);
        if (it == features.end())
            throw MissingFeatureError("bt: no features for survey '" + id +
                                      "'");
        std::vector<double> v;
        v.reserve(problem.aspects.size());
        for (const auto& aspect : problem.aspects) {
            auto f = it->second.find(aspect);
            if (f == it->second.end())
                throw MissingFeatureError("bt: survey '" + id +
                                          "' lacks aspect '" + aspect + "'");
            v.push_back(f->second);
        }
        return v;
    };

    problem.differences.reserve(pairs.size());
    for (const auto& pair : pairs) {
        auto winner = vector_of(pair.winner_id);
        auto loser = vector_of(pair.loser_id);
        std::vector<double> d(problem.aspects.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = winner[k] - loser[k];
        problem.differences.push_back(std::move(d));
    }
    return problem;
}

double objective_value(const std::vector<double>& w, const DenseProblem& p,
                       double alpha) {
    double value = 0.0;
    for (const auto& d : p.differences) {
        double z = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * d[k];
        value += log_sigmoid(z);
    }
    double norm_sq = 0.0;
    for (double x : w) norm_sq += x * x;
    return value - alpha * norm_sq;
}

std::vector<double> objective_gradient(const std::vector<double>& w,
                                       const DenseProblem& p, double alpha) {
    std::vector<double> g(w.size(), 0.0);
    for (const auto& d : p.differences) {
        double z = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * d[k];
        double s = sigmoid(-z);
        for (std::size_t k = 0; k < w.size(); ++k) g[k] += s * d[k];
    }
    for (std::size_t k = 0; k < w.size(); ++k) g[k] -= 2.0 * alpha * w[k];
    return g;
}

}  // namespace

Objective bt_objective(const WeightVector& w,
                       const std::vector<PreferencePair>& pairs,
                       const FeatureMap& features, double alpha) {
    auto problem = build_problem(pairs, features);
    std::vector<double> dense(problem.aspects.size(), 0.0);
    for (std::size_t k = 0; k < problem.aspects.size(); ++k) {
        auto it = w.weights.find(problem.aspects[k]);
        if (it != w.weights.end()) dense[k] = it->second;
    }
    Objective out;
    out.value = objective_value(dense, problem, alpha);
    auto g = objective_gradient(dense, problem, alpha);
    for (std::size_t k = 0; k < problem.aspects.size(); ++k)
        out.gradient[problem.aspects[k]] = g[k];
    return out;
}

FitResult fit_weights(const std::vector<PreferencePair>& pairs,
                      const FeatureMap& features, const FitConfig& cfg) {
    cfg.validate();
    if (pairs.empty()) throw DataError("fit_weights: no preference pairs");
    auto problem = build_problem(pairs, features);
    std::size_t k = problem.aspects.size();

    bool all_zero = true;
    for (const auto& d : problem.differences)
        for (double x : d)
            if (x != 0.0) all_zero = false;

    FitResult result;
    if (all_zero) {
        result.degenerate = true;
        for (const auto& aspect : problem.aspects)
            result.weights.weights[aspect] = 1.0;
        std::vector<double> uniform(k, 1.0);
        result.objective = objective_value(uniform, problem, cfg.alpha);
        return result;
    }

    std::vector<double> w(k, 0.0);
    double value = objective_value(w, problem, cfg.alpha);
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        auto g = objective_gradient(w, problem, cfg.alpha);
        double step = cfg.step_size;
        double best_value = value;
        std::vector<double> best_w;
        // Halve until the projected step improves the objective.
        while (step > 1e-16) {
            std::vector<double> candidate(k);
            for (std::size_t i = 0; i < k; ++i)
                candidate[i] = std::max(0.0, w[i] + step * g[i]);
            double candidate_value =
                objective_value(candidate, problem, cfg.alpha);
            if (candidate_value > best_value) {
                best_value = candidate_value;
                best_w = std::move(candidate);
                break;
            }
            step *= 0.5;
        }
        if (best_w.empty()) break;  // no improving step exists
        double gain = best_value - value;
        w = std::move(best_w);
        value = best_value;
        if (gain < cfg.tolerance) {
            ++iter;
            break;
        }
    }

    result.iterations = iter;
    result.objective = value;
    for (std::size_t i = 0; i < k; ++i)
        result.weights.weights[problem.aspects[i]] = w[i];
    return result;
}

WeightVector normalize_weights(const WeightVector& w_hat) {
    double mass = 0.0;
    for (const auto& [aspect, value] : w_hat.weights) {
        (void)aspect;
        if (value < 0.0)
            throw DataError("normalize_weights: negative weight");
        mass += value;
    }
    if (mass <= 0.0)
        throw ZeroMassError("normalize_weights: weight mass is zero");
    WeightVector out;
    out.normalized = true;
    for (const auto& [aspect, value] : w_hat.weights)
        out.weights[aspect] = value / mass;
    return out;
}

double compliance_contribution(double weight, double raw_score, double x_max) {
    if (x_max <= 0.0) throw DataError("x_max must be positive");
    return 5.0 * weight * (raw_score / x_max);
}

double compliance_score(const AspectScoreVector& scores,
                        const WeightVector& normalized_weights) {
    if (!normalized_weights.normalized)
        throw DataError("compliance_score: weights must be normalized");
    double total = 0.0;
    for (const auto& [aspect, weight] : normalized_weights.weights) {
        auto it = scores.scores.find(aspect);
        if (it == scores.scores.end())
            throw MissingAspectError("compliance_score: no score for aspect '" +
                                     aspect + "'");
        total += compliance_contribution(weight, it->second, scores.x_max);
    }
    return total;
}

void to_json(nlohmann::json& j, const WeightsFile& w) {
    j = nlohmann::json{
        {"discipline", std::string(discipline_name(w.discipline))},
        {"component", std::string(component_lower_name(w.component))},
        {"alpha", w.alpha},
        {"weights", w.weights.weights},
        {"fit",
         {{"iters", w.iterations}, {"objective", w.objective}, {"seed", w.seed}}}};
}

void from_json(const nlohmann::json& j, WeightsFile& w) {
    w.discipline = discipline_from_string(j.at("discipline").get<std::string>());
    w.component = component_from_string(j.at("component").get<std::string>());
    w.alpha = j.value("alpha", 0.0);
    w.weights.weights =
        j.at("weights").get<std::map<std::string, double>>();
    w.weights.normalized = true;
    if (j.contains("fit")) {
        const auto& fit = j.at("fit");
        w.iterations = fit.value("iters", 0);
        w.objective = fit.value("objective", 0.0);
        w.seed = fit.value("seed", std::uint64_t{0});
    }
}

WeightsFile load_weights_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weights file: " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j.get<WeightsFile>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid weights JSON in " + path + ": " + e.what());
    }
}

void save_weights_json(const WeightsFile& w, const std::string& path) {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write weights file: " + path);
    out << nlohmann::json(w).dump(2) << '\n';
}

}  // namespace surveyscope
