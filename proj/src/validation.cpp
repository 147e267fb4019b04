#include "surveyscope/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "surveyscope/errors.hpp"
#include "surveyscope/rng.hpp"

namespace surveyscope {

void EloConfig::validate() const {
    if (k_factor <= 0.0) throw ConfigError("k_factor must be positive");
    if (replays < 1) throw ConfigError("replays must be >= 1");
}

std::map<std::string, double> elo_ratings(
    const std::vector<PreferencePair>& pairs, const EloConfig& cfg,
    const std::function<void(int, const std::map<std::string, double>&)>&
        per_replay) {
    cfg.validate();
    if (pairs.empty()) throw DataError("elo_ratings: no pairs");

    std::map<std::string, double> sums;
    for (const auto& p : pairs) {
        sums.emplace(p.winner_id, 0.0);
        sums.emplace(p.loser_id, 0.0);
    }

    std::vector<std::size_t> order(pairs.size());
    for (int replay = 0; replay < cfg.replays; ++replay) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto rng = seeded_rng(cfg.seed, static_cast<std::uint64_t>(replay));
        shuffle_portable(order, rng);

        std::map<std::string, double> ratings;
        for (const auto& [id, unused] : sums) {
            (void)unused;
            ratings[id] = cfg.initial_rating;
        }
        for (std::size_t idx : order) {
            const auto& p = pairs[idx];
            double& winner = ratings[p.winner_id];
            double& loser = ratings[p.loser_id];
            double expected =
                1.0 / (1.0 + std::pow(10.0, (loser - winner) / 400.0));
            double delta = cfg.k_factor * (1.0 - expected);
            winner += delta;
            loser -= delta;
        }
        if (per_replay) per_replay(replay, ratings);
        for (auto& [id, sum] : sums) sum += ratings[id];
    }

    for (auto& [id, sum] : sums) sum /= static_cast<double>(cfg.replays);
    return sums;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 +
                      1.0;  // 1-based average over the tie run
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(const std::vector<double>& x,
                               const std::vector<double>& y) {
    if (x.size() != y.size())
        throw LengthMismatchError("spearman: length mismatch (" +
                                  std::to_string(x.size()) + " vs " +
                                  std::to_string(y.size()) + ")");
    if (x.size() < 2)
        throw LengthMismatchError("spearman: need at least 2 points");

    auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(),
                           [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) return std::nullopt;

    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) return std::nullopt;
    return cov / std::sqrt(var_x * var_y);
}

double concordance(const std::map<std::string, double>& scores,
                   const std::vector<PreferencePair>& human_pairs) {
    if (human_pairs.empty()) throw DataError("concordance: no pairs");
    double agree = 0.0;
    for (const auto& p : human_pairs) {
        auto winner = scores.find(p.winner_id);
        auto loser = scores.find(p.loser_id);
        if (winner == scores.end())
            throw MissingScoreError("concordance: no score for '" +
                                    p.winner_id + "'");
        if (loser == scores.end())
            throw MissingScoreError("concordance: no score for '" +
                                    p.loser_id + "'");
        if (winner->second > loser->second) {
            agree += 1.0;
        } else if (winner->second == loser->second) {
            agree += 0.5;
        }
    }
    return 100.0 * agree / static_cast<double>(human_pairs.size());
}

AlignmentResult validate_scores(const std::map<std::string, double>& scores,
                                const std::vector<PreferencePair>& human_pairs,
                                const EloConfig& cfg) {
    auto ratings = elo_ratings(human_pairs, cfg);

    std::vector<double> score_values;
    std::vector<double> rating_values;
    for (const auto& [id, rating] : ratings) {
        auto it = scores.find(id);
        if (it == scores.end())
            throw MissingScoreError("validate: no score for '" + id + "'");
        score_values.push_back(it->second);
        rating_values.push_back(rating);
    }

    AlignmentResult result;
    result.n_items = static_cast<int>(ratings.size());
    result.n_pairs = static_cast<int>(human_pairs.size());
    result.spearman_rho = spearman(score_values, rating_values);
    result.concordance_pct = concordance(scores, human_pairs);
    return result;
}

}  // namespace surveyscope
