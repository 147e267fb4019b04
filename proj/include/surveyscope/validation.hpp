#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surveyscope/judge.hpp"

namespace surveyscope {

struct EloConfig {
    double k_factor = 32.0;
    double initial_rating = 1500.0;
    int replays = 100;  // independently shuffled orderings, ratings averaged
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sequential Elo (logistic expectation, base 10 / 400) applied over
/// `replays` seeded shuffles of the pair list; the returned rating is the
/// mean across replays. The optional callback sees each replay's final
/// ratings (zero-sum by construction).
std::map<std::string, double> elo_ratings(
    const std::vector<PreferencePair>& pairs, const EloConfig& cfg,
    const std::function<void(int, const std::map<std::string, double>&)>&
        per_replay = nullptr);

/// Spearman rank correlation with average-rank ties. Returns nullopt when
/// either side is constant (degenerate); throws LengthMismatchError on
/// size mismatch or fewer than two points.
std::optional<double> spearman(const std::vector<double>& x,
                               const std::vector<double>& y);

/// Average ranks (1-based, ties averaged).
std::vector<double> average_ranks(const std::vector<double>& values);

/// Percentage of preference pairs whose ordering the score map reproduces;
/// ties count 1/2. Throws MissingScoreError for unscored ids.
double concordance(const std::map<std::string, double>& scores,
                   const std::vector<PreferencePair>& human_pairs);

struct AlignmentResult {
    std::optional<double> spearman_rho;  // nullopt = degenerate
    double concordance_pct = 0.0;
    int n_items = 0;
    int n_pairs = 0;
};

/// Elo the human pairs, then correlate a score map against the ratings.
AlignmentResult validate_scores(const std::map<std::string, double>& scores,
                                const std::vector<PreferencePair>& human_pairs,
                                const EloConfig& cfg);

}  // namespace surveyscope
