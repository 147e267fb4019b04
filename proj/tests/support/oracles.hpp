#pragma once

// Independent test oracles: exhaustive assignment search and small helpers.
// Nothing here reuses the implementation paths it checks.

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace surveyscope::testing {

struct BruteForceResult {
    double best_total = 0.0;
    std::vector<std::pair<int, int>> assignment;  // (row, col), row-sorted
};

/// Best one-to-one assignment of size min(m,n) by exhaustive search over
/// all ordered selections. Independent of the production solver.
inline BruteForceResult brute_force_assignment(
    const std::vector<std::vector<double>>& scores) {
    std::size_t m = scores.size();
    std::size_t n = m ? scores[0].size() : 0;
    BruteForceResult result;
    if (m == 0 || n == 0) return result;

    bool transpose = m > n;
    std::size_t rows = transpose ? n : m;
    std::size_t cols = transpose ? m : n;
    auto at = [&](std::size_t r, std::size_t c) {
        return transpose ? scores[c][r] : scores[r][c];
    };

    double best = -1.0;
    std::vector<std::size_t> current(rows, 0);
    std::vector<std::size_t> best_pick;
    std::vector<bool> used(cols, false);
    std::function<void(std::size_t, double)> recurse =
        [&](std::size_t r, double total) {
            if (r == rows) {
                if (total > best) {
                    best = total;
                    best_pick = current;
                }
                return;
            }
            for (std::size_t c = 0; c < cols; ++c) {
                if (used[c]) continue;
                used[c] = true;
                current[r] = c;
                recurse(r + 1, total + at(r, c));
                used[c] = false;
            }
        };
    recurse(0, 0.0);

    result.best_total = best;
    for (std::size_t r = 0; r < rows; ++r) {
        int row = transpose ? static_cast<int>(best_pick[r])
                            : static_cast<int>(r);
        int col = transpose ? static_cast<int>(r)
                            : static_cast<int>(best_pick[r]);
        result.assignment.emplace_back(row, col);
    }
    std::sort(result.assignment.begin(), result.assignment.end());
    return result;
}

inline double brute_force_best_total(
    const std::vector<std::vector<double>>& scores) {
    return brute_force_assignment(scores).best_total;
}

}  // namespace surveyscope::testing
