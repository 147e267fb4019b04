#include "surveyscope/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

EntrySet build_entries(const SurveyDocument& doc, Component component) {
    EntrySet set;
    set.component = component;
    set.source_id = doc.id;
    switch (component) {
        case Component::Outline:
            for (const auto& e : doc.outline) {
                std::string rendered =
                    "L" + std::to_string(e.level) + ": " + e.title;
                if (!trim_view(rendered).empty())
                    set.entries.push_back(std::move(rendered));
            }
            break;
        case Component::Content:
            for (const auto& e : doc.content) {
                std::string rendered = e.heading + "\n" + e.body;
                for (int i = 0; i < e.figure_count; ++i) rendered += " [figure]";
                for (int i = 0; i < e.table_count; ++i) rendered += " [table]";
                if (!trim_view(rendered).empty())
                    set.entries.push_back(std::move(rendered));
            }
            break;
        case Component::Reference:
            for (const auto& e : doc.references) {
                const std::string& rendered =
                    e.title.empty() ? e.raw_text : e.title;
                if (!trim_view(rendered).empty())
                    set.entries.push_back(rendered);
            }
            break;
    }
    return set;
}

double AlignmentConfig::threshold(Component c) const {
    auto it = tau.find(c);
    if (it == tau.end())
        throw ConfigError("no tau configured for component " +
                          std::string(component_name(c)));
    return it->second;
}

void AlignmentConfig::validate() const {
    for (const auto& [component, value] : tau) {
        (void)component;
        if (value < 0.0 || value >= 1.0)
            throw ConfigError("tau must lie in [0, 1)");
    }
    if (redundancy_penalty < 0.0)
        throw ConfigError("redundancy penalty must be >= 0");
}

// Jonker-Volgenant shortest augmenting path assignment on the negated,
// zero-padded square matrix. O(n^3), exact.
namespace {

std::vector<int> solve_square_min(const std::vector<std::vector<double>>& cost) {
    int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Exchange-based canonicalization: among equal-total assignments, prefer the
// lowest (row, col) pairs. Covers pair swaps and moves into unmatched
// rows/columns; totals are never changed.
void canonicalize_pairs(const std::vector<std::vector<double>>& scores,
                        std::vector<std::pair<int, int>>& pairs) {
    int m = static_cast<int>(scores.size());
    int n = m > 0 ? static_cast<int>(scores[0].size()) : 0;
    std::vector<char> col_used(static_cast<std::size_t>(n), 0);
    std::vector<char> row_used(static_cast<std::size_t>(m), 0);
    for (auto& [r, c] : pairs) {
        row_used[static_cast<std::size_t>(r)] = 1;
        col_used[static_cast<std::size_t>(c)] = 1;
    }
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 64) {
        changed = false;
        std::sort(pairs.begin(), pairs.end());
        // Column swap between two matched pairs.
        for (std::size_t a = 0; a < pairs.size(); ++a) {
            for (std::size_t b = a + 1; b < pairs.size(); ++b) {
                auto [ra, ca] = pairs[a];
                auto [rb, cb] = pairs[b];
                if (cb < ca &&
                    scores[ra][ca] + scores[rb][cb] ==
                        scores[ra][cb] + scores[rb][ca]) {
                    pairs[a].second = cb;
                    pairs[b].second = ca;
                    changed = true;
                }
            }
        }
        // Move a matched pair to an unused lower column of equal score.
        for (auto& [r, c] : pairs) {
            for (int c2 = 0; c2 < c; ++c2) {
                if (!col_used[static_cast<std::size_t>(c2)] &&
                    scores[r][c2] == scores[r][c]) {
                    col_used[static_cast<std::size_t>(c)] = 0;
                    col_used[static_cast<std::size_t>(c2)] = 1;
                    c = c2;
                    changed = true;
                    break;
                }
            }
        }
        // Re-seat a matched pair onto an unused lower row of equal score.
        for (auto& [r, c] : pairs) {
            for (int r2 = 0; r2 < r; ++r2) {
                if (!row_used[static_cast<std::size_t>(r2)] &&
                    scores[r2][c] == scores[r][c]) {
                    row_used[static_cast<std::size_t>(r)] = 0;
                    row_used[static_cast<std::size_t>(r2)] = 1;
                    r = r2;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
}

}  // namespace

std::vector<std::pair<int, int>> hungarian_max(
    const std::vector<std::vector<double>>& scores) {
    int m = static_cast<int>(scores.size());
    int n = m > 0 ? static_cast<int>(scores[0].size()) : 0;
    if (m == 0 || n == 0) return {};
    for (const auto& row : scores) {
        if (static_cast<int>(row.size()) != n)
            throw DataError("hungarian_max: ragged score matrix");
        for (double s : row)
            if (s < 0.0 || !std::isfinite(s))
                throw DataError("hungarian_max: scores must be non-negative");
    }

    int k = std::max(m, n);
    std::vector<std::vector<double>> cost(
        static_cast<std::size_t>(k),
        std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) cost[i][j] = -scores[i][j];

    auto row_to_col = solve_square_min(cost);

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(std::min(m, n)));
    for (int i = 0; i < m; ++i) {
        int j = row_to_col[i];
        if (j >= 0 && j < n) pairs.emplace_back(i, j);
    }
    canonicalize_pairs(scores, pairs);
    return pairs;
}

std::vector<double> redundancy_weights(
    const std::vector<EmbeddingVector>& generated_vectors, double penalty) {
    if (penalty < 0.0) throw ConfigError("redundancy penalty must be >= 0");
    std::size_t count = generated_vectors.size();
    std::vector<double> weights(count, 1.0);
    if (count <= 1 || penalty == 0.0) return weights;
    for (std::size_t i = 0; i < count; ++i) {
        double max_other = 0.0;  // empty-max convention; negatives clamp here
        for (std::size_t k = 0; k < count; ++k) {
            if (k == i) continue;
            max_other =
                std::max(max_other, cosine(generated_vectors[i],
                                           generated_vectors[k]));
        }
        weights[i] = std::exp(-penalty * max_other);
    }
    return weights;
}

namespace {

struct PairwiseSimilarities {
    std::vector<EmbeddingVector> gen_vectors;
    std::vector<std::vector<double>> sim;  // m x n raw cosine
};

PairwiseSimilarities embed_and_compare(const EntrySet& generated,
                                       const EntrySet& reference,
                                       EmbeddingProvider& provider) {
    PairwiseSimilarities out;
    out.gen_vectors = provider.embed(generated.entries);
    auto gt_vectors = provider.embed(reference.entries);
    out.sim.assign(generated.entries.size(),
                   std::vector<double>(reference.entries.size(), 0.0));
    for (std::size_t i = 0; i < out.gen_vectors.size(); ++i)
        for (std::size_t j = 0; j < gt_vectors.size(); ++j)
            out.sim[i][j] = cosine(out.gen_vectors[i], gt_vectors[j]);
    return out;
}

void check_components(const EntrySet& generated, const EntrySet& reference) {
    if (generated.component != reference.component)
        throw DataError("component mismatch between entry sets");
}

}  // namespace

MatchReport rams(const EntrySet& generated, const EntrySet& reference,
                 EmbeddingProvider& provider, const AlignmentConfig& cfg) {
    check_components(generated, reference);
    cfg.validate();

    MatchReport report;
    report.component = generated.component;
    report.generated_count = static_cast<int>(generated.entries.size());
    report.reference_count = static_cast<int>(reference.entries.size());
    if (generated.entries.empty() || reference.entries.empty()) {
        report.empty_side = true;
        return report;
    }

    double tau = cfg.threshold(generated.component);
    auto cmp = embed_and_compare(generated, reference, provider);

    // Assignment runs on the thresholded margins; the pass/fail indicator
    // below uses the raw similarity.
    std::vector<std::vector<double>> margins(
        cmp.sim.size(), std::vector<double>(cmp.sim[0].size(), 0.0));
    for (std::size_t i = 0; i < cmp.sim.size(); ++i)
        for (std::size_t j = 0; j < cmp.sim[i].size(); ++j)
            margins[i][j] = std::max(0.0, cmp.sim[i][j] - tau);

    auto matching = hungarian_max(margins);
    report.redundancy_weights =
        redundancy_weights(cmp.gen_vectors, cfg.redundancy_penalty);

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    for (auto [i, j] : matching) {
        double sim = cmp.sim[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)];
        report.pairs.push_back({i, j, sim});
        if (sim >= tau) {
            precision_sum +=
                report.redundancy_weights[static_cast<std::size_t>(i)];
            recall_sum += 1.0;
        }
    }
    report.precision = precision_sum / report.generated_count;
    report.recall = recall_sum / report.reference_count;
    report.f_score =
        (report.precision + report.recall) > 0.0
            ? 2.0 * report.precision * report.recall /
                  (report.precision + report.recall)
            : 0.0;
    return report;
}

TamsResult tams(const EntrySet& generated, const EntrySet& reference,
                EmbeddingProvider& provider, const AlignmentConfig& cfg) {
    check_components(generated, reference);
    cfg.validate();
    if (generated.entries.empty() || reference.entries.empty())
        return {0.0, true};

    double tau = cfg.threshold(generated.component);
    auto cmp = embed_and_compare(generated, reference, provider);
    double total = 0.0;
    for (const auto& row : cmp.sim) {
        double best = *std::max_element(row.begin(), row.end());
        total += std::max(0.0, best - tau);
    }
    return {total / static_cast<double>(cmp.sim.size()), false};
}

AlignmentReport align_pair(const EntrySet& generated, const EntrySet& reference,
                           EmbeddingProvider& provider,
                           const AlignmentConfig& cfg) {
    AlignmentReport report;
    report.component = generated.component;

    auto match = rams(generated, reference, provider, cfg);
    report.generated_count = match.generated_count;
    report.reference_count = match.reference_count;
    report.precision = match.precision;
    report.recall = match.recall;
    report.f_score = match.f_score;
    report.empty_side = match.empty_side;
    report.pairs = std::move(match.pairs);

    auto t = tams(generated, reference, provider, cfg);
    report.tams = t.value;
    return report;
}

void to_json(nlohmann::json& j, const AlignmentReport& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"gen", p.gen_index},
                         {"gt", p.gt_index},
                         {"sim", p.similarity}});
    j = nlohmann::json{{"component", std::string(component_lower_name(r.component))},
                       {"m", r.generated_count},
                       {"n", r.reference_count},
                       {"precision", r.precision},
                       {"recall", r.recall},
                       {"f_score", r.f_score},
                       {"tams", r.tams},
                       {"empty_side", r.empty_side},
                       {"pairs", pairs}};
}

}  // namespace surveyscope
