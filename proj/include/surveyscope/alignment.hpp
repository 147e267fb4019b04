#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "surveyscope/component.hpp"
#include "surveyscope/embedding.hpp"
#include "surveyscope/ssr.hpp"

namespace surveyscope {

/// One component of one survey rendered as comparable text entries.
struct EntrySet {
    Component component = Component::Outline;
    std::vector<std::string> entries;
    std::string source_id;
};

/// Rendering rules per component:
///   Outline    "L<level>: <title>"
///   Content    "<heading>\n<body>" with "[figure]"/"[table]" sentinels
///              appended per count
///   Reference  title when non-empty, else raw_text
EntrySet build_entries(const SurveyDocument& doc, Component component);

struct AlignmentConfig {
    // Similarity thresholds are per component; the defaults are calibration
    // points for the artifact, surfaced in config rather than hard-coded.
    std::map<Component, double> tau{{Component::Outline, 0.60},
                                    {Component::Content, 0.55},
                                    {Component::Reference, 0.70}};
    double redundancy_penalty = 1.0;  // lambda >= 0

    double threshold(Component c) const;
    void validate() const;
};

/// Maximum-total-score one-to-one assignment of size min(m,n). Rectangular
/// inputs are square-padded with zeros and padded pairs dropped. Pairs are
/// returned sorted by row; equal-total alternatives are canonicalized toward
/// the lowest (row, col) pairs. Empty input yields an empty matching.
std::vector<std::pair<int, int>> hungarian_max(
    const std::vector<std::vector<double>>& scores);

/// Per-entry duplication discount exp(-penalty * max_other_similarity),
/// where the max over an empty set (single entry) is 0 and negative
/// similarities clamp to 0 so weights stay in (0, 1].
std::vector<double> redundancy_weights(
    const std::vector<EmbeddingVector>& generated_vectors, double penalty);

struct MatchedPair {
    int gen_index = 0;
    int gt_index = 0;
    double similarity = 0.0;
};

struct MatchReport {
    Component component = Component::Outline;
    int generated_count = 0;
    int reference_count = 0;
    std::vector<MatchedPair> pairs;
    std::vector<double> redundancy_weights;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    bool empty_side = false;
};

/// Redundancy-aware matching score: the assignment maximizes the
/// thresholded margins max(0, sim - tau); precision averages redundancy
/// weights of matched entries clearing tau over all generated entries;
/// recall counts matched entries clearing tau over all reference entries;
/// f_score is their harmonic mean (0 when both are 0).
MatchReport rams(const EntrySet& generated, const EntrySet& reference,
                 EmbeddingProvider& provider, const AlignmentConfig& cfg);

struct TamsResult {
    double value = 0.0;
    bool empty_side = false;
};

/// Thresholded average maximum similarity: the mean positive margin of each
/// generated entry's best reference similarity above tau.
TamsResult tams(const EntrySet& generated, const EntrySet& reference,
                EmbeddingProvider& provider, const AlignmentConfig& cfg);

/// Both metrics over a single embedding pass.
struct AlignmentReport {
    Component component = Component::Outline;
    int generated_count = 0;
    int reference_count = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double tams = 0.0;
    bool empty_side = false;
    std::vector<MatchedPair> pairs;
};

AlignmentReport align_pair(const EntrySet& generated, const EntrySet& reference,
                           EmbeddingProvider& provider,
                           const AlignmentConfig& cfg);

void to_json(nlohmann::json& j, const AlignmentReport& r);

}  // namespace surveyscope
