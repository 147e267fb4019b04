#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "surveyscope/alignment.hpp"
#include "surveyscope/embedding.hpp"
#include "surveyscope/judge.hpp"
#include "surveyscope/llm_client.hpp"
#include "surveyscope/parse.hpp"
#include "surveyscope/validation.hpp"
#include "surveyscope/weights.hpp"

namespace surveyscope {

struct RunPaths {
    std::string corpus_dir;
    std::string output_dir;
    std::string cache_dir;
};

/// Everything a run needs, loadable from one JSON file and overridable by
/// CLI flags. Validated before any work starts.
struct RunConfig {
    RunPaths paths;
    EmbedderConfig embedder;
    LlmClientConfig judge;
    ParseConfig parse;
    AlignmentConfig alignment;
    FitConfig fit;
    EloConfig elo;
    int trials = 3;
    int expand_n = 3;
    int merge_n = 3;
    std::size_t section_word_budget = 400;
    std::size_t component_word_budget = 2000;
    std::string prompts_dir;
    std::string aspect_catalog;  // optional seed-aspect override file
    std::uint64_t seed = 0;

    /// Creates output/cache directories, requires corpus_dir to exist when
    /// set, and checks the numeric invariants. Throws ConfigError.
    void validate_and_prepare() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace surveyscope
