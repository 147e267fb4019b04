#include "surveyscope/config.hpp"

#include <filesystem>
#include <fstream>

#include "surveyscope/errors.hpp"

namespace fs = std::filesystem;

namespace surveyscope {

void RunConfig::validate_and_prepare() const {
    if (!paths.corpus_dir.empty() && !fs::exists(paths.corpus_dir))
        throw ConfigError("corpus_dir does not exist: " + paths.corpus_dir);
    if (!paths.output_dir.empty()) fs::create_directories(paths.output_dir);
    if (!paths.cache_dir.empty()) fs::create_directories(paths.cache_dir);
    if (!prompts_dir.empty() && !fs::exists(prompts_dir))
        throw ConfigError("prompts_dir does not exist: " + prompts_dir);
    if (!aspect_catalog.empty() && !fs::exists(aspect_catalog))
        throw ConfigError("aspect_catalog does not exist: " + aspect_catalog);
    embedder.validate();
    judge.validate();
    parse.validate();
    alignment.validate();
    fit.validate();
    elo.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (expand_n < 1 || merge_n < 1)
        throw ConfigError("expand_n and merge_n must be >= 1");
}

namespace {

void read_embedder(const nlohmann::json& j, EmbedderConfig& e) {
    e.endpoint_url = j.value("endpoint_url", e.endpoint_url);
    e.model_name = j.value("model_name", e.model_name);
    e.dim = j.value("dim", e.dim);
    e.batch_size = j.value("batch_size", e.batch_size);
    e.cache_dir = j.value("cache_dir", e.cache_dir);
}

void read_judge(const nlohmann::json& j, LlmClientConfig& c) {
    c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
    c.model_name = j.value("model_name", c.model_name);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.transcript_dir = j.value("transcript_dir", c.transcript_dir);
    if (j.contains("mode"))
        c.mode = client_mode_from_string(j.at("mode").get<std::string>());
}

void read_parse(const nlohmann::json& j, ParseConfig& p) {
    p.max_section_words = j.value("max_section_words", p.max_section_words);
    p.min_section_words = j.value("min_section_words", p.min_section_words);
    if (j.contains("reference_heading_names"))
        p.reference_heading_names =
            j.at("reference_heading_names").get<std::vector<std::string>>();
    p.refine_titles = j.value("refine_titles", p.refine_titles);
}

void read_alignment(const nlohmann::json& j, AlignmentConfig& a) {
    if (j.contains("tau")) {
        for (const auto& [name, value] : j.at("tau").items())
            a.tau[component_from_string(name)] = value.get<double>();
    }
    a.redundancy_penalty = j.value("lambda", a.redundancy_penalty);
}

void read_fit(const nlohmann::json& j, FitConfig& f) {
    f.alpha = j.value("alpha", f.alpha);
    f.step_size = j.value("step_size", f.step_size);
    f.max_iters = j.value("max_iters", f.max_iters);
    f.tolerance = j.value("tolerance", f.tolerance);
    f.seed = j.value("seed", f.seed);
}

void read_elo(const nlohmann::json& j, EloConfig& e) {
    e.k_factor = j.value("k_factor", e.k_factor);
    e.initial_rating = j.value("initial_rating", e.initial_rating);
    e.replays = j.value("replays", e.replays);
    e.seed = j.value("seed", e.seed);
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        cfg.paths.corpus_dir = p.value("corpus_dir", std::string());
        cfg.paths.output_dir = p.value("output_dir", std::string());
        cfg.paths.cache_dir = p.value("cache_dir", std::string());
    }
    if (j.contains("embedder")) read_embedder(j.at("embedder"), cfg.embedder);
    if (j.contains("judge")) read_judge(j.at("judge"), cfg.judge);
    if (j.contains("parse")) read_parse(j.at("parse"), cfg.parse);
    if (j.contains("alignment")) read_alignment(j.at("alignment"), cfg.alignment);
    if (j.contains("fit")) read_fit(j.at("fit"), cfg.fit);
    if (j.contains("elo")) read_elo(j.at("elo"), cfg.elo);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.expand_n = j.value("expand_n", cfg.expand_n);
    cfg.merge_n = j.value("merge_n", cfg.merge_n);
    cfg.section_word_budget =
        j.value("section_word_budget", cfg.section_word_budget);
    cfg.component_word_budget =
        j.value("component_word_budget", cfg.component_word_budget);
    cfg.prompts_dir = j.value("prompts_dir", cfg.prompts_dir);
    cfg.aspect_catalog = j.value("aspect_catalog", cfg.aspect_catalog);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid config JSON in " + path + ": " + e.what());
    }
    try {
        return run_config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config schema violation in " + path + ": " +
                          e.what());
    }
}

}  // namespace surveyscope
