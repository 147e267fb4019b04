#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "surveyscope/config.hpp"
#include "surveyscope/diagnostics.hpp"
#include "surveyscope/ingest.hpp"

namespace surveyscope {

/// Shared run state for the pipeline commands. Backends are injectable so
/// tests drive the exact same code paths the CLI runs.
struct PipelineContext {
    RunConfig cfg;
    std::shared_ptr<ChatBackend> chat_backend;        // null = HTTP
    std::shared_ptr<EmbeddingBackend> embed_backend;  // null = HTTP
    DiagnosticSink* diag = nullptr;

    std::unique_ptr<LlmClient> make_client() const;
    std::unique_ptr<EmbeddingProvider> make_embedder() const;
    prompts::PromptLibrary prompt_library() const;
    JudgeOptions judge_options(const prompts::PromptLibrary& lib) const;
    RubricOptions rubric_options(const prompts::PromptLibrary& lib) const;
};

/// Markdown -> SSR (+ structural stats sidecars). Inputs come either from a
/// manifest.jsonl ({id, topic, discipline[, file]}) in `input_dir` or from
/// plain *.md files with `default_discipline`.
std::vector<std::string> cmd_parse(const PipelineContext& ctx,
                                   const std::string& input_dir,
                                   const std::string& output_dir,
                                   const std::string& default_discipline = "");

/// One rubric per (discipline, component) over the SSR files in `ssr_dir`.
std::vector<std::string> cmd_rubric_gen(const PipelineContext& ctx,
                                        const std::string& ssr_dir,
                                        const std::string& rubrics_dir);

/// Judgment export per (survey, component): per-trial raw scores plus the
/// averaged vector.
std::vector<std::string> cmd_judge(const PipelineContext& ctx,
                                   const std::string& ssr_dir,
                                   const std::string& rubrics_dir,
                                   const std::string& judgments_dir);

/// Round-robin preference pairs over each discipline's surveys, features
/// from the judged aspect scores, Bradley-Terry fit per (discipline,
/// component). Writes weights files plus pairs.jsonl.
std::vector<std::string> cmd_fit_weights(const PipelineContext& ctx,
                                         const std::string& ssr_dir,
                                         const std::string& rubrics_dir,
                                         const std::string& weights_dir);

/// Compliance score tables (CSV/JSON/Markdown): per survey, per discipline,
/// and the macro average; overall = mean of the three component scores.
std::vector<std::string> cmd_score(const PipelineContext& ctx,
                                   const std::string& gen_dir,
                                   const std::string& rubrics_dir,
                                   const std::string& weights_dir,
                                   const std::string& output_dir,
                                   const std::string& table_name = "scores");

/// RAMS/TAMS per (survey, component) with per-discipline means; surveys
/// pair by id across the two directories. Richness ratios are emitted when
/// stats sidecars exist on both sides.
std::vector<std::string> cmd_align(const PipelineContext& ctx,
                                   const std::string& gen_dir,
                                   const std::string& canon_dir,
                                   const std::string& output_dir);

/// Elo the human pairs, then Spearman/concordance per (setting, component).
/// `settings` maps a setting name to a cmd_score JSON artifact.
std::vector<std::string> cmd_validate(
    const PipelineContext& ctx,
    const std::map<std::string, std::string>& settings,
    const std::string& pairs_file, const std::string& output_dir);

/// Cross-system summary: ranking table plus an aspect-by-system heatmap
/// grid (numeric CSV) from judgment exports.
std::vector<std::string> cmd_report(
    const PipelineContext& ctx,
    const std::map<std::string, std::string>& system_scores,
    const std::map<std::string, std::string>& system_judgments,
    const std::string& output_dir);

/// Candidate papers for one discipline/year range as JSON lines; hybrid
/// keyword/LLM filtering and citation-ranked selection.
std::vector<std::string> cmd_ingest(const PipelineContext& ctx,
                                    RestClient& rest, Discipline discipline,
                                    int year_from, int year_to, int select_top,
                                    const std::string& output_file,
                                    bool classify_ambiguous = false);

// Shared helpers (also used by tests).
std::vector<std::string> list_files_with_suffix(const std::string& dir,
                                                const std::string& suffix);
std::vector<SurveyDocument> load_ssr_dir(const std::string& dir);
std::string rubric_path_for(const std::string& rubrics_dir, Discipline d,
                            Component c);
std::string weights_path_for(const std::string& weights_dir, Discipline d,
                             Component c);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace surveyscope
