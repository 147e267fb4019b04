#pragma once

#include <map>
#include <string>
#include <vector>

#include "surveyscope/component.hpp"
#include "surveyscope/llm_client.hpp"

namespace surveyscope::prompts {

struct Template {
    std::string system;
    std::string user;
};

/// Prompt templates keyed by name. The compiled-in set mirrors the shipped
/// prompts/ directory; from_directory() overrides individual templates from
/// files of the same name (first "SYSTEM: " line = system message, rest =
/// user message).
class PromptLibrary {
public:
    static const PromptLibrary& embedded();
    static PromptLibrary from_directory(const std::string& dir);

    const Template& get(const std::string& name) const;

private:
    std::map<std::string, Template> templates_;
};

/// Replaces "{key}" occurrences for exactly the provided keys; all other
/// braces (JSON examples in the templates) pass through untouched.
std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& values);

std::vector<ChatMessage> render_aggregate(const std::string& category_name,
                                          int target_count,
                                          const std::string& formatted_aspects,
                                          std::size_t aspect_count,
                                          const PromptLibrary& lib =
                                              PromptLibrary::embedded());

std::vector<ChatMessage> render_expand(Component component,
                                       const std::string& aspect_name,
                                       const std::string& aspect_description,
                                       const std::string& component_content,
                                       int n,
                                       const PromptLibrary& lib =
                                           PromptLibrary::embedded());

std::vector<ChatMessage> render_merge(Component component,
                                      const std::string& aspect_name,
                                      const std::string& all_criteria_json,
                                      int n,
                                      const PromptLibrary& lib =
                                          PromptLibrary::embedded());

/// Per-aspect scoring prompt; `payload_json` is the component payload and
/// `stats_json` is only used for the content variant.
std::vector<ChatMessage> render_judge(Component component,
                                      const std::string& category,
                                      const std::string& criteria_json,
                                      const std::string& payload_json,
                                      const std::string& stats_json = "{}",
                                      const PromptLibrary& lib =
                                          PromptLibrary::embedded());

std::vector<ChatMessage> render_pairwise(Component component,
                                         const std::string& category,
                                         const std::string& criteria_json,
                                         const std::string& payload_a,
                                         const std::string& payload_b,
                                         const PromptLibrary& lib =
                                             PromptLibrary::embedded());

std::vector<ChatMessage> render_refine_title(const std::string& entry_text,
                                             const PromptLibrary& lib =
                                                 PromptLibrary::embedded());

std::vector<ChatMessage> render_classify_review(const std::string& title,
                                                const std::string& abstract,
                                                const PromptLibrary& lib =
                                                    PromptLibrary::embedded());

}  // namespace surveyscope::prompts
