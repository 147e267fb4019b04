#include "surveyscope/prompts.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace fs = std::filesystem;

namespace surveyscope::prompts {

namespace {

// Generated at configure time from the prompts/ directory.
#include "prompts_embedded.inc"

Template parse_template(const std::string& text) {
    constexpr std::string_view kPrefix = "SYSTEM: ";
    auto lines = split_lines(text);
    if (lines.empty() || lines[0].substr(0, kPrefix.size()) != kPrefix)
        throw ConfigError("prompt template must start with 'SYSTEM: '");
    Template t;
    t.system = std::string(lines[0].substr(kPrefix.size()));
    std::string user;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        user += std::string(lines[i]);
        user.push_back('\n');
    }
    t.user = trim(user);
    return t;
}

std::map<std::string, Template> embedded_templates() {
    std::map<std::string, Template> out;
    for (const auto& [name, text] : kEmbeddedPrompts)
        out[name] = parse_template(text);
    return out;
}

std::vector<ChatMessage> to_messages(const Template& t) {
    return {{"system", t.system}, {"user", t.user}};
}

}  // namespace

const PromptLibrary& PromptLibrary::embedded() {
    static const PromptLibrary lib = [] {
        PromptLibrary l;
        l.templates_ = embedded_templates();
        return l;
    }();
    return lib;
}

PromptLibrary PromptLibrary::from_directory(const std::string& dir) {
    PromptLibrary lib;
    lib.templates_ = embedded_templates();
    for (auto& [name, tmpl] : lib.templates_) {
        fs::path path = fs::path(dir) / (name + ".txt");
        std::ifstream in(path);
        if (!in) continue;
        std::stringstream buffer;
        buffer << in.rdbuf();
        tmpl = parse_template(buffer.str());
    }
    return lib;
}

const Template& PromptLibrary::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end())
        throw ConfigError("unknown prompt template: " + name);
    return it->second;
}

std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            std::size_t close = text.find('}', i + 1);
            if (close != std::string::npos) {
                std::string key = text.substr(i + 1, close - i - 1);
                auto it = values.find(key);
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

namespace {

std::vector<ChatMessage> render(const Template& t,
                                const std::map<std::string, std::string>& vars) {
    Template rendered{substitute(t.system, vars), substitute(t.user, vars)};
    return to_messages(rendered);
}

}  // namespace

std::vector<ChatMessage> render_aggregate(const std::string& category_name,
                                          int target_count,
                                          const std::string& formatted_aspects,
                                          std::size_t aspect_count,
                                          const PromptLibrary& lib) {
    return render(lib.get("aggregate_aspects"),
                  {{"category_name", category_name},
                   {"target_count", std::to_string(target_count)},
                   {"formatted_aspects", formatted_aspects},
                   {"aspect_count", std::to_string(aspect_count)}});
}

std::vector<ChatMessage> render_expand(Component component,
                                       const std::string& aspect_name,
                                       const std::string& aspect_description,
                                       const std::string& component_content,
                                       int n, const PromptLibrary& lib) {
    return render(lib.get("expand_aspect"),
                  {{"component_name", std::string(component_lower_name(component))},
                   {"aspect_name", aspect_name},
                   {"aspect_description", aspect_description},
                   {"component_content", component_content},
                   {"n", std::to_string(n)}});
}

std::vector<ChatMessage> render_merge(Component component,
                                      const std::string& aspect_name,
                                      const std::string& all_criteria_json,
                                      int n, const PromptLibrary& lib) {
    return render(lib.get("merge_criteria"),
                  {{"component_name", std::string(component_lower_name(component))},
                   {"aspect_name", aspect_name},
                   {"all_criteria_json", all_criteria_json},
                   {"n", std::to_string(n)}});
}

std::vector<ChatMessage> render_judge(Component component,
                                      const std::string& category,
                                      const std::string& criteria_json,
                                      const std::string& payload_json,
                                      const std::string& stats_json,
                                      const PromptLibrary& lib) {
    switch (component) {
        case Component::Outline:
            return render(lib.get("judge_outline"),
                          {{"category", category},
                           {"criteria_json", criteria_json},
                           {"outline_json", payload_json}});
        case Component::Content:
            return render(lib.get("judge_content"),
                          {{"category", category},
                           {"criteria_json", criteria_json},
                           {"content_json", payload_json},
                           {"stats_json", stats_json}});
        case Component::Reference:
            return render(lib.get("judge_reference"),
                          {{"category", category},
                           {"criteria_json", criteria_json},
                           {"references_json", payload_json}});
    }
    throw ConfigError("unreachable component");
}

std::vector<ChatMessage> render_pairwise(Component component,
                                         const std::string& category,
                                         const std::string& criteria_json,
                                         const std::string& payload_a,
                                         const std::string& payload_b,
                                         const PromptLibrary& lib) {
    return render(lib.get("pairwise_compare"),
                  {{"category", category},
                   {"component_name", std::string(component_lower_name(component))},
                   {"criteria_json", criteria_json},
                   {"payload_a", payload_a},
                   {"payload_b", payload_b}});
}

std::vector<ChatMessage> render_refine_title(const std::string& entry_text,
                                             const PromptLibrary& lib) {
    return render(lib.get("refine_title"), {{"entry_text", entry_text}});
}

std::vector<ChatMessage> render_classify_review(const std::string& title,
                                                const std::string& abstract,
                                                const PromptLibrary& lib) {
    return render(lib.get("classify_review"),
                  {{"title", title}, {"abstract", abstract}});
}

}  // namespace surveyscope::prompts
