#include "surveyscope/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace fs = std::filesystem;

namespace surveyscope {

namespace {

std::string sanitize_id(const std::string& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_' || c == '.')
            out.push_back(c);
        else
            out.push_back('_');
    }
    return out.empty() ? "unnamed" : out;
}

std::uint64_t cell_seed(std::uint64_t base, Discipline d, Component c) {
    std::string tag = std::string(discipline_name(d)) + ":" +
                      std::string(component_lower_name(c));
    return base ^ fnv1a64(tag);
}

std::map<Discipline, std::vector<SurveyDocument>> group_by_discipline(
    const std::vector<SurveyDocument>& surveys) {
    std::map<Discipline, std::vector<SurveyDocument>> groups;
    for (const auto& s : surveys) groups[s.discipline].push_back(s);
    return groups;
}

std::string csv_cell(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

}  // namespace

// --- context ---

std::unique_ptr<LlmClient> PipelineContext::make_client() const {
    return std::make_unique<LlmClient>(cfg.judge, chat_backend);
}

std::unique_ptr<EmbeddingProvider> PipelineContext::make_embedder() const {
    EmbedderConfig embedder = cfg.embedder;
    if (embedder.cache_dir.empty()) embedder.cache_dir = cfg.paths.cache_dir;
    bool offline = cfg.judge.mode == ClientMode::Replay && !embed_backend;
    return std::make_unique<CachedEmbeddingProvider>(embedder, embed_backend,
                                                     offline);
}

prompts::PromptLibrary PipelineContext::prompt_library() const {
    if (cfg.prompts_dir.empty()) return prompts::PromptLibrary::embedded();
    return prompts::PromptLibrary::from_directory(cfg.prompts_dir);
}

JudgeOptions PipelineContext::judge_options(
    const prompts::PromptLibrary& lib) const {
    JudgeOptions opts;
    opts.section_word_budget = cfg.section_word_budget;
    opts.prompt_library = &lib;
    return opts;
}

RubricOptions PipelineContext::rubric_options(
    const prompts::PromptLibrary& lib) const {
    RubricOptions opts;
    opts.expand_n = cfg.expand_n;
    opts.merge_n = cfg.merge_n;
    opts.component_word_budget = cfg.component_word_budget;
    opts.prompt_library = &lib;
    return opts;
}

// --- shared helpers ---

std::vector<std::string> list_files_with_suffix(const std::string& dir,
                                                const std::string& suffix) {
    if (!fs::exists(dir)) throw DataError("directory does not exist: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto name = entry.path().filename().string();
        if (name.size() >= suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) ==
                0)
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<SurveyDocument> load_ssr_dir(const std::string& dir) {
    std::vector<SurveyDocument> surveys;
    for (const auto& path : list_files_with_suffix(dir, ".ssr.json"))
        surveys.push_back(load_survey_json(path));
    std::sort(surveys.begin(), surveys.end(),
              [](const SurveyDocument& a, const SurveyDocument& b) {
                  return a.id < b.id;
              });
    return surveys;
}

std::string rubric_path_for(const std::string& rubrics_dir, Discipline d,
                            Component c) {
    return (fs::path(rubrics_dir) /
            (std::string(discipline_name(d)) + "_" +
             std::string(component_lower_name(c)) + ".rubric.json"))
        .string();
}

std::string weights_path_for(const std::string& weights_dir, Discipline d,
                             Component c) {
    return (fs::path(weights_dir) /
            (std::string(discipline_name(d)) + "_" +
             std::string(component_lower_name(c)) + ".weights.json"))
        .string();
}

void write_text_file(const std::string& path, const std::string& content) {
    auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// --- parse ---

std::vector<std::string> cmd_parse(const PipelineContext& ctx,
                                   const std::string& input_dir,
                                   const std::string& output_dir,
                                   const std::string& default_discipline) {
    struct Item {
        std::string id, topic, file;
        Discipline discipline;
    };
    std::vector<Item> items;

    fs::path manifest = fs::path(input_dir) / "manifest.jsonl";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (trim_view(line).empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw DataError("invalid manifest line: " +
                                std::string(e.what()));
            }
            Item item;
            item.id = j.at("id").get<std::string>();
            item.topic = j.value("topic", item.id);
            item.discipline =
                discipline_from_string(j.at("discipline").get<std::string>());
            item.file = j.value("file", item.id + ".md");
            items.push_back(std::move(item));
        }
    } else {
        if (default_discipline.empty())
            throw ConfigError(
                "no manifest.jsonl in " + input_dir +
                "; pass a default discipline for plain .md inputs");
        Discipline d = discipline_from_string(default_discipline);
        for (const auto& path : list_files_with_suffix(input_dir, ".md")) {
            Item item;
            item.id = fs::path(path).stem().string();
            item.topic = item.id;
            item.discipline = d;
            item.file = fs::path(path).filename().string();
            items.push_back(std::move(item));
        }
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.id < b.id; });

    std::unique_ptr<LlmClient> client;
    if (ctx.cfg.parse.refine_titles) client = ctx.make_client();

    std::vector<std::string> written;
    for (const auto& item : items) {
        auto md_path = fs::path(input_dir) / item.file;
        auto markdown = read_text_file(md_path.string());
        auto doc = parse_survey(markdown, item.id, item.topic, item.discipline,
                                ctx.cfg.parse, client.get(), ctx.diag);
        auto stats = compute_stats(doc, markdown);

        auto base = fs::path(output_dir) / sanitize_id(item.id);
        std::string ssr_path = base.string() + ".ssr.json";
        save_survey_json(doc, ssr_path);
        std::string stats_path = base.string() + ".stats.json";
        write_text_file(stats_path, nlohmann::json(stats).dump(2) + "\n");
        written.push_back(ssr_path);
        written.push_back(stats_path);
    }
    return written;
}

// --- rubric generation ---

std::vector<std::string> cmd_rubric_gen(const PipelineContext& ctx,
                                        const std::string& ssr_dir,
                                        const std::string& rubrics_dir) {
    auto surveys = load_ssr_dir(ssr_dir);
    if (surveys.empty()) throw DataError("no .ssr.json files in " + ssr_dir);

    auto lib = ctx.prompt_library();
    auto opts = ctx.rubric_options(lib);
    auto client = ctx.make_client();

    std::map<Component, std::vector<Aspect>> catalog;
    if (!ctx.cfg.aspect_catalog.empty())
        catalog = load_aspect_catalog(ctx.cfg.aspect_catalog);
    auto seeds_for = [&](Component c) -> const std::vector<Aspect>& {
        auto it = catalog.find(c);
        return it != catalog.end() ? it->second : seed_aspects(c);
    };

    std::vector<std::string> written;
    for (const auto& [discipline, docs] : group_by_discipline(surveys)) {
        for (Component component : kAllComponents) {
            auto rubric =
                build_discipline_rubric(docs, component, seeds_for(component),
                                        *client, opts, ctx.diag);
            auto path = rubric_path_for(rubrics_dir, discipline, component);
            save_rubric_json(rubric, path);
            written.push_back(path);
        }
    }
    return written;
}

// --- judging ---

namespace {

Rubric load_rubric_cell(const std::string& rubrics_dir, Discipline d,
                        Component c) {
    auto path = rubric_path_for(rubrics_dir, d, c);
    if (!fs::exists(path))
        throw MissingRubricError("no rubric for (" +
                                 std::string(discipline_name(d)) + ", " +
                                 std::string(component_lower_name(c)) + ")");
    return load_rubric_json(path);
}

WeightsFile load_weights_cell(const std::string& weights_dir, Discipline d,
                              Component c) {
    auto path = weights_path_for(weights_dir, d, c);
    if (!fs::exists(path))
        throw MissingWeightsError("no weights for (" +
                                  std::string(discipline_name(d)) + ", " +
                                  std::string(component_lower_name(c)) + ")");
    return load_weights_json(path);
}

}  // namespace

std::vector<std::string> cmd_judge(const PipelineContext& ctx,
                                   const std::string& ssr_dir,
                                   const std::string& rubrics_dir,
                                   const std::string& judgments_dir) {
    auto surveys = load_ssr_dir(ssr_dir);
    if (surveys.empty()) throw DataError("no .ssr.json files in " + ssr_dir);

    auto lib = ctx.prompt_library();
    auto opts = ctx.judge_options(lib);
    auto client = ctx.make_client();

    std::vector<std::string> written;
    for (const auto& doc : surveys) {
        for (Component component : kAllComponents) {
            auto rubric = load_rubric_cell(rubrics_dir, doc.discipline,
                                           component);
            auto score = score_component(doc, component, rubric,
                                         ctx.cfg.trials, *client, opts);
            auto path =
                (fs::path(judgments_dir) /
                 (sanitize_id(doc.id) + "." +
                  std::string(component_lower_name(component)) +
                  ".judgment.json"))
                    .string();
            write_text_file(path, component_score_json(score).dump(2) + "\n");
            written.push_back(path);
        }
    }
    return written;
}

// --- weight fitting ---

std::vector<std::string> cmd_fit_weights(const PipelineContext& ctx,
                                         const std::string& ssr_dir,
                                         const std::string& rubrics_dir,
                                         const std::string& weights_dir) {
    auto surveys = load_ssr_dir(ssr_dir);
    if (surveys.empty()) throw DataError("no .ssr.json files in " + ssr_dir);

    auto lib = ctx.prompt_library();
    auto judge_opts = ctx.judge_options(lib);
    auto client = ctx.make_client();

    std::vector<std::string> written;
    std::string pairs_lines;
    for (const auto& [discipline, docs] : group_by_discipline(surveys)) {
        if (docs.size() < 2) {
            if (ctx.diag)
                ctx.diag->warn("fit_skipped_discipline",
                               std::string(discipline_name(discipline)) +
                                   ": needs at least 2 surveys");
            continue;
        }
        for (Component component : kAllComponents) {
            auto rubric = load_rubric_cell(rubrics_dir, discipline, component);

            auto pairs = double_round_robin(
                docs, component, rubric, *client,
                cell_seed(ctx.cfg.seed, discipline, component), judge_opts);
            for (const auto& pair : pairs)
                pairs_lines += nlohmann::json(pair).dump() + "\n";

            FeatureMap features;
            for (const auto& doc : docs) {
                auto score = score_component(doc, component, rubric,
                                             ctx.cfg.trials, *client,
                                             judge_opts);
                AspectScoreVector vec{doc.id, component, score.averaged, 5.0};
                features[doc.id] = vec.normalized();
            }

            WeightsFile file;
            file.discipline = discipline;
            file.component = component;
            file.alpha = ctx.cfg.fit.alpha;
            file.seed = ctx.cfg.fit.seed;
            if (pairs.empty()) {
                if (ctx.diag)
                    ctx.diag->warn(
                        "fit_no_pairs",
                        std::string(discipline_name(discipline)) + "/" +
                            std::string(component_lower_name(component)) +
                            ": all comparisons inconsistent; equal weights");
                WeightVector uniform;
                for (const auto& ra : rubric.aspects)
                    uniform.weights[ra.aspect.name] = 1.0;
                file.weights = normalize_weights(uniform);
            } else {
                auto fit = fit_weights(pairs, features, ctx.cfg.fit);
                if (fit.degenerate && ctx.diag)
                    ctx.diag->warn("fit_degenerate",
                                   std::string(discipline_name(discipline)) +
                                       "/" +
                                       std::string(
                                           component_lower_name(component)));
                try {
                    file.weights = normalize_weights(fit.weights);
                } catch (const ZeroMassError&) {
                    // Nonnegativity can bind everywhere when no aspect
                    // correlates positively with the preferences; fall back
                    // to equal weights rather than failing the run.
                    if (ctx.diag)
                        ctx.diag->warn(
                            "fit_zero_mass",
                            std::string(discipline_name(discipline)) + "/" +
                                std::string(component_lower_name(component)) +
                                ": fit collapsed to zero; equal weights");
                    WeightVector uniform;
                    for (const auto& ra : rubric.aspects)
                        uniform.weights[ra.aspect.name] = 1.0;
                    file.weights = normalize_weights(uniform);
                }
                file.iterations = fit.iterations;
                file.objective = fit.objective;
            }
            auto path = weights_path_for(weights_dir, discipline, component);
            save_weights_json(file, path);
            written.push_back(path);
        }
    }
    auto pairs_path = (fs::path(weights_dir) / "pairs.jsonl").string();
    write_text_file(pairs_path, pairs_lines);
    written.push_back(pairs_path);
    return written;
}

// --- scoring ---

std::vector<std::string> cmd_score(const PipelineContext& ctx,
                                   const std::string& gen_dir,
                                   const std::string& rubrics_dir,
                                   const std::string& weights_dir,
                                   const std::string& output_dir,
                                   const std::string& table_name) {
    auto surveys = load_ssr_dir(gen_dir);
    if (surveys.empty()) throw DataError("no .ssr.json files in " + gen_dir);

    auto lib = ctx.prompt_library();
    auto opts = ctx.judge_options(lib);
    auto client = ctx.make_client();

    struct Row {
        std::string id;
        Discipline discipline;
        std::map<Component, double> components;
        double overall = 0.0;
    };
    std::vector<Row> rows;

    for (const auto& doc : surveys) {
        Row row;
        row.id = doc.id;
        row.discipline = doc.discipline;
        double sum = 0.0;
        for (Component component : kAllComponents) {
            auto rubric = load_rubric_cell(rubrics_dir, doc.discipline,
                                           component);
            auto weights = load_weights_cell(weights_dir, doc.discipline,
                                             component);
            auto score = score_component(doc, component, rubric,
                                         ctx.cfg.trials, *client, opts);
            AspectScoreVector vec{doc.id, component, score.averaged, 5.0};
            double compliance = compliance_score(vec, weights.weights);
            row.components[component] = compliance;
            sum += compliance;
        }
        row.overall = sum / 3.0;
        rows.push_back(std::move(row));
    }

    // Per-discipline means and the macro average over disciplines.
    struct Agg {
        int n = 0;
        std::map<Component, double> sums;
        double overall_sum = 0.0;
    };
    std::map<Discipline, Agg> by_discipline;
    for (const auto& row : rows) {
        auto& agg = by_discipline[row.discipline];
        ++agg.n;
        for (auto [component, value] : row.components)
            agg.sums[component] += value;
        agg.overall_sum += row.overall;
    }

    std::string csv = "survey_id,discipline,outline,content,reference,overall\n";
    nlohmann::json per_survey = nlohmann::json::object();
    nlohmann::json flat_scores = nlohmann::json::object();
    for (const auto& row : rows) {
        csv += csv_cell(row.id) + "," +
               std::string(discipline_name(row.discipline));
        nlohmann::json comp = nlohmann::json::object();
        for (Component component : kAllComponents) {
            csv += "," + format_double(row.components.at(component));
            comp[std::string(component_lower_name(component))] =
                row.components.at(component);
        }
        csv += "," + format_double(row.overall) + "\n";
        comp["overall"] = row.overall;
        flat_scores[row.id] = comp;
        per_survey[row.id] = {
            {"discipline", std::string(discipline_name(row.discipline))},
            {"components", comp}};
    }

    std::string disc_csv =
        "discipline,n_surveys,outline,content,reference,overall\n";
    nlohmann::json per_discipline = nlohmann::json::object();
    std::map<Component, double> macro_sums;
    double macro_overall = 0.0;
    for (const auto& [discipline, agg] : by_discipline) {
        disc_csv += std::string(discipline_name(discipline)) + "," +
                    std::to_string(agg.n);
        nlohmann::json entry{{"n_surveys", agg.n}};
        for (Component component : kAllComponents) {
            double mean = agg.sums.at(component) / agg.n;
            disc_csv += "," + format_double(mean);
            entry[std::string(component_lower_name(component))] = mean;
            macro_sums[component] += mean;
        }
        double overall_mean = agg.overall_sum / agg.n;
        disc_csv += "," + format_double(overall_mean) + "\n";
        entry["overall"] = overall_mean;
        macro_overall += overall_mean;
        per_discipline[std::string(discipline_name(discipline))] = entry;
    }
    double n_disciplines = static_cast<double>(by_discipline.size());
    nlohmann::json macro = nlohmann::json::object();
    for (Component component : kAllComponents)
        macro[std::string(component_lower_name(component))] =
            macro_sums[component] / n_disciplines;
    macro["overall"] = macro_overall / n_disciplines;

    nlohmann::json out{{"overall_rule", "component_mean"},
                       {"per_survey", per_survey},
                       {"per_discipline", per_discipline},
                       {"macro_average", macro},
                       {"scores", flat_scores}};

    std::string md = "| discipline | n | outline | content | reference | "
                     "overall |\n|---|---|---|---|---|---|\n";
    for (const auto& [discipline, agg] : by_discipline) {
        md += "| " + std::string(discipline_name(discipline)) + " | " +
              std::to_string(agg.n);
        for (Component component : kAllComponents)
            md += " | " + format_double(agg.sums.at(component) / agg.n);
        md += " | " + format_double(agg.overall_sum / agg.n) + " |\n";
    }
    md += "| macro_average | " + std::to_string(rows.size());
    for (Component component : kAllComponents)
        md += " | " +
              format_double(macro[std::string(component_lower_name(component))]
                                .get<double>());
    md += " | " + format_double(macro["overall"].get<double>()) + " |\n";

    fs::path base = fs::path(output_dir);
    std::vector<std::string> written;
    write_text_file((base / (table_name + ".csv")).string(), csv);
    written.push_back((base / (table_name + ".csv")).string());
    write_text_file((base / (table_name + "_disciplines.csv")).string(),
                    disc_csv);
    written.push_back((base / (table_name + "_disciplines.csv")).string());
    write_text_file((base / (table_name + ".json")).string(),
                    out.dump(2) + "\n");
    written.push_back((base / (table_name + ".json")).string());
    write_text_file((base / (table_name + ".md")).string(), md);
    written.push_back((base / (table_name + ".md")).string());
    return written;
}

// --- alignment ---

std::vector<std::string> cmd_align(const PipelineContext& ctx,
                                   const std::string& gen_dir,
                                   const std::string& canon_dir,
                                   const std::string& output_dir) {
    auto gen = load_ssr_dir(gen_dir);
    auto canon = load_ssr_dir(canon_dir);
    if (gen.empty()) throw DataError("no .ssr.json files in " + gen_dir);

    std::map<std::string, const SurveyDocument*> canon_by_id;
    for (const auto& doc : canon) canon_by_id[doc.id] = &doc;

    auto provider = ctx.make_embedder();

    std::string csv =
        "survey_id,discipline,component,m,n,precision,recall,f_score,tams,"
        "empty_side\n";
    nlohmann::json reports = nlohmann::json::array();
    struct Agg {
        int n = 0;
        double f_sum = 0.0, tams_sum = 0.0;
    };
    std::map<std::pair<Discipline, Component>, Agg> by_cell;

    std::string richness_csv =
        "survey_id,discipline,images,tables,equations,paragraphs,words,"
        "sentences,citations,references\n";
    bool any_richness = false;

    for (const auto& doc : gen) {
        auto partner = canon_by_id.find(doc.id);
        if (partner == canon_by_id.end())
            throw UnpairedSurveyError("no canonical partner for survey '" +
                                      doc.id + "'");
        for (Component component : kAllComponents) {
            auto gen_entries = build_entries(doc, component);
            auto gt_entries = build_entries(*partner->second, component);
            auto report =
                align_pair(gen_entries, gt_entries, *provider,
                           ctx.cfg.alignment);
            csv += csv_cell(doc.id) + "," +
                   std::string(discipline_name(doc.discipline)) + "," +
                   std::string(component_lower_name(component)) + "," +
                   std::to_string(report.generated_count) + "," +
                   std::to_string(report.reference_count) + "," +
                   format_double(report.precision) + "," +
                   format_double(report.recall) + "," +
                   format_double(report.f_score) + "," +
                   format_double(report.tams) + "," +
                   (report.empty_side ? "true" : "false") + "\n";
            nlohmann::json j = report;
            j["survey_id"] = doc.id;
            j["discipline"] = std::string(discipline_name(doc.discipline));
            reports.push_back(std::move(j));
            auto& agg = by_cell[{doc.discipline, component}];
            ++agg.n;
            agg.f_sum += report.f_score;
            agg.tams_sum += report.tams;
        }

        // Richness ratios when stats sidecars exist on both sides.
        auto gen_stats_path =
            (fs::path(gen_dir) / (sanitize_id(doc.id) + ".stats.json"))
                .string();
        auto canon_stats_path =
            (fs::path(canon_dir) / (sanitize_id(doc.id) + ".stats.json"))
                .string();
        if (fs::exists(gen_stats_path) && fs::exists(canon_stats_path)) {
            try {
                auto gen_stats = nlohmann::json::parse(
                                     read_text_file(gen_stats_path))
                                     .get<StructuralStats>();
                auto canon_stats = nlohmann::json::parse(
                                       read_text_file(canon_stats_path))
                                       .get<StructuralStats>();
                auto ratios = richness_ratios(gen_stats, canon_stats);
                richness_csv +=
                    csv_cell(doc.id) + "," +
                    std::string(discipline_name(doc.discipline)) + "," +
                    format_double(ratios.images) + "," +
                    format_double(ratios.tables) + "," +
                    format_double(ratios.equations) + "," +
                    format_double(ratios.paragraphs) + "," +
                    format_double(ratios.words) + "," +
                    format_double(ratios.sentences) + "," +
                    format_double(ratios.citations) + "," +
                    format_double(ratios.references) + "\n";
                any_richness = true;
            } catch (const BaselineZeroError& e) {
                if (ctx.diag)
                    ctx.diag->warn("richness_undefined",
                                   doc.id + ": " + e.what());
            }
        }
    }

    std::string disc_csv = "discipline,component,n_surveys,rams_f,tams\n";
    for (const auto& [cell, agg] : by_cell) {
        disc_csv += std::string(discipline_name(cell.first)) + "," +
                    std::string(component_lower_name(cell.second)) + "," +
                    std::to_string(agg.n) + "," +
                    format_double(agg.f_sum / agg.n) + "," +
                    format_double(agg.tams_sum / agg.n) + "\n";
    }

    fs::path base = fs::path(output_dir);
    std::vector<std::string> written;
    write_text_file((base / "alignment.csv").string(), csv);
    written.push_back((base / "alignment.csv").string());
    write_text_file((base / "alignment_disciplines.csv").string(), disc_csv);
    written.push_back((base / "alignment_disciplines.csv").string());
    write_text_file((base / "alignment.json").string(),
                    reports.dump(2) + "\n");
    written.push_back((base / "alignment.json").string());
    if (any_richness) {
        write_text_file((base / "richness.csv").string(), richness_csv);
        written.push_back((base / "richness.csv").string());
    }
    return written;
}

// --- validation ---

namespace {

std::vector<PreferencePair> load_pairs_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pairs file: " + path);
    std::vector<PreferencePair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (trim_view(line).empty()) continue;
        try {
            pairs.push_back(nlohmann::json::parse(line).get<PreferencePair>());
        } catch (const nlohmann::json::exception& e) {
            throw DataError("invalid pair line in " + path + ": " + e.what());
        }
    }
    return pairs;
}

}  // namespace

std::vector<std::string> cmd_validate(
    const PipelineContext& ctx,
    const std::map<std::string, std::string>& settings,
    const std::string& pairs_file, const std::string& output_dir) {
    auto all_pairs = load_pairs_jsonl(pairs_file);
    if (all_pairs.empty()) throw DataError("no pairs in " + pairs_file);

    std::string csv = "setting,component,rho,concordance_pct,degenerate\n";
    nlohmann::json out = nlohmann::json::object();

    for (const auto& [setting, path] : settings) {
        nlohmann::json scores_json;
        try {
            scores_json = nlohmann::json::parse(read_text_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("invalid scores JSON in " + path + ": " + e.what());
        }
        const auto& flat = scores_json.contains("scores")
                               ? scores_json.at("scores")
                               : scores_json;

        nlohmann::json per_component = nlohmann::json::object();
        for (Component component : kAllComponents) {
            std::vector<PreferencePair> pairs;
            for (const auto& p : all_pairs)
                if (p.component == component) pairs.push_back(p);
            if (pairs.empty()) continue;

            std::map<std::string, double> scores;
            for (const auto& p : pairs) {
                for (const auto& id : {p.winner_id, p.loser_id}) {
                    if (scores.count(id)) continue;
                    if (!flat.contains(id))
                        throw MissingScoreError("setting '" + setting +
                                                "' has no score for '" + id +
                                                "'");
                    scores[id] =
                        flat.at(id)
                            .at(std::string(component_lower_name(component)))
                            .get<double>();
                }
            }
            auto result = validate_scores(scores, pairs, ctx.cfg.elo);
            bool degenerate = !result.spearman_rho.has_value();
            csv += setting + "," +
                   std::string(component_lower_name(component)) + "," +
                   (degenerate ? "" : format_double(*result.spearman_rho)) +
                   "," + format_double(result.concordance_pct) + "," +
                   (degenerate ? "true" : "false") + "\n";
            nlohmann::json cell{{"concordance_pct", result.concordance_pct},
                                {"n_items", result.n_items},
                                {"n_pairs", result.n_pairs},
                                {"degenerate", degenerate}};
            if (degenerate)
                cell["rho"] = nullptr;
            else
                cell["rho"] = *result.spearman_rho;
            per_component[std::string(component_lower_name(component))] = cell;
        }
        out[setting] = per_component;
    }

    fs::path base = fs::path(output_dir);
    std::vector<std::string> written;
    write_text_file((base / "validation.csv").string(), csv);
    written.push_back((base / "validation.csv").string());
    write_text_file((base / "validation.json").string(),
                    nlohmann::json{{"settings", out}}.dump(2) + "\n");
    written.push_back((base / "validation.json").string());
    return written;
}

// --- cross-system report ---

std::vector<std::string> cmd_report(
    const PipelineContext& ctx,
    const std::map<std::string, std::string>& system_scores,
    const std::map<std::string, std::string>& system_judgments,
    const std::string& output_dir) {
    (void)ctx;
    if (system_scores.empty()) throw DataError("report: no score artifacts");

    std::string systems_csv = "system,outline,content,reference,overall\n";
    std::vector<std::pair<std::string, double>> ranking;
    for (const auto& [system, path] : system_scores) {
        auto j = nlohmann::json::parse(read_text_file(path));
        const auto& macro = j.at("macro_average");
        systems_csv += csv_cell(system);
        for (Component component : kAllComponents)
            systems_csv +=
                "," + format_double(
                          macro.at(std::string(component_lower_name(component)))
                              .get<double>());
        double overall = macro.at("overall").get<double>();
        systems_csv += "," + format_double(overall) + "\n";
        ranking.emplace_back(system, overall);
    }
    std::sort(ranking.begin(), ranking.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });

    // Aspect-by-system grid from the judgment exports.
    std::map<std::string, std::map<std::string, std::pair<double, int>>> grid;
    for (const auto& [system, dir] : system_judgments) {
        for (const auto& path : list_files_with_suffix(dir, ".judgment.json")) {
            auto j = nlohmann::json::parse(read_text_file(path));
            std::string component = j.at("component").get<std::string>();
            for (const auto& [aspect, value] : j.at("averaged").items()) {
                auto& cell = grid[component + ":" + aspect][system];
                cell.first += value.get<double>();
                cell.second += 1;
            }
        }
    }
    std::string heatmap_csv = "aspect";
    for (const auto& [system, unused] : system_judgments) {
        (void)unused;
        heatmap_csv += "," + csv_cell(system);
    }
    heatmap_csv += "\n";
    for (const auto& [aspect, row] : grid) {
        heatmap_csv += csv_cell(aspect);
        for (const auto& [system, unused] : system_judgments) {
            (void)unused;
            auto it = row.find(system);
            heatmap_csv +=
                "," + (it == row.end()
                           ? std::string()
                           : format_double(it->second.first /
                                           it->second.second));
        }
        heatmap_csv += "\n";
    }

    std::string md = "# Evaluation summary\n\n";
    md += "| rank | system | overall |\n|---|---|---|\n";
    for (std::size_t i = 0; i < ranking.size(); ++i)
        md += "| " + std::to_string(i + 1) + " | " + ranking[i].first + " | " +
              format_double(ranking[i].second) + " |\n";

    fs::path base = fs::path(output_dir);
    std::vector<std::string> written;
    write_text_file((base / "systems.csv").string(), systems_csv);
    written.push_back((base / "systems.csv").string());
    if (!system_judgments.empty()) {
        write_text_file((base / "heatmap.csv").string(), heatmap_csv);
        written.push_back((base / "heatmap.csv").string());
    }
    write_text_file((base / "report.md").string(), md);
    written.push_back((base / "report.md").string());
    return written;
}

// --- ingest ---

std::vector<std::string> cmd_ingest(const PipelineContext& ctx,
                                    RestClient& rest, Discipline discipline,
                                    int year_from, int year_to, int select_top,
                                    const std::string& output_file,
                                    bool classify_ambiguous) {
    IngestOptions opts;
    opts.politeness_ms = rest.mode() == ClientMode::Live ? 1000 : 0;
    if (!ctx.cfg.paths.cache_dir.empty())
        opts.checkpoint_path =
            (fs::path(ctx.cfg.paths.cache_dir) /
             ("ingest_" + std::string(discipline_name(discipline)) +
              ".checkpoint.json"))
                .string();

    auto candidates =
        fetch_reviews(discipline, year_from, year_to, rest, opts, ctx.diag);

    std::unique_ptr<LlmClient> client;
    if (classify_ambiguous) client = ctx.make_client();
    auto lib = ctx.prompt_library();

    std::vector<CandidatePaper> kept;
    for (const auto& paper : candidates) {
        auto verdict = keyword_filter(paper.title);
        if (verdict == KeywordVerdict::Accept) {
            kept.push_back(paper);
            continue;
        }
        if (!classify_ambiguous) continue;
        auto messages = prompts::render_classify_review(
            paper.title, paper.abstract_text, lib);
        auto result = client->complete(messages, "classify:" + paper.paper_id);
        try {
            auto payload = extract_json_payload(result.content);
            auto j = nlohmann::json::parse(payload);
            if (j.at("is_survey").get<bool>()) kept.push_back(paper);
        } catch (const std::exception& e) {
            if (ctx.diag)
                ctx.diag->warn("classify_failed",
                               paper.paper_id + ": " + e.what());
        }
    }

    auto selected = rank_and_select(std::move(kept), select_top);
    std::string lines;
    for (const auto& paper : selected)
        lines += nlohmann::json(paper).dump() + "\n";
    write_text_file(output_file, lines);
    return {output_file};
}

}  // namespace surveyscope
