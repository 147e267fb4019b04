#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surveyscope/errors.hpp"
#include "surveyscope/pipeline.hpp"

using namespace surveyscope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRemote = 4;

std::map<std::string, std::string> parse_named_paths(
    const std::vector<std::string>& items, const std::string& what) {
    std::map<std::string, std::string> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
            throw ConfigError(what + " entries must look like name=path: " +
                              item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discipline-aware evaluation toolkit for machine-generated "
                 "surveys"};
    app.require_subcommand(1);

    std::string config_path;
    std::string cache_dir_override;
    bool replay = false;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "Run configuration JSON file");
    app.add_option("--cache-dir", cache_dir_override,
                   "Override the cache directory");
    app.add_flag("--replay", replay,
                 "Offline mode: answer every remote call from transcripts");
    app.add_option("--seed", seed_override, "Override the run seed")
        ->each([&](const std::string&) { seed_set = true; });

    // ingest
    auto* ingest = app.add_subcommand(
        "ingest", "Fetch candidate review papers for one discipline");
    std::string ingest_discipline, ingest_out;
    int year_from = 2020, year_to = 2025, ingest_top = 110;
    bool classify = false;
    ingest->add_option("--discipline", ingest_discipline)->required();
    ingest->add_option("--year-from", year_from);
    ingest->add_option("--year-to", year_to);
    ingest->add_option("--top", ingest_top, "Citation-ranked selection size");
    ingest->add_option("--out", ingest_out, "Output JSONL file")->required();
    ingest->add_flag("--classify", classify,
                     "Classify ambiguous titles through the LLM client");

    // parse
    auto* parse = app.add_subcommand(
        "parse", "Convert survey Markdown into structured survey JSON");
    std::string parse_in, parse_out, parse_discipline;
    parse->add_option("--in", parse_in, "Directory of .md files (or with "
                                        "manifest.jsonl)")
        ->required();
    parse->add_option("--out", parse_out)->required();
    parse->add_option("--discipline", parse_discipline,
                      "Discipline for manifest-less inputs");

    // rubric-gen
    auto* rubric_gen = app.add_subcommand(
        "rubric-gen", "Build per-discipline rubrics from human surveys");
    std::string rg_ssr, rg_out;
    rubric_gen->add_option("--ssr", rg_ssr)->required();
    rubric_gen->add_option("--out", rg_out)->required();

    // judge
    auto* judge = app.add_subcommand(
        "judge", "Score survey components against rubrics");
    std::string j_ssr, j_rubrics, j_out;
    judge->add_option("--ssr", j_ssr)->required();
    judge->add_option("--rubrics", j_rubrics)->required();
    judge->add_option("--out", j_out)->required();

    // fit-weights
    auto* fit = app.add_subcommand(
        "fit-weights", "Fit preference-aligned aspect weights");
    std::string f_ssr, f_rubrics, f_out;
    fit->add_option("--ssr", f_ssr)->required();
    fit->add_option("--rubrics", f_rubrics)->required();
    fit->add_option("--out", f_out)->required();

    // score
    auto* score = app.add_subcommand(
        "score", "Compliance score tables for generated surveys");
    std::string s_gen, s_rubrics, s_weights, s_out, s_name = "scores";
    score->add_option("--gen", s_gen)->required();
    score->add_option("--rubrics", s_rubrics)->required();
    score->add_option("--weights", s_weights)->required();
    score->add_option("--out", s_out)->required();
    score->add_option("--name", s_name, "Basename for the table artifacts");

    // align
    auto* align = app.add_subcommand(
        "align", "Canonical alignment tables (matching and similarity)");
    std::string a_gen, a_canon, a_out;
    align->add_option("--gen", a_gen)->required();
    align->add_option("--canon", a_canon)->required();
    align->add_option("--out", a_out)->required();

    // validate
    auto* validate = app.add_subcommand(
        "validate", "Correlate scoring settings with preference rankings");
    std::vector<std::string> v_settings;
    std::string v_pairs, v_out;
    validate->add_option("--scores", v_settings,
                         "Setting score files as name=path")
        ->required();
    validate->add_option("--pairs", v_pairs, "Preference pairs JSONL")
        ->required();
    validate->add_option("--out", v_out)->required();

    // report
    auto* report = app.add_subcommand(
        "report", "Cross-system summary tables and heatmap grid");
    std::vector<std::string> r_scores, r_judgments;
    std::string r_out;
    report->add_option("--scores", r_scores, "Score artifacts as name=path")
        ->required();
    report->add_option("--judgments", r_judgments,
                       "Judgment export dirs as name=dir");
    report->add_option("--out", r_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    DiagnosticSink diag(&std::cerr);
    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_run_config(config_path);
        if (!cache_dir_override.empty()) {
            cfg.paths.cache_dir = cache_dir_override;
            if (cfg.judge.transcript_dir.empty())
                cfg.judge.transcript_dir = cache_dir_override;
        }
        if (replay) cfg.judge.mode = ClientMode::Replay;
        if (seed_set) {
            cfg.seed = seed_override;
            cfg.fit.seed = seed_override;
            cfg.elo.seed = seed_override;
        }
        cfg.validate_and_prepare();

        PipelineContext ctx{cfg, nullptr, nullptr, &diag};
        std::vector<std::string> written;

        if (*ingest) {
            RestClient rest(cfg.judge.mode,
                            cfg.paths.cache_dir.empty()
                                ? std::string()
                                : cfg.paths.cache_dir + "/rest");
            written = cmd_ingest(ctx, rest,
                                 discipline_from_string(ingest_discipline),
                                 year_from, year_to, ingest_top, ingest_out,
                                 classify);
        } else if (*parse) {
            written = cmd_parse(ctx, parse_in, parse_out, parse_discipline);
        } else if (*rubric_gen) {
            written = cmd_rubric_gen(ctx, rg_ssr, rg_out);
        } else if (*judge) {
            written = cmd_judge(ctx, j_ssr, j_rubrics, j_out);
        } else if (*fit) {
            written = cmd_fit_weights(ctx, f_ssr, f_rubrics, f_out);
        } else if (*score) {
            written = cmd_score(ctx, s_gen, s_rubrics, s_weights, s_out, s_name);
        } else if (*align) {
            written = cmd_align(ctx, a_gen, a_canon, a_out);
        } else if (*validate) {
            written = cmd_validate(ctx,
                                   parse_named_paths(v_settings, "--scores"),
                                   v_pairs, v_out);
        } else if (*report) {
            written = cmd_report(ctx, parse_named_paths(r_scores, "--scores"),
                                 parse_named_paths(r_judgments, "--judgments"),
                                 r_out);
        }

        for (const auto& path : written) std::cout << path << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const RemoteError& e) {
        std::cerr << "remote error: " << e.what() << '\n';
        return kExitRemote;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
