#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "surveyscope/alignment.hpp"
#include "surveyscope/embedding.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/ingest.hpp"
#include "surveyscope/parse.hpp"
#include "surveyscope/ssr.hpp"
#include "surveyscope/validation.hpp"
#include "surveyscope/weights.hpp"

namespace py = pybind11;
using namespace surveyscope;

namespace {

Discipline discipline_arg(const std::string& name) {
    return discipline_from_string(name);
}

Component component_arg(const std::string& name) {
    return component_from_string(name);
}

std::map<std::string, double> stats_dict(const StructuralStats& s) {
    return {{"images", static_cast<double>(s.images)},
            {"tables", static_cast<double>(s.tables)},
            {"equations", static_cast<double>(s.equations)},
            {"paragraphs", static_cast<double>(s.paragraphs)},
            {"words", static_cast<double>(s.words)},
            {"sentences", static_cast<double>(s.sentences)},
            {"citations", static_cast<double>(s.citations)},
            {"references", static_cast<double>(s.references)}};
}

StructuralStats stats_from_dict(const std::map<std::string, double>& d) {
    StructuralStats s;
    auto get = [&](const char* key) {
        auto it = d.find(key);
        return it == d.end() ? 0L : static_cast<long>(it->second);
    };
    s.images = get("images");
    s.tables = get("tables");
    s.equations = get("equations");
    s.paragraphs = get("paragraphs");
    s.words = get("words");
    s.sentences = get("sentences");
    s.citations = get("citations");
    s.references = get("references");
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discipline-aware survey evaluation core";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<RemoteError>(m, "RemoteError");

    py::class_<OutlineEntry>(m, "OutlineEntry")
        .def(py::init<>())
        .def(py::init([](int level, std::string title) {
                 return OutlineEntry{level, std::move(title)};
             }),
             py::arg("level"), py::arg("title"))
        .def_readwrite("level", &OutlineEntry::level)
        .def_readwrite("title", &OutlineEntry::title);

    py::class_<ContentEntry>(m, "ContentEntry")
        .def(py::init<>())
        .def_readwrite("heading", &ContentEntry::heading)
        .def_readwrite("body", &ContentEntry::body)
        .def_readwrite("figure_count", &ContentEntry::figure_count)
        .def_readwrite("table_count", &ContentEntry::table_count)
        .def_readwrite("equation_count", &ContentEntry::equation_count);

    py::class_<ReferenceEntry>(m, "ReferenceEntry")
        .def(py::init<>())
        .def_readwrite("raw_text", &ReferenceEntry::raw_text)
        .def_readwrite("title", &ReferenceEntry::title);

    py::class_<SurveyDocument>(m, "SurveyDocument")
        .def(py::init<>())
        .def_readwrite("id", &SurveyDocument::id)
        .def_readwrite("topic", &SurveyDocument::topic)
        .def_property(
            "discipline",
            [](const SurveyDocument& doc) {
                return std::string(discipline_name(doc.discipline));
            },
            [](SurveyDocument& doc, const std::string& name) {
                doc.discipline = discipline_arg(name);
            })
        .def_readwrite("outline", &SurveyDocument::outline)
        .def_readwrite("content", &SurveyDocument::content)
        .def_readwrite("references", &SurveyDocument::references)
        .def("to_json",
             [](const SurveyDocument& doc) {
                 return nlohmann::json(doc).dump(2);
             });

    m.def(
        "parse_markdown",
        [](const std::string& markdown, const std::string& id,
           const std::string& topic, const std::string& discipline,
           std::size_t max_section_words) {
            ParseConfig cfg;
            cfg.max_section_words = max_section_words;
            return parse_markdown(markdown, id, topic,
                                  discipline_arg(discipline), cfg);
        },
        py::arg("markdown"), py::arg("id"), py::arg("topic"),
        py::arg("discipline"), py::arg("max_section_words") = 8000);

    m.def(
        "extract_references",
        [](const std::string& markdown) { return extract_references(markdown); },
        py::arg("markdown"));

    m.def(
        "parse_survey",
        [](const std::string& markdown, const std::string& id,
           const std::string& topic, const std::string& discipline) {
            return parse_survey(markdown, id, topic,
                                discipline_arg(discipline));
        },
        py::arg("markdown"), py::arg("id"), py::arg("topic"),
        py::arg("discipline"));

    m.def(
        "compute_stats",
        [](const SurveyDocument& doc, const std::string& markdown) {
            return stats_dict(compute_stats(doc, markdown));
        },
        py::arg("doc"), py::arg("raw_markdown"));

    m.def(
        "richness_ratios",
        [](const std::map<std::string, double>& gen,
           const std::map<std::string, double>& baseline) {
            auto r = richness_ratios(stats_from_dict(gen),
                                     stats_from_dict(baseline));
            return std::map<std::string, double>{
                {"images", r.images},       {"tables", r.tables},
                {"equations", r.equations}, {"paragraphs", r.paragraphs},
                {"words", r.words},         {"sentences", r.sentences},
                {"citations", r.citations}, {"references", r.references}};
        },
        py::arg("gen"), py::arg("baseline"));

    m.def(
        "test_embed",
        [](const std::string& text, int dim, std::uint64_t seed) {
            auto v = test_embed(text, dim, seed);
            return std::vector<double>(v.values.begin(), v.values.end());
        },
        py::arg("text"), py::arg("dim") = 256, py::arg("seed") = 0);

    m.def(
        "cosine",
        [](const std::vector<float>& a, const std::vector<float>& b) {
            return cosine(EmbeddingVector{a}, EmbeddingVector{b});
        },
        py::arg("a"), py::arg("b"));

    m.def("hungarian_max", &hungarian_max, py::arg("scores"));

    m.def(
        "redundancy_weights",
        [](const std::vector<std::vector<float>>& vectors, double penalty) {
            std::vector<EmbeddingVector> embedded;
            embedded.reserve(vectors.size());
            for (const auto& v : vectors) embedded.push_back({v});
            return redundancy_weights(embedded, penalty);
        },
        py::arg("vectors"), py::arg("penalty") = 1.0);

    m.def(
        "build_entries",
        [](const SurveyDocument& doc, const std::string& component) {
            return build_entries(doc, component_arg(component)).entries;
        },
        py::arg("doc"), py::arg("component"));

    m.def(
        "align_texts",
        [](const std::vector<std::string>& generated,
           const std::vector<std::string>& reference,
           const std::string& component, double tau, double penalty, int dim,
           std::uint64_t seed) {
            Component c = component_arg(component);
            EntrySet gen{c, generated, "gen"};
            EntrySet gt{c, reference, "gt"};
            AlignmentConfig cfg;
            cfg.tau[c] = tau;
            cfg.redundancy_penalty = penalty;
            HashEmbeddingProvider provider(dim, seed);
            auto report = align_pair(gen, gt, provider, cfg);
            return nlohmann::json(report).dump();
        },
        py::arg("generated"), py::arg("reference"),
        py::arg("component") = "content", py::arg("tau") = 0.55,
        py::arg("penalty") = 1.0, py::arg("dim") = 256, py::arg("seed") = 0,
        "RAMS/TAMS over the deterministic hash embedder; returns JSON");

    m.def(
        "fit_preference_weights",
        [](const std::vector<std::map<std::string, std::string>>& pairs,
           const FeatureMap& features, double alpha, int max_iters) {
            std::vector<PreferencePair> parsed;
            for (const auto& p : pairs) {
                PreferencePair pair;
                pair.winner_id = p.at("winner_id");
                pair.loser_id = p.at("loser_id");
                parsed.push_back(std::move(pair));
            }
            FitConfig cfg;
            cfg.alpha = alpha;
            cfg.max_iters = max_iters;
            auto fit = fit_weights(parsed, features, cfg);
            auto normalized = normalize_weights(fit.weights);
            return py::make_tuple(normalized.weights, fit.degenerate,
                                  fit.iterations, fit.objective);
        },
        py::arg("pairs"), py::arg("features"), py::arg("alpha") = 0.01,
        py::arg("max_iters") = 5000,
        "Returns (normalized_weights, degenerate, iterations, objective)");

    m.def(
        "compliance_score",
        [](const std::map<std::string, double>& scores,
           const std::map<std::string, double>& normalized_weights,
           double x_max) {
            AspectScoreVector vec;
            vec.scores = scores;
            vec.x_max = x_max;
            WeightVector w{normalized_weights, true};
            return compliance_score(vec, w);
        },
        py::arg("scores"), py::arg("weights"), py::arg("x_max") = 5.0);

    m.def("compliance_contribution", &compliance_contribution,
          py::arg("weight"), py::arg("raw_score"), py::arg("x_max") = 5.0);

    m.def(
        "elo_ratings",
        [](const std::vector<std::pair<std::string, std::string>>& pairs,
           double k_factor, double initial_rating, int replays,
           std::uint64_t seed) {
            std::vector<PreferencePair> parsed;
            for (const auto& [winner, loser] : pairs) {
                PreferencePair p;
                p.winner_id = winner;
                p.loser_id = loser;
                parsed.push_back(std::move(p));
            }
            EloConfig cfg{k_factor, initial_rating, replays, seed};
            return elo_ratings(parsed, cfg);
        },
        py::arg("pairs"), py::arg("k_factor") = 32.0,
        py::arg("initial_rating") = 1500.0, py::arg("replays") = 100,
        py::arg("seed") = 0);

    m.def(
        "spearman",
        [](const std::vector<double>& x,
           const std::vector<double>& y) -> py::object {
            auto rho = spearman(x, y);
            if (!rho) return py::none();
            return py::float_(*rho);
        },
        py::arg("x"), py::arg("y"),
        "Spearman rho with average-rank ties; None when degenerate");

    m.def(
        "concordance",
        [](const std::map<std::string, double>& scores,
           const std::vector<std::pair<std::string, std::string>>& pairs) {
            std::vector<PreferencePair> parsed;
            for (const auto& [winner, loser] : pairs) {
                PreferencePair p;
                p.winner_id = winner;
                p.loser_id = loser;
                parsed.push_back(std::move(p));
            }
            return concordance(scores, parsed);
        },
        py::arg("scores"), py::arg("pairs"));

    m.def(
        "keyword_filter",
        [](const std::string& title) {
            return keyword_filter(title) == KeywordVerdict::Accept
                       ? "accept"
                       : "ambiguous";
        },
        py::arg("title"));

    m.def(
        "rank_and_select",
        [](const std::vector<std::map<std::string, py::object>>& papers,
           int n) {
            std::vector<CandidatePaper> parsed;
            for (const auto& p : papers) {
                CandidatePaper paper;
                paper.paper_id = py::cast<std::string>(p.at("paper_id"));
                if (p.count("title"))
                    paper.title = py::cast<std::string>(p.at("title"));
                if (p.count("citation_count"))
                    paper.citation_count =
                        py::cast<long>(p.at("citation_count"));
                if (p.count("influential_citation_count"))
                    paper.influential_citation_count =
                        py::cast<long>(p.at("influential_citation_count"));
                parsed.push_back(std::move(paper));
            }
            auto selected = rank_and_select(std::move(parsed), n);
            std::vector<std::string> ids;
            ids.reserve(selected.size());
            for (const auto& p : selected) ids.push_back(p.paper_id);
            return ids;
        },
        py::arg("papers"), py::arg("n"),
        "Returns the selected paper_ids in rank order");
}
