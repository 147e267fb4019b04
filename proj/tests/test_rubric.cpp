#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include "support/stub_chat.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/rubric.hpp"

using namespace surveyscope;
namespace fs = std::filesystem;

namespace {

std::unique_ptr<LlmClient> live_stub_client(
    std::shared_ptr<ChatBackend> backend) {
    return std::make_unique<LlmClient>(
        LlmClientConfig{"", "stub-model", 1, "", ClientMode::Live},
        std::move(backend));
}

SurveyDocument tiny_survey(const std::string& id, Discipline d) {
    SurveyDocument doc;
    doc.id = id;
    doc.topic = "topic " + id;
    doc.discipline = d;
    doc.outline = {{1, "Introduction " + id}, {2, "Methods " + id}};
    doc.content = {{"Introduction " + id, "Intro body for " + id, 0, 0, 0},
                   {"Methods " + id, "Method body for " + id, 1, 0, 0}};
    doc.references = {{"A. B. Work about " + id + ". 2020.", "Work " + id}};
    return doc;
}

}  // namespace

TEST_CASE("seed catalog matches the shipped aspect counts") {
    CHECK(seed_aspects(Component::Outline).size() == 3);
    CHECK(seed_aspects(Component::Content).size() == 5);
    CHECK(seed_aspects(Component::Reference).size() == 3);
    CHECK(seed_aspects(Component::Outline)[1].name == "Structural Coherence");
    CHECK(seed_aspects(Component::Reference)[0].name ==
          "Bibliometric Comprehensiveness");
}

TEST_CASE("aggregate_aspects parses the mandated array schema") {
    auto client = live_stub_client(testing::make_scripted_backend());
    std::vector<Aspect> raw{{"a1", "d1"}, {"a2", "d2"}, {"a3", "d3"},
                            {"a4", "d4"}, {"a5", "d5"}};
    auto aspects = aggregate_aspects(raw, 3, *client, "outline");
    REQUIRE(aspects.size() == 3);
    CHECK(aspects[0].name == "Aggregated Aspect 1");
    CHECK_FALSE(aspects[0].description.empty());
}

TEST_CASE("aggregate_aspects retries on count mismatch then fails") {
    int calls = 0;
    auto backend = std::make_shared<FunctionChatBackend>(
        [&](const std::string&, const std::vector<ChatMessage>&) {
            ++calls;
            return std::string(
                R"([{"A": "x"}, {"B": "y"}, {"C": "z"}, {"D": "w"}])");
        });
    auto client = live_stub_client(backend);
    std::vector<Aspect> raw{{"a1", "d1"}, {"a2", "d2"}, {"a3", "d3"},
                            {"a4", "d4"}};
    CHECK_THROWS_AS(aggregate_aspects(raw, 3, *client, "outline"), SchemaError);
    CHECK(calls == 4);  // initial attempt + 3 retries
}

TEST_CASE("aggregate_aspects strips markdown fences") {
    auto backend = std::make_shared<FunctionChatBackend>(
        [](const std::string&, const std::vector<ChatMessage>&) {
            return std::string("```json\n[{\"One\": \"d\"}]\n```");
        });
    auto client = live_stub_client(backend);
    auto aspects = aggregate_aspects({{"a", "d"}, {"b", "d"}}, 1, *client, "c");
    REQUIRE(aspects.size() == 1);
    CHECK(aspects[0].name == "One");
}

TEST_CASE("expand_aspect returns n criteria or errors") {
    auto client = live_stub_client(testing::make_scripted_backend());
    Aspect aspect{"Structural Coherence", "desc"};
    auto criteria =
        expand_aspect(aspect, Component::Outline, "L1: A\nL2: B", 3, *client);
    REQUIRE(criteria.size() == 3);
    for (const auto& c : criteria) {
        CHECK_FALSE(c.criterion_name.empty());
        CHECK_FALSE(c.description.empty());
        CHECK_FALSE(c.example.empty());
    }
    CHECK_THROWS_AS(
        expand_aspect(aspect, Component::Outline, "  ", 3, *client),
        EmptyComponentError);
}

TEST_CASE("expand_aspect rejects missing example field") {
    auto backend = std::make_shared<FunctionChatBackend>(
        [](const std::string&, const std::vector<ChatMessage>&) {
            return std::string(
                R"({"aspect_name":"x","expanded_criteria":[)"
                R"({"criterion_name":"c","description":"d"}]})");
        });
    auto client = live_stub_client(backend);
    try {
        expand_aspect({"x", "d"}, Component::Content, "text", 1, *client);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("example") != std::string::npos);
    }
}

TEST_CASE("merge_criteria degenerate single input and duplicate warning") {
    auto client = live_stub_client(testing::make_scripted_backend());
    std::vector<Criterion> pool{{"c1", "d1", "e1"}};
    auto merged =
        merge_criteria("Formal Precision", Component::Outline, pool, 1, *client);
    CHECK(merged.size() == 1);

    auto dup_backend = std::make_shared<FunctionChatBackend>(
        [](const std::string&, const std::vector<ChatMessage>&) {
            return std::string(
                R"({"aspect_name":"x","merged_expanded_criteria":[)"
                R"({"criterion_name":"same","description":"d","example":"e"},)"
                R"({"criterion_name":"same","description":"d2","example":"e2"}]})");
        });
    auto dup_client = live_stub_client(dup_backend);
    DiagnosticSink diag;
    auto dup = merge_criteria("x", Component::Content, pool, 2, *dup_client, {},
                              "", &diag);
    CHECK(dup.size() == 2);  // accepted
    CHECK(diag.count("duplicate_criterion_name") == 1);
}

TEST_CASE("build_discipline_rubric: call accounting and structure") {
    auto backend = testing::make_scripted_backend();
    auto client = live_stub_client(backend);
    std::vector<SurveyDocument> surveys{
        tiny_survey("s1", Discipline::Biology),
        tiny_survey("s2", Discipline::Biology)};
    RubricOptions opts;
    opts.expand_n = 2;
    opts.merge_n = 2;

    auto seed = seed_aspects(Component::Outline);  // 3 aspects
    auto rubric = build_discipline_rubric(surveys, Component::Outline, seed,
                                          *client, opts);
    // 2 surveys x 3 aspects expand calls + 3 merge calls.
    CHECK(backend->calls() == 9);
    REQUIRE(rubric.aspects.size() == seed.size());
    for (std::size_t i = 0; i < seed.size(); ++i) {
        CHECK(rubric.aspects[i].aspect.name == seed[i].name);
        CHECK(rubric.aspects[i].criteria.size() == 2);
    }
    CHECK(rubric.discipline == Discipline::Biology);
    CHECK(rubric.provenance.survey_ids ==
          std::vector<std::string>{"s1", "s2"});
    CHECK(rubric.provenance.model == "stub-model");
}

TEST_CASE("build_discipline_rubric rejects empty and mixed inputs") {
    auto client = live_stub_client(testing::make_scripted_backend());
    CHECK_THROWS_AS(
        build_discipline_rubric({}, Component::Outline,
                                seed_aspects(Component::Outline), *client),
        DataError);
    std::vector<SurveyDocument> mixed{tiny_survey("a", Discipline::Biology),
                                      tiny_survey("b", Discipline::Physics)};
    CHECK_THROWS_AS(
        build_discipline_rubric(mixed, Component::Outline,
                                seed_aspects(Component::Outline), *client),
        DataError);
}

TEST_CASE("single-survey pipeline still merges") {
    auto backend = testing::make_scripted_backend();
    auto client = live_stub_client(backend);
    std::vector<SurveyDocument> one{tiny_survey("solo", Discipline::Education)};
    auto rubric = build_discipline_rubric(
        one, Component::Reference, seed_aspects(Component::Reference), *client);
    CHECK(rubric.aspects.size() == 3);
    CHECK(backend->calls() == 6);  // 3 expands + 3 merges
}

TEST_CASE("replayed rubric build is byte-identical") {
    auto dir = fs::temp_directory_path() / "sscope_rubric_replay";
    fs::remove_all(dir);
    std::vector<SurveyDocument> surveys{
        tiny_survey("r1", Discipline::Medicine),
        tiny_survey("r2", Discipline::Medicine)};

    {
        LlmClient recorder(
            {"", "stub-model", 1, dir.string(), ClientMode::Record},
            testing::make_scripted_backend());
        build_discipline_rubric(surveys, Component::Content,
                                seed_aspects(Component::Content), recorder);
    }
    auto replay_once = [&] {
        LlmClient replayer(
            {"", "stub-model", 1, dir.string(), ClientMode::Replay});
        auto rubric = build_discipline_rubric(
            surveys, Component::Content, seed_aspects(Component::Content),
            replayer);
        return nlohmann::json(rubric).dump(2);
    };
    CHECK(replay_once() == replay_once());
}

TEST_CASE("rubric files round-trip") {
    auto client = live_stub_client(testing::make_scripted_backend());
    auto rubric = build_discipline_rubric(
        {tiny_survey("s", Discipline::Sociology)}, Component::Outline,
        seed_aspects(Component::Outline), *client);
    auto path = (fs::temp_directory_path() / "sscope_rubric.json").string();
    save_rubric_json(rubric, path);
    auto loaded = load_rubric_json(path);
    CHECK(nlohmann::json(loaded) == nlohmann::json(rubric));
}

TEST_CASE("aspect catalog override file") {
    auto path = (fs::temp_directory_path() / "sscope_catalog.json").string();
    std::ofstream out(path);
    out << R"({"outline": [{"name": "Only One", "description": "d"}]})";
    out.close();
    auto catalog = load_aspect_catalog(path);
    REQUIRE(catalog.count(Component::Outline) == 1);
    CHECK(catalog[Component::Outline].size() == 1);
    CHECK(catalog[Component::Outline][0].name == "Only One");
    CHECK(catalog.count(Component::Content) == 0);
}
