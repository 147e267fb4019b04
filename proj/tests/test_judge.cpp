#include <doctest.h>

#include <filesystem>
#include <memory>

#include "support/stub_chat.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/judge.hpp"

using namespace surveyscope;

namespace {

std::unique_ptr<LlmClient> live_client(std::shared_ptr<ChatBackend> backend) {
    return std::make_unique<LlmClient>(
        LlmClientConfig{"", "stub-model", 1, "", ClientMode::Live},
        std::move(backend));
}

Rubric fixed_rubric(Component component, Discipline d) {
    Rubric rubric;
    rubric.discipline = d;
    rubric.component = component;
    for (const auto& aspect : seed_aspects(component))
        rubric.aspects.push_back(
            {aspect, {{aspect.name + " check", "desc", "example"}}});
    return rubric;
}

SurveyDocument doc_with_id(const std::string& id, Discipline d,
                           const std::string& extra = "") {
    SurveyDocument doc;
    doc.id = id;
    doc.topic = "t";
    doc.discipline = d;
    doc.outline = {{1, "Intro " + id}};
    doc.content = {{"Intro " + id, "Body of " + id + ". " + extra, 0, 0, 0}};
    doc.references = {{"A. B. Ref for " + id + ". 2020.", "Ref " + id}};
    return doc;
}

std::shared_ptr<FunctionChatBackend> constant_score_backend(int score) {
    return std::make_shared<FunctionChatBackend>(
        [score](const std::string&, const std::vector<ChatMessage>& messages) {
            auto criteria_line = testing::line_after_marker(
                messages.back().content, "Domain-specific");
            auto criteria = nlohmann::json::parse(criteria_line);
            nlohmann::json aspects = nlohmann::json::array();
            for (const auto& item : criteria)
                aspects.push_back({{"aspect_name", item.at("name")},
                                   {"score", score},
                                   {"notes", "n"}});
            return nlohmann::json{{"aspects", aspects}}.dump();
        });
}

}  // namespace

TEST_CASE("constant stub averages to the constant") {
    auto client = live_client(constant_score_backend(4));
    auto doc = doc_with_id("s1", Discipline::Physics);
    auto rubric = fixed_rubric(Component::Outline, Discipline::Physics);
    auto result = score_component(doc, Component::Outline, rubric, 3, *client);
    CHECK(result.trials.size() == 3);
    for (const auto& [aspect, mean] : result.averaged)
        CHECK(mean == doctest::Approx(4.0));
}

TEST_CASE("per-trial scores average arithmetically") {
    int call = 0;
    auto backend = std::make_shared<FunctionChatBackend>(
        [&call](const std::string&, const std::vector<ChatMessage>& messages) {
            auto criteria_line = testing::line_after_marker(
                messages.back().content, "Domain-specific");
            auto criteria = nlohmann::json::parse(criteria_line);
            int scores[] = {3, 4, 5};
            nlohmann::json aspects = nlohmann::json::array();
            for (const auto& item : criteria)
                aspects.push_back({{"aspect_name", item.at("name")},
                                   {"score", scores[call % 3]},
                                   {"notes", ""}});
            ++call;
            return nlohmann::json{{"aspects", aspects}}.dump();
        });
    auto client = live_client(backend);
    auto doc = doc_with_id("s1", Discipline::Biology);
    auto rubric = fixed_rubric(Component::Reference, Discipline::Biology);
    auto result =
        score_component(doc, Component::Reference, rubric, 3, *client);
    for (const auto& [aspect, mean] : result.averaged)
        CHECK(mean == doctest::Approx(4.0));
    for (const auto& trial : result.trials)
        for (const auto& judgment : trial) {
            CHECK(judgment.score >= 1);
            CHECK(judgment.score <= 5);
        }
}

TEST_CASE("out-of-range scores raise SchemaError") {
    auto client = live_client(constant_score_backend(6));
    auto doc = doc_with_id("s1", Discipline::Business);
    auto rubric = fixed_rubric(Component::Outline, Discipline::Business);
    CHECK_THROWS_AS(
        score_component(doc, Component::Outline, rubric, 1, *client),
        SchemaError);
}

TEST_CASE("missing rubric aspect raises MissingAspectError") {
    auto backend = std::make_shared<FunctionChatBackend>(
        [](const std::string&, const std::vector<ChatMessage>&) {
            return nlohmann::json{
                {"aspects",
                 {{{"aspect_name", "Unrelated"}, {"score", 3}, {"notes", ""}}}}}
                .dump();
        });
    auto client = live_client(backend);
    auto doc = doc_with_id("s1", Discipline::Medicine);
    auto rubric = fixed_rubric(Component::Content, Discipline::Medicine);
    CHECK_THROWS_AS(
        score_component(doc, Component::Content, rubric, 1, *client),
        MissingAspectError);
}

TEST_CASE("scripted judge is deterministic per survey and component") {
    auto client = live_client(testing::make_scripted_backend());
    auto doc = doc_with_id("s1", Discipline::Sociology);
    auto rubric = fixed_rubric(Component::Content, Discipline::Sociology);
    auto a = score_component(doc, Component::Content, rubric, 2, *client);
    auto b = score_component(doc, Component::Content, rubric, 2, *client);
    CHECK(a.averaged == b.averaged);
}

TEST_CASE("position-biased judge is detected and excluded") {
    auto backend = std::make_shared<FunctionChatBackend>(
        [](const std::string&, const std::vector<ChatMessage>&) {
            return std::string(R"({"winner": "A"})");  // always first slot
        });
    auto client = live_client(backend);
    auto a = doc_with_id("a", Discipline::Education);
    auto b = doc_with_id("b", Discipline::Education);
    auto rubric = fixed_rubric(Component::Outline, Discipline::Education);
    auto outcome = pairwise_compare(a, b, Component::Outline, rubric, *client);
    CHECK_FALSE(outcome.consistent);
}

TEST_CASE("content-consistent judge yields a winner") {
    auto client = live_client(testing::make_scripted_backend());
    auto a = doc_with_id("a", Discipline::Education,
                         "much longer body with many extra words for quality");
    auto b = doc_with_id("b", Discipline::Education);
    auto rubric = fixed_rubric(Component::Content, Discipline::Education);
    auto outcome = pairwise_compare(a, b, Component::Content, rubric, *client);
    REQUIRE(outcome.consistent);
    CHECK(outcome.pair.winner_id == "a");  // longer payload wins in the stub
    CHECK(outcome.pair.loser_id == "b");
    CHECK(outcome.pair.component == Component::Content);
    CHECK(outcome.pair.discipline == Discipline::Education);
}

TEST_CASE("pairwise error propagates with pair context") {
    int call = 0;
    auto backend = std::make_shared<FunctionChatBackend>(
        [&call](const std::string&, const std::vector<ChatMessage>&) {
            ++call;
            if (call == 1) return std::string(R"({"winner": "A"})");
            return std::string("garbled");
        });
    auto client = live_client(backend);
    auto a = doc_with_id("a", Discipline::Physics);
    auto b = doc_with_id("b", Discipline::Physics);
    auto rubric = fixed_rubric(Component::Outline, Discipline::Physics);
    try {
        pairwise_compare(a, b, Component::Outline, rubric, *client);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        std::string what = e.what();
        CHECK(what.find("a") != std::string::npos);
        CHECK(what.find("b") != std::string::npos);
    }
}

TEST_CASE("double round robin call combinatorics") {
    auto backend = testing::make_scripted_backend();
    auto client = live_client(backend);
    std::vector<SurveyDocument> docs{
        doc_with_id("d1", Discipline::Biology, "one extra"),
        doc_with_id("d2", Discipline::Biology, "two extra words"),
        doc_with_id("d3", Discipline::Biology, "three extra words here")};
    auto rubric = fixed_rubric(Component::Content, Discipline::Biology);
    auto pairs =
        double_round_robin(docs, Component::Content, rubric, *client, 7);
    CHECK(backend->calls() == 6);  // 3 unordered pairs x 2 orderings
    CHECK(pairs.size() == 3);      // content-based stub is consistent

    std::vector<SurveyDocument> two{docs[0], docs[1]};
    auto backend2 = testing::make_scripted_backend();
    auto client2 = live_client(backend2);
    double_round_robin(two, Component::Content, rubric, *client2, 7);
    CHECK(backend2->calls() == 2);

    CHECK_THROWS_AS(
        double_round_robin({docs[0]}, Component::Content, rubric, *client, 7),
        DataError);
}

TEST_CASE("seeded round robin replays identically") {
    auto dir = std::filesystem::temp_directory_path() / "sscope_rr_replay";
    std::filesystem::remove_all(dir);
    std::vector<SurveyDocument> docs{
        doc_with_id("d1", Discipline::Physics, "alpha beta"),
        doc_with_id("d2", Discipline::Physics, "gamma delta epsilon")};
    auto rubric = fixed_rubric(Component::Outline, Discipline::Physics);
    std::vector<PreferencePair> recorded;
    {
        LlmClient recorder(
            {"", "stub-model", 1, dir.string(), ClientMode::Record},
            testing::make_scripted_backend());
        recorded = double_round_robin(docs, Component::Outline, rubric,
                                      recorder, 42);
    }
    LlmClient replayer(
        {"", "stub-model", 1, dir.string(), ClientMode::Replay});
    auto replayed =
        double_round_robin(docs, Component::Outline, rubric, replayer, 42);
    REQUIRE(recorded.size() == replayed.size());
    for (std::size_t i = 0; i < recorded.size(); ++i) {
        CHECK(recorded[i].winner_id == replayed[i].winner_id);
        CHECK(recorded[i].loser_id == replayed[i].loser_id);
    }
}

TEST_CASE("judgment export carries per-trial and averaged scores") {
    auto client = live_client(constant_score_backend(3));
    auto doc = doc_with_id("s", Discipline::Biology);
    auto rubric = fixed_rubric(Component::Outline, Discipline::Biology);
    auto score = score_component(doc, Component::Outline, rubric, 2, *client);
    auto j = component_score_json(score);
    CHECK(j.at("survey_id") == "s");
    CHECK(j.at("component") == "outline");
    CHECK(j.at("trials").size() == 2);
    CHECK(j.at("averaged").size() == rubric.aspects.size());
}
