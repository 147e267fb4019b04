#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "surveyscope/errors.hpp"
#include "surveyscope/ingest.hpp"

using namespace surveyscope;
namespace fs = std::filesystem;

TEST_CASE("keyword filter decision table") {
    struct Row {
        const char* title;
        KeywordVerdict verdict;
    };
    const Row table[] = {
        {"A Survey of Graph Learning", KeywordVerdict::Accept},
        {"Deep Learning for Protein Folding", KeywordVerdict::Ambiguous},
        // Whole-word boundaries: inflected forms do not match.
        {"Reviewing the reviewers: a study", KeywordVerdict::Ambiguous},
        {"Surveys in the wild", KeywordVerdict::Ambiguous},
        {"An overview of quantum sensing", KeywordVerdict::Accept},
        {"A systematic review of trials", KeywordVerdict::Accept},
        {"Meta-analysis of diet studies", KeywordVerdict::Accept},
        {"A review, with commentary", KeywordVerdict::Accept},
        {"SURVEY: uppercase title", KeywordVerdict::Accept},
        {"Overviewing methods", KeywordVerdict::Ambiguous},
    };
    for (const auto& row : table) {
        CAPTURE(row.title);
        CHECK(keyword_filter(row.title) == row.verdict);
    }
}

TEST_CASE("rank_and_select ordering and tiebreaks") {
    auto paper = [](const char* id, long cites, long influential) {
        CandidatePaper p;
        p.paper_id = id;
        p.citation_count = cites;
        p.influential_citation_count = influential;
        return p;
    };
    std::vector<CandidatePaper> papers{
        paper("p10", 10, 0), paper("p50", 50, 1), paper("p30", 30, 2)};
    auto top2 = rank_and_select(papers, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0].paper_id == "p50");
    CHECK(top2[1].paper_id == "p30");

    auto all = rank_and_select(papers, 99);
    CHECK(all.size() == 3);

    std::vector<CandidatePaper> tied{paper("a", 7, 5), paper("b", 7, 9)};
    auto ranked = rank_and_select(tied, 2);
    CHECK(ranked[0].paper_id == "b");  // influential tiebreak

    std::vector<CandidatePaper> fully_tied{paper("z", 7, 5), paper("a", 7, 5)};
    auto stable = rank_and_select(fully_tied, 2);
    CHECK(stable[0].paper_id == "a");  // paper_id tiebreak
}

TEST_CASE("rank_and_select is deterministic across repeats") {
    std::vector<CandidatePaper> papers;
    for (int i = 0; i < 30; ++i) {
        CandidatePaper p;
        p.paper_id = "p" + std::to_string((i * 17) % 30);
        p.citation_count = (i * 13) % 7;
        p.influential_citation_count = (i * 5) % 3;
        papers.push_back(p);
    }
    auto a = rank_and_select(papers, 10);
    auto b = rank_and_select(papers, 10);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].paper_id == b[i].paper_id);
}

namespace {

RestClient::Fetch two_page_fetch(int* requests) {
    return [requests](const std::string& url) {
        ++*requests;
        nlohmann::json data = nlohmann::json::array();
        bool second_page = url.find("token=") != std::string::npos;
        int base = second_page ? 100 : 0;
        for (int i = 0; i < 100; ++i) {
            data.push_back({{"paperId", "p" + std::to_string(base + i)},
                            {"title", "A Survey of Topic " +
                                          std::to_string(base + i)},
                            {"abstract", "text"},
                            {"year", 2021},
                            {"citationCount", base + i},
                            {"influentialCitationCount", i % 5},
                            {"openAccessPdf",
                             {{"url", "https://example.org/pdf"}}}});
        }
        nlohmann::json body{{"data", data}};
        if (!second_page) body["token"] = "PAGE2";
        return RestResponse{200, body.dump(), {}};
    };
}

}  // namespace

TEST_CASE("fetch_reviews paginates until the cursor ends") {
    int requests = 0;
    RestClient client(ClientMode::Live, "", two_page_fetch(&requests));
    IngestOptions opts;
    opts.politeness_ms = 0;
    auto papers =
        fetch_reviews(Discipline::ComputerScience, 2020, 2025, client, opts);
    CHECK(papers.size() == 200);
    CHECK(requests == 2);
    CHECK(papers[0].paper_id == "p0");
    CHECK(papers[0].year == 2021);
    CHECK(papers[0].open_access_url.has_value());
    CHECK(papers[0].discipline == Discipline::ComputerScience);
}

TEST_CASE("fetch_reviews rejects inverted year ranges before any request") {
    int requests = 0;
    RestClient client(ClientMode::Live, "", two_page_fetch(&requests));
    CHECK_THROWS_AS(
        fetch_reviews(Discipline::Biology, 2025, 2020, client, {}),
        DataError);
    CHECK(requests == 0);
}

TEST_CASE("quota response checkpoints and resumes") {
    auto dir = fs::temp_directory_path() / "sscope_ingest_ckpt";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto checkpoint = (dir / "ckpt.json").string();

    int requests = 0;
    bool quota_next = false;
    RestClient::Fetch fetch = [&](const std::string& url) -> RestResponse {
        ++requests;
        if (quota_next) {
            quota_next = false;
            return RestResponse{429, "", {{"Retry-After", "11"}}};
        }
        nlohmann::json data = nlohmann::json::array();
        bool second = url.find("token=") != std::string::npos;
        data.push_back({{"paperId", second ? "second" : "first"},
                        {"title", "A Review"},
                        {"year", 2022},
                        {"citationCount", 1},
                        {"influentialCitationCount", 0}});
        nlohmann::json body{{"data", data}};
        if (!second) body["token"] = "NEXT";
        return RestResponse{200, body.dump(), {}};
    };

    RestClient client(ClientMode::Live, "", fetch);
    IngestOptions opts;
    opts.politeness_ms = 0;
    opts.checkpoint_path = checkpoint;

    // First page succeeds, second hits the quota.
    quota_next = false;
    requests = 0;
    // Arrange: page 1 ok (writes token), then 429 on page 2.
    int page = 0;
    RestClient::Fetch staged = [&](const std::string& url) -> RestResponse {
        ++page;
        if (page == 2) return RestResponse{429, "", {{"Retry-After", "11"}}};
        return fetch(url);
    };
    RestClient staged_client(ClientMode::Live, "", staged);
    try {
        fetch_reviews(Discipline::Physics, 2020, 2025, staged_client, opts);
        FAIL("expected QuotaExceededError");
    } catch (const QuotaExceededError& e) {
        CHECK(e.retry_after_seconds() == 11);
    }
    CHECK(fs::exists(checkpoint));

    // Resume continues from the stored cursor and finishes.
    auto resumed =
        fetch_reviews(Discipline::Physics, 2020, 2025, client, opts);
    REQUIRE(resumed.size() == 1);
    CHECK(resumed[0].paper_id == "second");

    // A finished checkpoint short-circuits.
    auto again = fetch_reviews(Discipline::Physics, 2020, 2025, client, opts);
    CHECK(again.empty());
}

TEST_CASE("rest client record and replay") {
    auto dir = fs::temp_directory_path() / "sscope_rest_replay";
    fs::remove_all(dir);
    int requests = 0;
    {
        RestClient recorder(ClientMode::Record, dir.string(),
                            [&](const std::string&) {
                                ++requests;
                                return RestResponse{200, "{\"data\":[]}", {}};
                            });
        recorder.get("http://x/a");
        recorder.get("http://x/a");  // transcript hit
        CHECK(requests == 1);
    }
    RestClient replayer(ClientMode::Replay, dir.string());
    auto response = replayer.get("http://x/a");
    CHECK(response.status == 200);
    CHECK_THROWS_AS(replayer.get("http://x/other"), TranscriptMissError);
}

TEST_CASE("candidate papers serialize as documented JSONL records") {
    CandidatePaper p;
    p.paper_id = "id1";
    p.title = "A Survey";
    p.abstract_text = "abs";
    p.year = 2023;
    p.citation_count = 42;
    p.influential_citation_count = 7;
    p.discipline = Discipline::Psychology;
    nlohmann::json j = p;
    for (const char* key :
         {"paper_id", "title", "abstract", "year", "citation_count",
          "influential_citation_count", "discipline", "open_access_url"})
        CHECK(j.contains(key));
    CHECK(j.at("open_access_url").is_null());
    auto round = j.get<CandidatePaper>();
    CHECK(round.paper_id == "id1");
    CHECK(round.discipline == Discipline::Psychology);
}
