#include "surveyscope/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace fs = std::filesystem;

namespace surveyscope {

void to_json(nlohmann::json& j, const CandidatePaper& p) {
    j = nlohmann::json{
        {"paper_id", p.paper_id},
        {"title", p.title},
        {"abstract", p.abstract_text},
        {"year", p.year},
        {"citation_count", p.citation_count},
        {"influential_citation_count", p.influential_citation_count},
        {"discipline", std::string(discipline_name(p.discipline))}};
    if (p.open_access_url)
        j["open_access_url"] = *p.open_access_url;
    else
        j["open_access_url"] = nullptr;
}

void from_json(const nlohmann::json& j, CandidatePaper& p) {
    j.at("paper_id").get_to(p.paper_id);
    j.at("title").get_to(p.title);
    p.abstract_text = j.value("abstract", std::string());
    p.year = j.value("year", 0);
    p.citation_count = j.value("citation_count", 0L);
    p.influential_citation_count = j.value("influential_citation_count", 0L);
    p.discipline = discipline_from_string(j.at("discipline").get<std::string>());
    if (j.contains("open_access_url") && !j.at("open_access_url").is_null())
        p.open_access_url = j.at("open_access_url").get<std::string>();
}

const std::vector<std::string>& default_survey_keywords() {
    static const std::vector<std::string> keywords{
        "survey", "review", "overview", "systematic review", "meta-analysis"};
    return keywords;
}

KeywordVerdict keyword_filter(std::string_view title,
                              const std::vector<std::string>& keywords) {
    auto lowered = to_lower_ascii(title);
    for (const auto& keyword : keywords) {
        if (contains_whole_word(lowered, to_lower_ascii(keyword)))
            return KeywordVerdict::Accept;
    }
    return KeywordVerdict::Ambiguous;
}

std::vector<CandidatePaper> rank_and_select(std::vector<CandidatePaper> papers,
                                            int n) {
    std::sort(papers.begin(), papers.end(),
              [](const CandidatePaper& a, const CandidatePaper& b) {
                  if (a.citation_count != b.citation_count)
                      return a.citation_count > b.citation_count;
                  if (a.influential_citation_count !=
                      b.influential_citation_count)
                      return a.influential_citation_count >
                             b.influential_citation_count;
                  return a.paper_id < b.paper_id;
              });
    if (n < 0) n = 0;
    if (static_cast<std::size_t>(n) < papers.size())
        papers.resize(static_cast<std::size_t>(n));
    return papers;
}

// --- REST client ---

namespace {

RestResponse http_get(const std::string& url, const std::string& api_key) {
    auto scheme = url.find("://");
    std::size_t path_start =
        scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
    std::string host =
        path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(host);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("x-api-key", api_key);
    auto res = client.Get(path, headers);
    if (!res) throw TransportError("no response from " + host);
    RestResponse out;
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) out.headers[k] = v;
    return out;
}

}  // namespace

RestClient::RestClient(ClientMode mode, std::string transcript_dir,
                       Fetch fetch, std::string api_key_env)
    : mode_(mode), fetch_(std::move(fetch)) {
    if (!transcript_dir.empty())
        store_ = std::make_unique<TranscriptStore>(transcript_dir);
    if (mode_ != ClientMode::Live && !store_)
        throw ConfigError("record/replay modes require a transcript_dir");
    if (!fetch_ && mode_ != ClientMode::Replay) {
        std::string api_key;
        if (const char* env = std::getenv(api_key_env.c_str())) api_key = env;
        fetch_ = [api_key](const std::string& url) {
            return http_get(url, api_key);
        };
    }
}

RestResponse RestClient::get(const std::string& url) {
    std::string key = stable_hash_hex("GET\x1f" + url);
    if (store_ && mode_ != ClientMode::Live) {
        TranscriptStore::Record record;
        if (store_->lookup(key, record)) {
            auto j = nlohmann::json::parse(record.response);
            RestResponse out;
            out.status = j.at("status").get<int>();
            out.body = j.at("body").get<std::string>();
            out.headers = j.value(
                "headers", std::map<std::string, std::string>{});
            return out;
        }
        if (mode_ == ClientMode::Replay)
            throw TranscriptMissError("replay miss for GET " + url);
    }
    auto response = fetch_(url);
    if (store_) {
        nlohmann::json stored{{"status", response.status},
                              {"body", response.body},
                              {"headers", response.headers}};
        nlohmann::json request{{"method", "GET"}, {"url", url}};
        store_->append(key, request.dump(), stored.dump(), "rest", "");
    }
    return response;
}

// --- paginated review fetch ---

namespace {

std::string url_encode(std::string_view value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

struct Checkpoint {
    std::string token;
    int pages_done = 0;
    bool finished = false;
};

Checkpoint load_checkpoint(const std::string& path) {
    Checkpoint cp;
    std::ifstream in(path);
    if (!in) return cp;
    try {
        nlohmann::json j;
        in >> j;
        cp.token = j.value("token", std::string());
        cp.pages_done = j.value("pages_done", 0);
        cp.finished = j.value("finished", false);
    } catch (const nlohmann::json::exception&) {
        // unreadable checkpoint = start over
        return Checkpoint{};
    }
    return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    if (path.empty()) return;
    auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path);
    out << nlohmann::json{{"token", cp.token},
                          {"pages_done", cp.pages_done},
                          {"finished", cp.finished}}
               .dump()
        << '\n';
}

CandidatePaper paper_from_record(const nlohmann::json& record,
                                 Discipline discipline) {
    CandidatePaper p;
    p.paper_id = record.value("paperId", std::string());
    if (record.contains("title") && record.at("title").is_string())
        p.title = record.at("title").get<std::string>();
    if (record.contains("abstract") && record.at("abstract").is_string())
        p.abstract_text = record.at("abstract").get<std::string>();
    if (record.contains("year") && record.at("year").is_number())
        p.year = record.at("year").get<int>();
    if (record.contains("citationCount") &&
        record.at("citationCount").is_number())
        p.citation_count = record.at("citationCount").get<long>();
    if (record.contains("influentialCitationCount") &&
        record.at("influentialCitationCount").is_number())
        p.influential_citation_count =
            record.at("influentialCitationCount").get<long>();
    p.discipline = discipline;
    if (record.contains("openAccessPdf") &&
        record.at("openAccessPdf").is_object()) {
        const auto& oa = record.at("openAccessPdf");
        if (oa.contains("url") && oa.at("url").is_string())
            p.open_access_url = oa.at("url").get<std::string>();
    }
    return p;
}

}  // namespace

std::vector<CandidatePaper> fetch_reviews(Discipline discipline, int year_from,
                                          int year_to, RestClient& client,
                                          const IngestOptions& opts,
                                          DiagnosticSink* diag) {
    if (year_from > year_to)
        throw DataError("fetch_reviews: year_from exceeds year_to");

    Checkpoint cp;
    if (!opts.checkpoint_path.empty()) cp = load_checkpoint(opts.checkpoint_path);
    if (cp.finished) {
        if (diag) diag->info("ingest_done", "checkpoint marks fetch complete");
        return {};
    }

    const std::string fields =
        "title,abstract,year,citationCount,influentialCitationCount,"
        "openAccessPdf,publicationTypes";
    std::vector<CandidatePaper> papers;
    for (int page = 0; page < opts.max_pages; ++page) {
        if (page > 0 && opts.politeness_ms > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(opts.politeness_ms));

        std::string url = opts.base_url +
                          "?publicationTypes=Review&fieldsOfStudy=" +
                          url_encode(discipline_field_of_study(discipline)) +
                          "&year=" + std::to_string(year_from) + "-" +
                          std::to_string(year_to) + "&fields=" +
                          url_encode(fields) + "&limit=" +
                          std::to_string(opts.page_size);
        if (!cp.token.empty()) url += "&token=" + url_encode(cp.token);

        auto response = client.get(url);
        if (response.status == 429) {
            int retry_after = 0;
            auto it = response.headers.find("Retry-After");
            if (it != response.headers.end())
                retry_after = std::atoi(it->second.c_str());
            save_checkpoint(opts.checkpoint_path, cp);
            throw QuotaExceededError(
                "review fetch rate limited after " +
                    std::to_string(cp.pages_done) + " pages (resumable)",
                retry_after);
        }
        if (response.status != 200)
            throw TransportError("review fetch returned status " +
                                 std::to_string(response.status));

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(response.body);
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("malformed review response: ") +
                                e.what());
        }
        if (j.contains("data")) {
            for (const auto& record : j.at("data"))
                papers.push_back(paper_from_record(record, discipline));
        }
        ++cp.pages_done;

        if (j.contains("token") && j.at("token").is_string() &&
            !j.at("token").get<std::string>().empty()) {
            cp.token = j.at("token").get<std::string>();
            save_checkpoint(opts.checkpoint_path, cp);
        } else {
            cp.finished = true;
            save_checkpoint(opts.checkpoint_path, cp);
            break;
        }
    }
    if (diag)
        diag->info("ingest_pages",
                   std::to_string(cp.pages_done) + " pages fetched");
    return papers;
}

}  // namespace surveyscope
