#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surveyscope/diagnostics.hpp"
#include "surveyscope/discipline.hpp"
#include "surveyscope/llm_client.hpp"

namespace surveyscope {

struct CandidatePaper {
    std::string paper_id;
    std::string title;
    std::string abstract_text;
    int year = 0;
    long citation_count = 0;
    long influential_citation_count = 0;
    Discipline discipline = Discipline::ComputerScience;
    std::optional<std::string> open_access_url;
};

void to_json(nlohmann::json& j, const CandidatePaper& p);
void from_json(const nlohmann::json& j, CandidatePaper& p);

enum class KeywordVerdict { Accept, Ambiguous };

/// Survey-indicating title keywords; case-insensitive whole-word (or
/// whole-phrase) matches auto-accept, everything else stays ambiguous for
/// LLM classification.
const std::vector<std::string>& default_survey_keywords();

KeywordVerdict keyword_filter(
    std::string_view title,
    const std::vector<std::string>& keywords = default_survey_keywords());

/// Citation-count descending, influential-count descending, paper_id
/// ascending; takes the first min(n, size).
std::vector<CandidatePaper> rank_and_select(std::vector<CandidatePaper> papers,
                                            int n);

struct RestResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;
};

/// GET transport seam with the same live/record/replay transcript modes as
/// the chat client (keyed by URL).
class RestClient {
public:
    using Fetch = std::function<RestResponse(const std::string& url)>;

    RestClient(ClientMode mode, std::string transcript_dir,
               Fetch fetch = nullptr, std::string api_key_env = "S2_API_KEY");

    RestResponse get(const std::string& url);
    ClientMode mode() const { return mode_; }

private:
    ClientMode mode_;
    std::unique_ptr<TranscriptStore> store_;
    Fetch fetch_;
};

struct IngestOptions {
    int page_size = 100;
    int max_pages = 100;
    int politeness_ms = 1000;  // delay between page requests
    std::string checkpoint_path;  // empty = no checkpointing
    std::string base_url =
        "https://api.semanticscholar.org/graph/v1/paper/search/bulk";
};

/// Paginated fetch of Review-type papers for one discipline and year range.
/// Progress is checkpointed after each page so a quota error can resume
/// from the stored cursor; only the pages fetched by this call are
/// returned.
std::vector<CandidatePaper> fetch_reviews(Discipline discipline, int year_from,
                                          int year_to, RestClient& client,
                                          const IngestOptions& opts = {},
                                          DiagnosticSink* diag = nullptr);

}  // namespace surveyscope
