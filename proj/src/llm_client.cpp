#include "surveyscope/llm_client.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace fs = std::filesystem;

namespace surveyscope {

namespace {

std::string iso_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec);
    return buf;
}

nlohmann::json messages_json(const std::vector<ChatMessage>& messages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages)
        arr.push_back({{"role", m.role}, {"content", m.content}});
    return arr;
}

std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    auto scheme = url.find("://");
    std::size_t path_start =
        scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string client_mode_name(ClientMode mode) {
    switch (mode) {
        case ClientMode::Live: return "live";
        case ClientMode::Record: return "record";
        case ClientMode::Replay: return "replay";
    }
    return "live";
}

ClientMode client_mode_from_string(const std::string& name) {
    if (name == "live") return ClientMode::Live;
    if (name == "record") return ClientMode::Record;
    if (name == "replay") return ClientMode::Replay;
    throw ConfigError("unknown client mode: " + name);
}

void LlmClientConfig::validate() const {
    if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
    if (mode != ClientMode::Live && transcript_dir.empty())
        throw ConfigError("record/replay modes require a transcript_dir");
}

// --- HTTP backend ---

HttpChatBackend::HttpChatBackend(std::string endpoint_url, int backoff_base_ms)
    : endpoint_(std::move(endpoint_url)), backoff_base_ms_(backoff_base_ms) {}

std::string HttpChatBackend::complete(const std::string& model,
                                      const std::vector<ChatMessage>& messages) {
    auto [host, path] = split_endpoint(endpoint_);
    nlohmann::json request{{"model", model},
                           {"messages", messages_json(messages)}};
    std::string body = request.dump();

    const int max_attempts = 3;
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(
                backoff_base_ms_ * (1 << (attempt - 1))));
        httplib::Client client(host);
        client.set_read_timeout(300, 0);
        auto res = client.Post(path, body, "application/json");
        if (!res) {
            last_error = "no response from " + endpoint_;
            continue;
        }
        if (res->status == 429) {
            int retry_after = 0;
            if (res->has_header("Retry-After"))
                retry_after = std::atoi(res->get_header_value("Retry-After").c_str());
            throw QuotaExceededError("chat endpoint rate limited", retry_after);
        }
        if (res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ProtocolError("chat endpoint returned status " +
                                std::to_string(res->status));
        try {
            auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("malformed chat response: ") +
                                e.what());
        }
    }
    throw TransportError("chat endpoint unreachable after " +
                         std::to_string(max_attempts) + " attempts: " +
                         last_error);
}

// --- transcript store ---

TranscriptStore::TranscriptStore(std::string dir) {
    fs::create_directories(dir);
    path_ = (fs::path(dir) / "transcript.jsonl").string();
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_view(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            index_[j.at("key_hash").get<std::string>()] = {
                j.at("response").get<std::string>(),
                j.value("timestamp", std::string())};
        } catch (const nlohmann::json::exception& e) {
            throw DataError("corrupt transcript record at " + path_ + ":" +
                            std::to_string(line_no) + ": " + e.what());
        }
    }
}

bool TranscriptStore::lookup(const std::string& key_hash, Record& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = index_.find(key_hash);
    if (it == index_.end()) return false;
    out = it->second;
    return true;
}

void TranscriptStore::append(const std::string& key_hash,
                             const std::string& request_json,
                             const std::string& response,
                             const std::string& model,
                             const std::string& timestamp) {
    std::lock_guard<std::mutex> lock(mutex_);
    nlohmann::json record{{"key_hash", key_hash},
                          {"request", request_json},
                          {"response", response},
                          {"timestamp", timestamp},
                          {"model", model}};
    std::ofstream out(path_, std::ios::app);
    if (!out) throw DataError("cannot append to transcript: " + path_);
    out << record.dump() << '\n';
    out.flush();
    index_[key_hash] = {response, timestamp};
}

std::size_t TranscriptStore::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return index_.size();
}

// --- client ---

LlmClient::LlmClient(LlmClientConfig cfg, std::shared_ptr<ChatBackend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
    cfg_.validate();
    if (!cfg_.transcript_dir.empty())
        store_ = std::make_unique<TranscriptStore>(cfg_.transcript_dir);
    if (!backend_ && cfg_.mode != ClientMode::Replay)
        backend_ = std::make_shared<HttpChatBackend>(cfg_.endpoint_url);
}

std::string LlmClient::request_key(const std::string& model,
                                   const std::vector<ChatMessage>& messages,
                                   const std::string& salt) {
    nlohmann::json key{{"model", model},
                       {"messages", messages_json(messages)},
                       {"salt", salt}};
    return stable_hash_hex(key.dump());
}

std::string LlmClient::last_timestamp() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return last_timestamp_;
}

ChatResult LlmClient::complete(const std::vector<ChatMessage>& messages,
                               const std::string& salt) {
    std::string key = request_key(cfg_.model_name, messages, salt);

    auto remember = [this](const ChatResult& r) {
        std::lock_guard<std::mutex> lock(mutex_);
        last_timestamp_ = r.timestamp;
        return r;
    };

    if (store_ && cfg_.mode != ClientMode::Live) {
        TranscriptStore::Record record;
        if (store_->lookup(key, record))
            return remember({record.response, record.timestamp, true});
        if (cfg_.mode == ClientMode::Replay)
            throw TranscriptMissError("replay miss for request key " + key);
    }

    std::string response = backend_->complete(cfg_.model_name, messages);
    std::string timestamp = iso_timestamp_now();
    if (store_) {
        nlohmann::json request{{"model", cfg_.model_name},
                               {"messages", messages_json(messages)},
                               {"salt", salt}};
        store_->append(key, request.dump(), response, cfg_.model_name,
                       timestamp);
    }
    return remember({response, timestamp, false});
}

}  // namespace surveyscope
