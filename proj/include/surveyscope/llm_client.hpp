#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace surveyscope {

struct ChatMessage {
    std::string role;
    std::string content;
};

/// Transport seam for chat completions.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    /// Returns the assistant message content of the first choice.
    virtual std::string complete(const std::string& model,
                                 const std::vector<ChatMessage>& messages) = 0;
};

/// POST {"model", "messages":[{"role","content"}...]} and read
/// choices[0].message.content. Transport failures retry 3 times with
/// exponential backoff; protocol failures do not retry.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(std::string endpoint_url, int backoff_base_ms = 500);
    std::string complete(const std::string& model,
                         const std::vector<ChatMessage>& messages) override;

private:
    std::string endpoint_;
    int backoff_base_ms_;
};

class FunctionChatBackend : public ChatBackend {
public:
    using Fn = std::function<std::string(const std::string&,
                                         const std::vector<ChatMessage>&)>;
    explicit FunctionChatBackend(Fn fn) : fn_(std::move(fn)) {}
    std::string complete(const std::string& model,
                         const std::vector<ChatMessage>& messages) override {
        ++calls_;
        return fn_(model, messages);
    }
    int calls() const { return calls_; }

private:
    Fn fn_;
    int calls_ = 0;
};

enum class ClientMode { Live, Record, Replay };

std::string client_mode_name(ClientMode mode);
ClientMode client_mode_from_string(const std::string& name);

struct LlmClientConfig {
    std::string endpoint_url;
    std::string model_name;
    int max_in_flight = 4;
    std::string transcript_dir;
    ClientMode mode = ClientMode::Live;

    void validate() const;
};

/// Append-only JSONL store of {key_hash, request, response, timestamp,
/// model} records, indexed by key_hash.
class TranscriptStore {
public:
    explicit TranscriptStore(std::string dir);

    struct Record {
        std::string response;
        std::string timestamp;
    };

    bool lookup(const std::string& key_hash, Record& out) const;
    /// Writes the record to disk (flushed) before returning.
    void append(const std::string& key_hash, const std::string& request_json,
                const std::string& response, const std::string& model,
                const std::string& timestamp);
    std::size_t size() const;
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::map<std::string, Record> index_;
    mutable std::mutex mutex_;
};

struct ChatResult {
    std::string content;
    std::string timestamp;      // recorded-at time (stable under replay)
    bool from_transcript = false;
};

/// Chat client with transcript-backed modes:
///   live    always calls the backend; persists first when a transcript
///           directory is configured
///   record  returns the stored response on a key hit, otherwise calls the
///           backend and appends (resumable runs)
///   replay  transcript only; never touches the network; a miss throws
///           TranscriptMissError
/// Responses always land on disk before the caller parses them.
class LlmClient {
public:
    explicit LlmClient(LlmClientConfig cfg,
                       std::shared_ptr<ChatBackend> backend = nullptr);

    /// `salt` disambiguates retries of an otherwise identical request so
    /// replay stays deterministic.
    ChatResult complete(const std::vector<ChatMessage>& messages,
                        const std::string& salt = "");

    const LlmClientConfig& config() const { return cfg_; }

    /// Timestamp of the most recent complete() result (recorded time under
    /// record/replay); empty before the first call.
    std::string last_timestamp() const;

    static std::string request_key(const std::string& model,
                                   const std::vector<ChatMessage>& messages,
                                   const std::string& salt);

private:
    LlmClientConfig cfg_;
    std::shared_ptr<ChatBackend> backend_;
    std::unique_ptr<TranscriptStore> store_;
    std::string last_timestamp_;
    mutable std::mutex mutex_;
};

}  // namespace surveyscope
