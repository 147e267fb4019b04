#include "surveyscope/embedding.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

// Cache records are little-endian on disk; native layout is reused directly.
static_assert(std::endian::native == std::endian::little,
              "embedding cache assumes a little-endian host");

#include <httplib.h>
#include <json.hpp>

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace fs = std::filesystem;

namespace surveyscope {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatchError(
            "cosine: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
            std::to_string(b.dim()) + ")");
    if (a.values == b.values) return 1.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        dot += static_cast<double>(a.values[i]) *
               static_cast<double>(b.values[i]);
    if (dot > 1.0) return 1.0;
    if (dot < -1.0) return -1.0;
    return dot;
}

void normalize_embedding(EmbeddingVector& v) {
    double norm_sq = 0.0;
    for (float x : v.values) norm_sq += static_cast<double>(x) * x;
    if (norm_sq <= 0.0) {
        if (!v.values.empty()) v.values[0] = 1.0f;
        return;
    }
    double norm = std::sqrt(norm_sq);
    for (float& x : v.values)
        x = static_cast<float>(static_cast<double>(x) / norm);
}

EmbeddingVector test_embed(std::string_view text, int dim, std::uint64_t seed) {
    if (dim < 1) throw DimensionMismatchError("test_embed: dim must be >= 1");
    EmbeddingVector v;
    v.values.assign(static_cast<std::size_t>(dim), 0.0f);

    std::string lowered = to_lower_ascii(text);
    std::size_t i = 0;
    bool any_token = false;
    while (i < lowered.size()) {
        while (i < lowered.size() &&
               std::isalnum(static_cast<unsigned char>(lowered[i])) == 0)
            ++i;
        std::size_t start = i;
        while (i < lowered.size() &&
               std::isalnum(static_cast<unsigned char>(lowered[i])) != 0)
            ++i;
        if (i == start) continue;
        any_token = true;
        std::uint64_t h =
            fnv1a64(lowered.substr(start, i - start),
                    0xcbf29ce484222325ULL ^ (seed * 0x9E3779B97F4A7C15ULL + 1));
        std::size_t coord = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim));
        float sign = ((h >> 32) & 1) ? 1.0f : -1.0f;
        v.values[coord] += sign;
    }
    if (!any_token) {
        std::uint64_t h = fnv1a64("", seed);
        v.values[static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim))] = 1.0f;
    }
    normalize_embedding(v);
    return v;
}

void EmbedderConfig::validate() const {
    if (batch_size < 1) throw ConfigError("embedder batch_size must be >= 1");
}

// --- HTTP backend ---

namespace {

std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    // "http://host:port/path" -> {"http://host:port", "/path"}
    auto scheme = url.find("://");
    std::size_t path_start =
        scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpEmbeddingBackend::HttpEmbeddingBackend(std::string endpoint_url,
                                           int backoff_base_ms)
    : endpoint_(std::move(endpoint_url)), backoff_base_ms_(backoff_base_ms) {}

std::vector<std::vector<float>> HttpEmbeddingBackend::embed(
    const std::string& model, const std::vector<std::string>& texts) {
    auto [host, path] = split_endpoint(endpoint_);
    nlohmann::json request{{"model", model}, {"input", texts}};
    std::string body = request.dump();

    const int max_attempts = 3;
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                backoff_base_ms_ * (1 << (attempt - 1))));
        }
        httplib::Client client(host);
        client.set_read_timeout(120, 0);
        auto res = client.Post(path, body, "application/json");
        if (!res) {
            last_error = "no response from " + endpoint_;
            continue;
        }
        if (res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ProtocolError("embedding endpoint returned status " +
                                std::to_string(res->status));
        try {
            auto j = nlohmann::json::parse(res->body);
            const auto& data = j.at("data");
            if (data.size() != texts.size())
                throw ProtocolError(
                    "embedding response size mismatch: expected " +
                    std::to_string(texts.size()) + ", got " +
                    std::to_string(data.size()));
            std::vector<std::vector<float>> out;
            out.reserve(data.size());
            for (const auto& item : data)
                out.push_back(item.at("embedding").get<std::vector<float>>());
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("malformed embedding response: ") +
                                e.what());
        }
    }
    throw TransportError("embedding endpoint unreachable after " +
                         std::to_string(max_attempts) + " attempts: " +
                         last_error);
}

// --- cached provider ---

CachedEmbeddingProvider::CachedEmbeddingProvider(
    EmbedderConfig cfg, std::shared_ptr<EmbeddingBackend> backend, bool offline)
    : cfg_(std::move(cfg)), backend_(std::move(backend)), offline_(offline) {
    cfg_.validate();
    if (!backend_ && !offline_)
        backend_ = std::make_shared<HttpEmbeddingBackend>(cfg_.endpoint_url);
}

std::string CachedEmbeddingProvider::cache_key(const std::string& model_name,
                                               const std::string& text) {
    std::string keyed = model_name;
    keyed.push_back('\x1f');
    keyed += text;
    return stable_hash_hex(keyed);
}

namespace {

bool read_cache_record(const fs::path& path, EmbeddingVector& v) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint32_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    if (!in || dim == 0 || dim > (1u << 20)) return false;
    v.values.assign(dim, 0.0f);
    in.read(reinterpret_cast<char*>(v.values.data()),
            static_cast<std::streamsize>(dim * sizeof(float)));
    return static_cast<bool>(in);
}

void write_cache_record(const fs::path& path, const EmbeddingVector& v) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        std::uint32_t dim = static_cast<std::uint32_t>(v.values.size());
        out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
        out.write(reinterpret_cast<const char*>(v.values.data()),
                  static_cast<std::streamsize>(v.values.size() * sizeof(float)));
    }
    fs::rename(tmp, path);
}

}  // namespace

std::vector<EmbeddingVector> CachedEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    if (texts.empty()) throw DataError("embed: empty batch");
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (trim_view(texts[i]).empty())
            throw EmptyTextError(
                "embed: empty text at index " + std::to_string(i), i);
    }

    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> misses;
    fs::path cache_root;
    bool use_cache = !cfg_.cache_dir.empty();
    if (use_cache) cache_root = fs::path(cfg_.cache_dir) / "embeddings";

    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (use_cache) {
            auto key = cache_key(cfg_.model_name, texts[i]);
            if (read_cache_record(cache_root / (key + ".vec"), out[i])) continue;
        }
        misses.push_back(i);
    }

    if (!misses.empty()) {
        if (offline_ || !backend_)
            throw DataError("embedding cache miss in offline mode (" +
                            std::to_string(misses.size()) + " texts)");
        for (std::size_t start = 0; start < misses.size();
             start += static_cast<std::size_t>(cfg_.batch_size)) {
            std::size_t stop = std::min(
                misses.size(), start + static_cast<std::size_t>(cfg_.batch_size));
            std::vector<std::string> chunk;
            chunk.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k)
                chunk.push_back(texts[misses[k]]);
            auto raw = backend_->embed(cfg_.model_name, chunk);
            if (raw.size() != chunk.size())
                throw ProtocolError("backend returned wrong batch size");
            for (std::size_t k = start; k < stop; ++k) {
                EmbeddingVector v{std::move(raw[k - start])};
                if (v.values.empty())
                    throw ProtocolError("backend returned empty vector");
                normalize_embedding(v);
                if (use_cache) {
                    auto key = cache_key(cfg_.model_name, texts[misses[k]]);
                    write_cache_record(cache_root / (key + ".vec"), v);
                }
                out[misses[k]] = std::move(v);
            }
        }
    }
    return out;
}

std::vector<EmbeddingVector> HashEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(test_embed(t, dim_, seed_));
    return out;
}

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         const EmbedderConfig& cfg) {
    CachedEmbeddingProvider provider(cfg);
    return provider.embed(texts);
}

}  // namespace surveyscope
