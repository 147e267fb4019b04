#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace surveyscope {

/// Unit-normalized embedding; values are float32 so the disk cache
/// round-trips bitwise.
struct EmbeddingVector {
    std::vector<float> values;

    int dim() const { return static_cast<int>(values.size()); }
};

/// Cosine similarity of unit vectors, clamped to [-1, 1]. Bitwise-equal
/// inputs return exactly 1.0. Throws DimensionMismatchError.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Unit-normalizes in place (double accumulation); zero vectors get a
/// deterministic fallback basis direction.
void normalize_embedding(EmbeddingVector& v);

/// Deterministic local embedder: hashed bag-of-words projection. Each token
/// is hashed (with `seed`) to a coordinate and sign, accumulated, then
/// unit-normalized. Identical (text, dim, seed) yields identical vectors.
EmbeddingVector test_embed(std::string_view text, int dim, std::uint64_t seed);

struct EmbedderConfig {
    std::string endpoint_url;
    std::string model_name;
    int dim = 0;  // advisory; 0 = accept whatever the endpoint returns
    int batch_size = 32;
    std::string cache_dir;

    void validate() const;
};

/// Transport seam: returns raw (unnormalized) vectors in input order.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::vector<std::vector<float>> embed(
        const std::string& model, const std::vector<std::string>& texts) = 0;
};

/// POST {"model", "input": [...]} -> {"data":[{"embedding":[...]}...]}.
/// Transport failures retry 3 times with exponential backoff; protocol
/// failures do not retry.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HttpEmbeddingBackend(std::string endpoint_url,
                                  int backoff_base_ms = 500);
    std::vector<std::vector<float>> embed(
        const std::string& model, const std::vector<std::string>& texts) override;

private:
    std::string endpoint_;
    int backoff_base_ms_;
};

class FunctionEmbeddingBackend : public EmbeddingBackend {
public:
    using Fn = std::function<std::vector<std::vector<float>>(
        const std::string&, const std::vector<std::string>&)>;
    explicit FunctionEmbeddingBackend(Fn fn) : fn_(std::move(fn)) {}
    std::vector<std::vector<float>> embed(
        const std::string& model,
        const std::vector<std::string>& texts) override {
        ++calls_;
        return fn_(model, texts);
    }
    int calls() const { return calls_; }

private:
    Fn fn_;
    int calls_ = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) = 0;
};

/// Remote provider with a content-addressed disk cache: keys hash
/// (model_name, text), so repeated and reordered batches hit the cache.
/// Cache records are little-endian uint32 dim + float32 values, written
/// atomically. In offline mode a cache miss is an error instead of a
/// network call.
class CachedEmbeddingProvider : public EmbeddingProvider {
public:
    CachedEmbeddingProvider(EmbedderConfig cfg,
                            std::shared_ptr<EmbeddingBackend> backend = nullptr,
                            bool offline = false);

    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;

    static std::string cache_key(const std::string& model_name,
                                 const std::string& text);

private:
    EmbedderConfig cfg_;
    std::shared_ptr<EmbeddingBackend> backend_;
    bool offline_;
};

/// Deterministic offline provider built on test_embed.
class HashEmbeddingProvider : public EmbeddingProvider {
public:
    HashEmbeddingProvider(int dim, std::uint64_t seed)
        : dim_(dim), seed_(seed) {}
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;

private:
    int dim_;
    std::uint64_t seed_;
};

/// Convenience wrapper for one cached remote batch (the spec's operation
/// shape); validates inputs, normalizes, and caches under cfg.cache_dir.
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         const EmbedderConfig& cfg);

}  // namespace surveyscope
