#pragma once

#include "topicret/embedding.hpp"

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace topicret {

/// Settings for an embeddings endpoint speaking the common REST shape:
/// POST {"model", "input": [...]} returning {"data": [{"embedding": [...]}]}.
struct RemoteEmbeddingConfig {
    std::string endpoint_url;       // e.g. https://api.openai.com/v1/embeddings
    std::string model_name;
    std::string api_key_env_var = "OPENAI_API_KEY";
    std::size_t batch_size = 64;
    std::chrono::milliseconds timeout{30000};
    std::size_t max_parallel = 1;   // concurrent batches in flight
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Sends one request body. Implementations throw TransportError when no
/// HTTP response could be obtained at all.
class EmbeddingTransport {
public:
    virtual ~EmbeddingTransport() = default;
    virtual HttpResponse post(const std::string& body, const std::string& api_key) = 0;
};

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transport over HTTP(S) using the endpoint and timeout from the config.
class HttpTransport : public EmbeddingTransport {
public:
    explicit HttpTransport(const RemoteEmbeddingConfig& cfg);
    HttpResponse post(const std::string& body, const std::string& api_key) override;

private:
    std::string origin_;
    std::string path_;
    std::chrono::milliseconds timeout_;
};

/// Embeds `texts` in batches of cfg.batch_size, preserving input order.
/// Transient failures (no response, 429, 5xx) are retried with exponential
/// backoff up to cfg.max_attempts. Throws RemoteError.
std::vector<Embedding> fetch_remote_embeddings(const RemoteEmbeddingConfig& cfg,
                                               const std::vector<std::string>& texts);

std::vector<Embedding> fetch_remote_embeddings(const RemoteEmbeddingConfig& cfg,
                                               const std::vector<std::string>& texts,
                                               EmbeddingTransport& transport);

} // namespace topicret
