#include "topicret/remote.hpp"

#include "topicret/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace topicret {

namespace {

bool is_transient(int status) {
    return status == 429 || status >= 500;
}

std::vector<Embedding> parse_response(const std::string& body, std::size_t expected) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw RemoteError(std::string("embeddings response is not valid JSON: ") + e.what());
    }
    auto data = obj.find("data");
    if (data == obj.end() || !data->is_array()) {
        throw RemoteError("embeddings response has no \"data\" array");
    }
    if (data->size() != expected) {
        throw RemoteError("embeddings response holds " + std::to_string(data->size()) +
                          " vectors for " + std::to_string(expected) + " inputs");
    }
    std::vector<Embedding> out(expected);
    std::vector<bool> filled(expected, false);
    for (std::size_t i = 0; i < data->size(); ++i) {
        const auto& item = (*data)[i];
        std::size_t slot = i;
        if (auto idx = item.find("index"); idx != item.end()) {
            if (!idx->is_number_unsigned() || idx->get<std::size_t>() >= expected) {
                throw RemoteError("embeddings response has an out-of-range index");
            }
            slot = idx->get<std::size_t>();
        }
        if (filled[slot]) {
            throw RemoteError("embeddings response repeats index " + std::to_string(slot));
        }
        auto emb = item.find("embedding");
        if (emb == item.end() || !emb->is_array()) {
            throw RemoteError("embeddings response item has no \"embedding\" array");
        }
        try {
            out[slot] = Embedding(emb->get<std::vector<float>>());
        } catch (const std::exception& e) {
            throw RemoteError(std::string("invalid embedding in response: ") + e.what());
        }
        filled[slot] = true;
    }
    return out;
}

std::vector<Embedding> fetch_batch(const RemoteEmbeddingConfig& cfg, const std::string& api_key,
                                   EmbeddingTransport& transport,
                                   std::span<const std::string> batch) {
    const nlohmann::json request = {
        {"model", cfg.model_name},
        {"input", std::vector<std::string>(batch.begin(), batch.end())},
    };
    const std::string body = request.dump();
    auto backoff = cfg.initial_backoff;
    std::string last_failure;
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        HttpResponse res;
        try {
            res = transport.post(body, api_key);
        } catch (const TransportError& e) {
            last_failure = e.what();
            continue;
        }
        if (res.status == 200) {
            return parse_response(res.body, batch.size());
        }
        last_failure = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
        if (!is_transient(res.status)) {
            break;
        }
    }
    throw RemoteError("embeddings request failed: " + last_failure);
}

} // namespace

HttpTransport::HttpTransport(const RemoteEmbeddingConfig& cfg) : timeout_(cfg.timeout) {
    const auto scheme_end = cfg.endpoint_url.find("://");
    if (scheme_end == std::string::npos) {
        throw RemoteError("endpoint url must start with http:// or https://: " +
                          cfg.endpoint_url);
    }
    const auto path_start = cfg.endpoint_url.find('/', scheme_end + 3);
    origin_ = cfg.endpoint_url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : cfg.endpoint_url.substr(path_start);
}

HttpResponse HttpTransport::post(const std::string& body, const std::string& api_key) {
    httplib::Client client(origin_);
    if (!client.is_valid()) {
        throw RemoteError("unsupported endpoint: " + origin_);
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
        throw TransportError("request to " + origin_ + path_ +
                             " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
}

std::vector<Embedding> fetch_remote_embeddings(const RemoteEmbeddingConfig& cfg,
                                               const std::vector<std::string>& texts) {
    if (texts.empty()) {
        return {};
    }
    HttpTransport transport(cfg);
    return fetch_remote_embeddings(cfg, texts, transport);
}

std::vector<Embedding> fetch_remote_embeddings(const RemoteEmbeddingConfig& cfg,
                                               const std::vector<std::string>& texts,
                                               EmbeddingTransport& transport) {
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("batch_size must be at least 1");
    }
    if (cfg.max_attempts < 1) {
        throw std::invalid_argument("max_attempts must be at least 1");
    }
    if (texts.empty()) {
        return {};
    }
    const char* key = std::getenv(cfg.api_key_env_var.c_str());
    if (key == nullptr || *key == '\0') {
        throw RemoteError("environment variable " + cfg.api_key_env_var + " is not set");
    }
    const std::string api_key = key;

    const std::size_t n_batches = (texts.size() + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<std::vector<Embedding>> results(n_batches);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t b = next++; b < n_batches; b = next++) {
            {
                std::lock_guard lock(failure_mutex);
                if (failure) {
                    return;
                }
            }
            const std::size_t begin = b * cfg.batch_size;
            const std::size_t count = std::min(cfg.batch_size, texts.size() - begin);
            try {
                results[b] = fetch_batch(cfg, api_key, transport,
                                         std::span<const std::string>(texts).subspan(begin, count));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t n_workers = std::clamp<std::size_t>(cfg.max_parallel, 1, n_batches);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_workers; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (auto& batch : results) {
        for (auto& e : batch) {
            if (!out.empty() && e.dim() != out.front().dim()) {
                throw RemoteError("embeddings response dimensions are inconsistent");
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace topicret
