#include "topicret/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace topicret {

namespace {

// Standard normal draws via Box-Muller on raw mt19937_64 output.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t raw() { return engine_(); }

private:
    // Uniform in (0, 1) from the top 53 bits.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::vector<double> gaussian(NormalStream& rng, std::size_t dim, double sigma) {
    std::vector<double> v(dim);
    for (auto& x : v) {
        x = sigma * rng.next();
    }
    return v;
}

Embedding unit_embedding(const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) {
        sq += x * x;
    }
    const double norm = std::sqrt(sq);
    std::vector<float> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = static_cast<float>(v[i] / norm);
    }
    return Embedding(std::move(out));
}

std::string make_word(NormalStream& rng) {
    static constexpr char kLetters[] = "abcdefghijklmnopqrstuvwxyz";
    const std::size_t len = 4 + rng.raw() % 6;
    std::string w;
    for (std::size_t i = 0; i < len; ++i) {
        w.push_back(kLetters[rng.raw() % 26]);
    }
    return w;
}

} // namespace

const std::vector<std::pair<std::string, std::size_t>>& reference_law_topics() {
    static const std::vector<std::pair<std::string, std::size_t>> topics = {
        {"Criminal Code", 716},
        {"Code of Criminal Procedure", 1035},
        {"Customs Code", 280},
        {"Constitution", 100},
        {"Forest Code", 60},
        {"Civil Procedure Code", 551},
        {"Civil Code", 1283},
        {"Migration Code", 181},
        {"Water Code", 76},
        {"Land Code", 150},
        {"Tax Code", 1122},
        {"Code on Administrative Violations", 781},
        {"Labor Code", 414},
        {"Education Law", 129},
    };
    return topics;
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
    if (config.counts.empty()) {
        throw std::invalid_argument("synthetic corpus needs at least one topic");
    }
    if (!config.topic_names.empty() && config.topic_names.size() != config.counts.size()) {
        throw std::invalid_argument("topic_names and counts differ in length");
    }
    if (config.dim == 0) {
        throw std::invalid_argument("dim must be positive");
    }
    if (!(config.inter_spread > 0.0) || !(config.intra_spread > 0.0) ||
        !std::isfinite(config.inter_spread) || !std::isfinite(config.intra_spread)) {
        throw std::invalid_argument("spreads must be positive and finite");
    }
    for (auto c : config.counts) {
        if (c == 0) {
            throw std::invalid_argument("every topic needs at least one chunk");
        }
    }

    NormalStream rng(config.seed);
    const double unit_sigma = 1.0 / std::sqrt(static_cast<double>(config.dim));

    SyntheticCorpus out;
    const auto anchor = gaussian(rng, config.dim, unit_sigma);
    double anchor_norm = 0.0;
    for (double x : anchor) {
        anchor_norm += x * x;
    }
    anchor_norm = std::sqrt(anchor_norm);

    std::vector<std::vector<double>> centers;
    for (std::size_t t = 0; t < config.n_topics(); ++t) {
        auto offset = gaussian(rng, config.dim, unit_sigma * config.inter_spread);
        for (std::size_t j = 0; j < config.dim; ++j) {
            offset[j] += anchor[j] / anchor_norm;
        }
        const auto unit = unit_embedding(offset);
        centers.emplace_back(unit.values().begin(), unit.values().end());
        out.centers.push_back(unit);
    }

    // Small per-topic vocabularies so the text side is usable with TF-IDF.
    std::vector<std::string> shared_words;
    for (int i = 0; i < 40; ++i) {
        shared_words.push_back(make_word(rng));
    }
    std::vector<std::vector<std::string>> topic_words(config.n_topics());
    for (auto& words : topic_words) {
        for (int i = 0; i < 25; ++i) {
            words.push_back(make_word(rng));
        }
    }

    for (std::size_t t = 0; t < config.n_topics(); ++t) {
        char fallback[32];
        std::snprintf(fallback, sizeof fallback, "topic-%02zu", t);
        const std::string topic =
            config.topic_names.empty() ? std::string(fallback) : config.topic_names[t];
        for (std::size_t m = 0; m < config.counts[t]; ++m) {
            auto v = gaussian(rng, config.dim, unit_sigma * config.intra_spread);
            for (std::size_t j = 0; j < config.dim; ++j) {
                v[j] += centers[t][j];
            }
            char doc_id[48];
            std::snprintf(doc_id, sizeof doc_id, "t%02zu-%05zu", t, m);

            std::string text;
            for (int w = 0; w < 24; ++w) {
                const bool topical = rng.raw() % 10 < 7;
                const auto& pool = topical ? topic_words[t] : shared_words;
                if (!text.empty()) {
                    text.push_back(' ');
                }
                text += pool[rng.raw() % pool.size()];
            }
            out.documents.push_back(Document{doc_id, topic, std::move(text)});
            out.embeddings.push_back(
                ChunkEmbedding{make_chunk_id(doc_id, 0), topic, unit_embedding(v)});
        }
    }
    return out;
}

} // namespace topicret
