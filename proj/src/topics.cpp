#include "topicret/topics.hpp"

#include "topicret/error.hpp"

namespace topicret {

namespace {

void require_same_dim(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw DataError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
    }
}

} // namespace

std::string_view to_string(TransformMethod method) {
    switch (method) {
    case TransformMethod::Original:
        return "original";
    case TransformMethod::Average:
        return "average";
    case TransformMethod::Append:
        return "append";
    }
    return "unknown";
}

std::optional<TransformMethod> parse_transform_method(std::string_view name) {
    if (name == "original") {
        return TransformMethod::Original;
    }
    if (name == "average") {
        return TransformMethod::Average;
    }
    if (name == "append") {
        return TransformMethod::Append;
    }
    return std::nullopt;
}

TopicMap compute_topic_embeddings(std::span<const ChunkEmbedding> chunks) {
    if (chunks.empty()) {
        throw DataError("cannot compute topic embeddings from no chunks");
    }
    const std::size_t dim = chunks.front().embedding.dim();
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
    for (const auto& c : chunks) {
        if (c.embedding.dim() != dim) {
            throw DataError("dimension mismatch for chunk \"" + c.chunk_id + "\": expected " +
                            std::to_string(dim) + ", got " + std::to_string(c.embedding.dim()));
        }
        if (c.topic.empty()) {
            throw DataError("chunk \"" + c.chunk_id + "\" has no topic");
        }
        auto& [sum, count] = sums[c.topic];
        if (sum.empty()) {
            sum.assign(dim, 0.0);
        }
        const auto values = c.embedding.values();
        for (std::size_t i = 0; i < dim; ++i) {
            sum[i] += values[i];
        }
        ++count;
    }
    TopicMap topics;
    for (auto& [name, entry] : sums) {
        auto& [sum, count] = entry;
        std::vector<float> mean(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            mean[i] = static_cast<float>(sum[i] / static_cast<double>(count));
        }
        topics.emplace(name, TopicEmbedding{name, Embedding(std::move(mean)), count});
    }
    return topics;
}

TopicMap compute_topic_embeddings_tfidf(const TfIdfModel& model, std::span<const Chunk> chunks) {
    if (chunks.empty()) {
        throw DataError("cannot compute topic embeddings from no chunks");
    }
    std::map<std::string, std::pair<std::string, std::size_t>> texts;
    for (const auto& c : chunks) {
        auto& [text, count] = texts[c.topic];
        // Chunks of one document concatenate losslessly; a separator keeps
        // tokens of adjacent documents apart.
        if (count > 0 && c.ordinal == 0) {
            text.push_back('\n');
        }
        text += c.text;
        ++count;
    }
    TopicMap topics;
    for (const auto& [name, entry] : texts) {
        topics.emplace(name, TopicEmbedding{name, embed_tfidf(model, entry.first), entry.second});
    }
    return topics;
}

Embedding transform_average(const Embedding& doc, const TopicEmbedding& topic) {
    require_same_dim(doc, topic.vector);
    std::vector<float> out(doc.dim());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(
            (static_cast<double>(doc[i]) + static_cast<double>(topic.vector[i])) / 2.0);
    }
    return Embedding(std::move(out));
}

Embedding transform_append(const Embedding& doc, const TopicEmbedding& topic) {
    require_same_dim(doc, topic.vector);
    if (doc.is_zero()) {
        throw DataError("append transform: document half has zero norm");
    }
    if (topic.vector.is_zero()) {
        throw DataError("append transform: topic \"" + topic.topic + "\" has zero norm");
    }
    const auto d = l2_normalize(doc);
    const auto t = l2_normalize(topic.vector);
    std::vector<float> out;
    out.reserve(2 * doc.dim());
    out.insert(out.end(), d.values().begin(), d.values().end());
    out.insert(out.end(), t.values().begin(), t.values().end());
    return Embedding(std::move(out));
}

Embedding transform_query(const Embedding& q, TransformMethod method) {
    if (q.is_zero()) {
        throw DataError("query vector is zero");
    }
    auto unit = l2_normalize(q);
    if (method != TransformMethod::Append) {
        return unit;
    }
    std::vector<float> out;
    out.reserve(2 * unit.dim());
    out.insert(out.end(), unit.values().begin(), unit.values().end());
    out.insert(out.end(), unit.values().begin(), unit.values().end());
    return Embedding(std::move(out));
}

std::vector<ChunkEmbedding> transform_corpus(std::span<const ChunkEmbedding> chunks,
                                             const TopicMap& topics, TransformMethod method) {
    std::map<std::string, TopicEmbedding> unit_topics;
    for (const auto& [name, t] : topics) {
        unit_topics.emplace(name, TopicEmbedding{name, l2_normalize(t.vector), t.member_count});
    }
    std::vector<ChunkEmbedding> out;
    out.reserve(chunks.size());
    for (const auto& c : chunks) {
        auto it = unit_topics.find(c.topic);
        if (it == unit_topics.end()) {
            throw DataError("chunk \"" + c.chunk_id + "\" has topic \"" + c.topic +
                            "\" with no topic embedding");
        }
        const auto doc = l2_normalize(c.embedding);
        Embedding transformed;
        switch (method) {
        case TransformMethod::Original:
            require_same_dim(doc, it->second.vector);
            transformed = doc;
            break;
        case TransformMethod::Average:
            transformed = transform_average(doc, it->second);
            break;
        case TransformMethod::Append:
            transformed = transform_append(doc, it->second);
            break;
        }
        if (transformed.is_zero()) {
            throw DataError("chunk \"" + c.chunk_id + "\" has a zero vector after the " +
                            std::string(to_string(method)) + " transform");
        }
        out.push_back(ChunkEmbedding{c.chunk_id, c.topic, l2_normalize(transformed)});
    }
    return out;
}

} // namespace topicret
