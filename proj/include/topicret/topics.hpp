#pragma once

#include "topicret/corpus.hpp"
#include "topicret/embedding.hpp"
#include "topicret/tfidf.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topicret {

enum class TransformMethod : std::uint8_t { Original = 0, Average = 1, Append = 2 };

std::string_view to_string(TransformMethod method);
/// Parses "original", "average" or "append".
std::optional<TransformMethod> parse_transform_method(std::string_view name);

/// Centroid of the chunk embeddings that share a topic.
struct TopicEmbedding {
    std::string topic;
    Embedding vector;
    std::size_t member_count = 0;
};

using TopicMap = std::map<std::string, TopicEmbedding>;

/// Element-wise mean (uniform weights) of the member embeddings of each
/// topic. Throws DataError on empty input or mixed dimensions.
TopicMap compute_topic_embeddings(std::span<const ChunkEmbedding> chunks);

/// Alternative for the TF-IDF provider: embeds the concatenated text of each
/// topic's chunks with the fitted model.
TopicMap compute_topic_embeddings_tfidf(const TfIdfModel& model, std::span<const Chunk> chunks);

/// (doc + topic) / 2.
Embedding transform_average(const Embedding& doc, const TopicEmbedding& topic);

/// [doc / |doc| ; topic / |topic|], dimension 2d. Throws DataError if either
/// half has zero norm.
Embedding transform_append(const Embedding& doc, const TopicEmbedding& topic);

/// Query-side counterpart: normalized query for Original and Average, the
/// normalized query repeated twice for Append. Throws DataError on a zero query.
Embedding transform_query(const Embedding& q, TransformMethod method);

/// Applies `method` to every chunk the way the index does: chunk vectors
/// and topic centroids are unit-normalized, transformed, and the results
/// normalized again. Output is in input order.
std::vector<ChunkEmbedding> transform_corpus(std::span<const ChunkEmbedding> chunks,
                                             const TopicMap& topics, TransformMethod method);

} // namespace topicret
