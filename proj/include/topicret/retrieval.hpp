#pragma once

#include "topicret/embedding.hpp"
#include "topicret/topics.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace topicret {

/// Immutable flat collection of unit vectors, one per chunk, plus the unit
/// topic centroids used for routing.
///
/// Record vectors live in one row-major float buffer (count x dim). Topic
/// centroids have the chunk embedding dimension, which for the append
/// method is half the record dimension.
class VectorIndex {
public:
    /// Validates every invariant; throws DataError on violation.
    VectorIndex(TransformMethod method, std::size_t dim, std::vector<std::string> ids,
                std::vector<std::uint32_t> topic_refs, std::vector<float> vectors,
                std::vector<std::string> topic_names, std::size_t topic_dim,
                std::vector<float> topic_vectors);

    TransformMethod method() const { return method_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }

    const std::string& id(std::size_t record) const { return ids_[record]; }
    const std::string& topic(std::size_t record) const { return topic_names_[topic_refs_[record]]; }
    std::uint32_t topic_ref(std::size_t record) const { return topic_refs_[record]; }
    std::span<const float> vector(std::size_t record) const {
        return std::span<const float>(vectors_).subspan(record * dim_, dim_);
    }

    std::size_t topic_count() const { return topic_names_.size(); }
    std::size_t topic_dim() const { return topic_dim_; }
    const std::string& topic_name(std::size_t t) const { return topic_names_[t]; }
    std::span<const float> topic_vector(std::size_t t) const {
        return std::span<const float>(topic_vectors_).subspan(t * topic_dim_, topic_dim_);
    }

    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<std::uint32_t>& topic_refs() const { return topic_refs_; }
    const std::vector<float>& vectors() const { return vectors_; }
    const std::vector<std::string>& topic_names() const { return topic_names_; }
    const std::vector<float>& topic_vectors() const { return topic_vectors_; }

    friend bool operator==(const VectorIndex&, const VectorIndex&) = default;

private:
    TransformMethod method_;
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<std::uint32_t> topic_refs_;
    std::vector<float> vectors_;
    std::vector<std::string> topic_names_;
    std::size_t topic_dim_;
    std::vector<float> topic_vectors_;
};

struct SearchHit {
    std::string chunk_id;
    std::string topic;
    double score = 0.0;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct SearchResult {
    std::vector<SearchHit> hits;   // best first
    std::size_t k = 0;
};

struct RankedTopic {
    std::string topic;
    double score = 0.0;
};

/// Builds an index: chunk vectors are transformed per `method` against the
/// topic centroids and normalized. Records keep input order.
VectorIndex build_index(std::span<const ChunkEmbedding> entries, const TopicMap& topics,
                        TransformMethod method);

/// Exact top-k by cosine. Ties go to the lexicographically smaller chunk id.
/// `q` must already match the index dimension (see transform_query).
SearchResult search(const VectorIndex& index, const Embedding& q, std::size_t k);

/// Runs search() for every query; queries are processed in parallel.
std::vector<SearchResult> search_batch(const VectorIndex& index,
                                       std::span<const Embedding> queries, std::size_t k);

/// Topics ordered by cosine(q, centroid), best first, ties by name; at most
/// `top_m` are returned.
std::vector<RankedTopic> rank_topics(const VectorIndex& index, const Embedding& q,
                                     std::size_t top_m);

/// Routes the query to the `top_m_topics` closest topics, then runs exact
/// top-k search restricted to their chunks. Requires an Original index.
SearchResult two_stage_search(const VectorIndex& index, const Embedding& q, std::size_t k,
                              std::size_t top_m_topics);

} // namespace topicret
