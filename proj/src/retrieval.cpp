#include "topicret/retrieval.hpp"

#include "topicret/error.hpp"
#include "topicret/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace topicret {

namespace {

constexpr double kUnitNormTolerance = 1e-6;

bool is_unit(std::span<const float> v) {
    return std::abs(std::sqrt(dot(v, v)) - 1.0) <= kUnitNormTolerance;
}

std::size_t expected_topic_dim(TransformMethod method, std::size_t dim) {
    return method == TransformMethod::Append ? dim / 2 : dim;
}

Embedding unit_query(const VectorIndex& index, const Embedding& q) {
    if (q.dim() != index.dim()) {
        throw DataError("query dimension " + std::to_string(q.dim()) +
                        " does not match index dimension " + std::to_string(index.dim()) +
                        " (was the query transformed for the " +
                        std::string(to_string(index.method())) + " method?)");
    }
    if (q.is_zero()) {
        throw DataError("query vector is zero");
    }
    return l2_normalize(q);
}

// Exact top-k over `candidates` (record positions) given precomputed scores.
SearchResult select_top_k(const VectorIndex& index, std::span<const double> scores,
                          std::vector<std::size_t> candidates, std::size_t k) {
    const auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return index.id(a) < index.id(b);
    };
    const std::size_t take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                      candidates.end(), better);
    SearchResult result;
    result.k = k;
    result.hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t r = candidates[i];
        result.hits.push_back(SearchHit{index.id(r), index.topic(r), scores[r]});
    }
    return result;
}

std::vector<double> score_all(const VectorIndex& index, const Embedding& unit_q) {
    std::vector<double> scores(index.size());
    kernels::parallel::score_rows(index.vectors(), index.dim(), unit_q.values(), scores);
    for (auto& s : scores) {
        s = std::clamp(s, -1.0, 1.0);
    }
    return scores;
}

} // namespace

VectorIndex::VectorIndex(TransformMethod method, std::size_t dim, std::vector<std::string> ids,
                         std::vector<std::uint32_t> topic_refs, std::vector<float> vectors,
                         std::vector<std::string> topic_names, std::size_t topic_dim,
                         std::vector<float> topic_vectors)
    : method_(method),
      dim_(dim),
      ids_(std::move(ids)),
      topic_refs_(std::move(topic_refs)),
      vectors_(std::move(vectors)),
      topic_names_(std::move(topic_names)),
      topic_dim_(topic_dim),
      topic_vectors_(std::move(topic_vectors)) {
    if (!parse_transform_method(to_string(method_))) {
        throw DataError("unknown transform method tag");
    }
    if (dim_ == 0) {
        throw DataError("index dimension must be positive");
    }
    if (topic_dim_ != expected_topic_dim(method_, dim_) ||
        (method_ == TransformMethod::Append && dim_ % 2 != 0)) {
        throw DataError("topic dimension " + std::to_string(topic_dim_) +
                        " is inconsistent with index dimension " + std::to_string(dim_));
    }
    if (topic_refs_.size() != ids_.size() || vectors_.size() != ids_.size() * dim_) {
        throw DataError("index record arrays have inconsistent sizes");
    }
    if (topic_vectors_.size() != topic_names_.size() * topic_dim_) {
        throw DataError("index topic arrays have inconsistent sizes");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < ids_.size(); ++r) {
        if (!seen.insert(ids_[r]).second) {
            throw DataError("duplicate chunk id \"" + ids_[r] + "\" in index");
        }
        if (topic_refs_[r] >= topic_names_.size()) {
            throw DataError("chunk \"" + ids_[r] + "\" references an unknown topic");
        }
        if (!is_unit(vector(r))) {
            throw DataError("index vector for \"" + ids_[r] + "\" is not unit-norm");
        }
    }
    std::unordered_set<std::string> seen_topics;
    for (std::size_t t = 0; t < topic_names_.size(); ++t) {
        if (!seen_topics.insert(topic_names_[t]).second) {
            throw DataError("duplicate topic \"" + topic_names_[t] + "\" in index");
        }
        if (!is_unit(topic_vector(t))) {
            throw DataError("topic vector for \"" + topic_names_[t] + "\" is not unit-norm");
        }
    }
}

VectorIndex build_index(std::span<const ChunkEmbedding> entries, const TopicMap& topics,
                        TransformMethod method) {
    if (entries.empty()) {
        throw DataError("cannot build an index from no entries");
    }
    const std::size_t in_dim = entries.front().embedding.dim();
    for (const auto& e : entries) {
        if (e.embedding.dim() != in_dim) {
            throw DataError("dimension mismatch for chunk \"" + e.chunk_id + "\": expected " +
                            std::to_string(in_dim) + ", got " +
                            std::to_string(e.embedding.dim()));
        }
        auto it = topics.find(e.topic);
        if (it == topics.end()) {
            throw DataError("chunk \"" + e.chunk_id + "\" has topic \"" + e.topic +
                            "\" which is missing from the topic map");
        }
        if (it->second.vector.dim() != in_dim) {
            throw DataError("topic \"" + e.topic + "\" has dimension " +
                            std::to_string(it->second.vector.dim()) + ", chunks have " +
                            std::to_string(in_dim));
        }
    }

    // Only topics that own at least one record; std::map keeps them sorted.
    std::vector<std::string> topic_names;
    std::unordered_map<std::string, std::uint32_t> topic_ref;
    for (const auto& e : entries) {
        topic_ref.emplace(e.topic, 0);
    }
    std::vector<float> topic_vectors;
    for (const auto& [name, t] : topics) {
        if (!topic_ref.contains(name)) {
            continue;
        }
        if (t.vector.is_zero()) {
            throw DataError("topic \"" + name + "\" has a zero centroid");
        }
        topic_ref[name] = static_cast<std::uint32_t>(topic_names.size());
        topic_names.push_back(name);
        const auto unit = l2_normalize(t.vector);
        topic_vectors.insert(topic_vectors.end(), unit.values().begin(), unit.values().end());
    }

    const auto transformed = transform_corpus(entries, topics, method);
    const std::size_t dim = transformed.front().embedding.dim();
    std::vector<std::string> ids;
    std::vector<std::uint32_t> refs;
    std::vector<float> vectors;
    ids.reserve(transformed.size());
    refs.reserve(transformed.size());
    vectors.reserve(transformed.size() * dim);
    for (const auto& t : transformed) {
        ids.push_back(t.chunk_id);
        refs.push_back(topic_ref.at(t.topic));
        vectors.insert(vectors.end(), t.embedding.values().begin(), t.embedding.values().end());
    }
    return VectorIndex(method, dim, std::move(ids), std::move(refs), std::move(vectors),
                       std::move(topic_names), in_dim, std::move(topic_vectors));
}

SearchResult search(const VectorIndex& index, const Embedding& q, std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    const auto unit_q = unit_query(index, q);
    const auto scores = score_all(index, unit_q);
    std::vector<std::size_t> candidates(index.size());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    return select_top_k(index, scores, std::move(candidates), k);
}

std::vector<SearchResult> search_batch(const VectorIndex& index,
                                       std::span<const Embedding> queries, std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    for (const auto& q : queries) {
        unit_query(index, q);
    }
    std::vector<SearchResult> results(queries.size());
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[i] = search(index, queries[i], k);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

std::vector<RankedTopic> rank_topics(const VectorIndex& index, const Embedding& q,
                                     std::size_t top_m) {
    if (index.topic_count() == 0) {
        throw DataError("index has no topics to route to");
    }
    if (top_m == 0) {
        throw std::invalid_argument("top_m must be at least 1");
    }
    if (q.dim() != index.topic_dim()) {
        throw DataError("query dimension " + std::to_string(q.dim()) +
                        " does not match topic dimension " + std::to_string(index.topic_dim()));
    }
    if (q.is_zero()) {
        throw DataError("query vector is zero");
    }
    const auto unit_q = l2_normalize(q);
    std::vector<RankedTopic> ranked;
    ranked.reserve(index.topic_count());
    for (std::size_t t = 0; t < index.topic_count(); ++t) {
        const double s = std::clamp(dot(unit_q.values(), index.topic_vector(t)), -1.0, 1.0);
        ranked.push_back(RankedTopic{index.topic_name(t), s});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedTopic& a, const RankedTopic& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.topic < b.topic;
    });
    ranked.resize(std::min(top_m, ranked.size()));
    return ranked;
}

SearchResult two_stage_search(const VectorIndex& index, const Embedding& q, std::size_t k,
                              std::size_t top_m_topics) {
    if (index.method() != TransformMethod::Original) {
        throw DataError("two-stage search needs an index built with the original method, got " +
                        std::string(to_string(index.method())));
    }
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    const auto routed = rank_topics(index, q, top_m_topics);
    std::vector<bool> keep(index.topic_count(), false);
    for (const auto& r : routed) {
        const auto it = std::find(index.topic_names().begin(), index.topic_names().end(), r.topic);
        keep[static_cast<std::size_t>(it - index.topic_names().begin())] = true;
    }
    const auto unit_q = unit_query(index, q);
    const auto scores = score_all(index, unit_q);
    std::vector<std::size_t> candidates;
    for (std::size_t r = 0; r < index.size(); ++r) {
        if (keep[index.topic_ref(r)]) {
            candidates.push_back(r);
        }
    }
    return select_top_k(index, scores, std::move(candidates), k);
}

} // namespace topicret
