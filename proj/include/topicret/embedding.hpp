#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace topicret {

/// Fixed-dimension vector with 32-bit components. All components are finite;
/// the constructor rejects NaN and infinities.
class Embedding {
public:
    Embedding() = default;
    explicit Embedding(std::vector<float> values);
    Embedding(std::initializer_list<float> values);

    std::size_t dim() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::span<const float> values() const { return values_; }
    float operator[](std::size_t i) const { return values_[i]; }

    /// Squared L2 norm accumulated in double precision.
    double squared_norm() const;
    double norm() const;
    bool is_zero() const;

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<float> values_;
};

/// An embedding attached to a chunk, with the chunk's topic label.
struct ChunkEmbedding {
    std::string chunk_id;
    std::string topic;
    Embedding embedding;
};

double dot(std::span<const float> a, std::span<const float> b);

/// Unit-norm copy of `v`. The zero vector is returned unchanged, as is any
/// vector already unit-norm to within float rounding, which makes the
/// operation exactly idempotent.
Embedding l2_normalize(const Embedding& v);

/// Cosine of the angle between `a` and `b`, clamped to [-1, 1]. Throws
/// DataError on a dimension mismatch or a zero-norm input.
double cosine_similarity(const Embedding& a, const Embedding& b);

} // namespace topicret
