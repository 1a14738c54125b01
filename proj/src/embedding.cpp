#include "topicret/embedding.hpp"

#include "topicret/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace topicret {

namespace {

// A float vector normalized in double precision has |norm - 1| bounded by
// roughly FLT_EPSILON / 2; anything within this band is treated as unit.
constexpr double kUnitTolerance = 2.0 * FLT_EPSILON;

void check_finite(const std::vector<float>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DataError("non-finite embedding component at position " + std::to_string(i));
        }
    }
}

} // namespace

Embedding::Embedding(std::vector<float> values) : values_(std::move(values)) {
    check_finite(values_);
}

Embedding::Embedding(std::initializer_list<float> values) : values_(values) {
    check_finite(values_);
}

double Embedding::squared_norm() const {
    return dot(values_, values_);
}

double Embedding::norm() const {
    return std::sqrt(squared_norm());
}

bool Embedding::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](float x) { return x == 0.0f; });
}

double dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

Embedding l2_normalize(const Embedding& v) {
    const double norm = v.norm();
    if (norm == 0.0 || std::abs(norm - 1.0) <= kUnitTolerance) {
        return v;
    }
    std::vector<float> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(static_cast<double>(v[i]) / norm);
    }
    return Embedding(std::move(out));
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw DataError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        throw DataError("cosine similarity of a zero-norm vector");
    }
    return std::clamp(dot(a.values(), b.values()) / (na * nb), -1.0, 1.0);
}

} // namespace topicret
