#include "topicret/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace topicret::kernels {

namespace {

inline double row_dot(const float* row, const float* query, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        acc += static_cast<double>(row[j]) * static_cast<double>(query[j]);
    }
    return acc;
}

inline double euclidean(const double* a, const double* b, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double cosine_distance(const double* a, const double* b, std::size_t dim, double norm_a,
                              double norm_b) {
    if (norm_a == 0.0 || norm_b == 0.0) {
        return 1.0;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        acc += a[j] * b[j];
    }
    return 1.0 - std::clamp(acc / (norm_a * norm_b), -1.0, 1.0);
}

std::vector<double> row_norms(std::span<const double> points, std::size_t dim) {
    const std::size_t n = dim == 0 ? 0 : points.size() / dim;
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            acc += points[i * dim + j] * points[i * dim + j];
        }
        norms[i] = std::sqrt(acc);
    }
    return norms;
}

// Accumulates the distance sums of a single point, in point order.
inline void point_sums(std::size_t i, std::span<const double> points, std::size_t dim,
                       std::span<const int> labels, std::size_t n_clusters, Distance distance,
                       const std::vector<double>& norms, double* out) {
    std::fill(out, out + n_clusters, 0.0);
    const double* xi = points.data() + i * dim;
    const std::size_t n = labels.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
            continue;
        }
        const double* xj = points.data() + j * dim;
        const double d = distance == Distance::Euclidean
                             ? euclidean(xi, xj, dim)
                             : cosine_distance(xi, xj, dim, norms[i], norms[j]);
        out[labels[j]] += d;
    }
}

} // namespace

namespace serial {

void score_rows(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                std::span<double> scores) {
    for (std::size_t r = 0; r < scores.size(); ++r) {
        scores[r] = row_dot(rows.data() + r * dim, query.data(), dim);
    }
}

void cluster_distance_sums(std::span<const double> points, std::size_t dim,
                           std::span<const int> labels, std::size_t n_clusters,
                           Distance distance, std::span<double> sums) {
    std::vector<double> norms;
    if (distance == Distance::Cosine) {
        norms = row_norms(points, dim);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        point_sums(i, points, dim, labels, n_clusters, distance, norms,
                   sums.data() + i * n_clusters);
    }
}

} // namespace serial

namespace parallel {

void score_rows(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                std::span<double> scores) {
    const auto n = static_cast<std::ptrdiff_t>(scores.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        scores[r] = row_dot(rows.data() + r * dim, query.data(), dim);
    }
}

void cluster_distance_sums(std::span<const double> points, std::size_t dim,
                           std::span<const int> labels, std::size_t n_clusters,
                           Distance distance, std::span<double> sums) {
    std::vector<double> norms;
    if (distance == Distance::Cosine) {
        norms = row_norms(points, dim);
    }
    const auto n = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        point_sums(static_cast<std::size_t>(i), points, dim, labels, n_clusters, distance, norms,
                   sums.data() + i * n_clusters);
    }
}

} // namespace parallel

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace topicret::kernels
