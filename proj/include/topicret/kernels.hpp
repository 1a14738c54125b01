#pragma once

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version that produces bit-identical output: parallelism is only
// ever across independent output elements, never inside one accumulation.

#include <cstddef>
#include <span>

namespace topicret::kernels {

enum class Distance { Euclidean, Cosine };

namespace serial {

/// scores[r] = dot(rows[r], query), accumulated in double.
void score_rows(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                std::span<double> scores);

/// For every point i and cluster c: sums[i * n_clusters + c] is the sum of
/// distances from point i to all points labeled c (i itself included, at
/// distance zero). Points are row-major with `dim` columns.
void cluster_distance_sums(std::span<const double> points, std::size_t dim,
                           std::span<const int> labels, std::size_t n_clusters,
                           Distance distance, std::span<double> sums);

} // namespace serial

namespace parallel {

void score_rows(std::span<const float> rows, std::size_t dim, std::span<const float> query,
                std::span<double> scores);

void cluster_distance_sums(std::span<const double> points, std::size_t dim,
                           std::span<const int> labels, std::size_t n_clusters,
                           Distance distance, std::span<double> sums);

} // namespace parallel

/// True when the library was built with OpenMP.
bool openmp_enabled();

} // namespace topicret::kernels
