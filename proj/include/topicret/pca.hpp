#pragma once

#include "topicret/embedding.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace topicret {

struct Projection2D {
    std::vector<std::array<double, 2>> coords;  // one row per point
    std::array<std::vector<double>, 2> axes;    // unit principal directions
    std::array<double, 2> variance{};           // along each axis
    std::vector<double> mean;
    /// Set when the second axis carries (numerically) no variance.
    bool rank_deficient = false;
};

/// Projects mean-centered points onto their top two principal components,
/// found by block power iteration on the implicit covariance. Each axis is
/// oriented so its largest-magnitude component is positive. Throws
/// DataError for fewer than 3 points or zero-variance data.
Projection2D project_2d(std::span<const double> points, std::size_t dim);

Projection2D project_2d(std::span<const ChunkEmbedding> points);

/// CSV with header chunk_id,topic,x,y; written atomically.
void write_projection_csv(std::span<const ChunkEmbedding> points, const Projection2D& projection,
                          const std::filesystem::path& path);

} // namespace topicret
