#pragma once

#include "topicret/corpus.hpp"
#include "topicret/embedding.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace topicret {

/// Topic names and chunk counts of the fourteen-law reference corpus.
const std::vector<std::pair<std::string, std::size_t>>& reference_law_topics();

struct SyntheticConfig {
    std::vector<std::size_t> counts;       // chunks per topic
    std::vector<std::string> topic_names;  // empty: "topic-00", "topic-01", ...
    std::size_t dim = 64;
    /// Norm of the offset of each topic center from a shared anchor
    /// direction before projection to the unit sphere. Small values make
    /// topics overlap.
    double inter_spread = 0.3;
    /// Norm of the isotropic noise added to a center for each member.
    double intra_spread = 1.0;
    std::uint64_t seed = 42;

    std::size_t n_topics() const { return counts.size(); }
};

struct SyntheticCorpus {
    std::vector<Document> documents;          // one single-chunk document per vector
    std::vector<ChunkEmbedding> embeddings;   // keyed by chunk id
    std::vector<Embedding> centers;           // unit topic centers
};

/// Deterministic for a fixed config: the random stream depends only on the
/// seed (no implementation-defined distributions). Member vectors are unit
/// normalized. Throws std::invalid_argument on an invalid config.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

} // namespace topicret
