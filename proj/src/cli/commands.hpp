#pragma once

#include "topicret/remote.hpp"
#include "topicret/topics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace topicret::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::uint64_t seed = 42;
    bool quiet = false;
    std::string out;
};

enum class TopicSource { Mean, TfIdf };

/// Options shared by every command that turns chunk embeddings into
/// transformed vectors.
struct PipelineOptions {
    std::string embeddings;
    std::string chunks;
    TransformMethod method = TransformMethod::Original;
    TopicSource topic_source = TopicSource::Mean;
    std::string tfidf_model;
    bool normalize_inputs = true;
};

/// How query text becomes a vector.
struct QueryEmbedder {
    std::string tfidf_model;
    std::optional<RemoteEmbeddingConfig> remote;
};

struct IngestOptions {
    std::string corpus;
    std::size_t chunk_size = 2000;
};

struct EmbedOptions {
    std::string provider;
    std::string chunks;
    std::string vectors;
    std::string model_out;
    RemoteEmbeddingConfig remote;
};

struct QueryOptions {
    std::string index;
    std::string text;
    std::string vector;
    std::size_t k = 5;
    bool two_stage = false;
    std::size_t top_m = 1;
    QueryEmbedder embedder;
};

struct EvalRetrievalOptions {
    std::string index;
    std::string queries;
    std::size_t k = 10;
    bool two_stage = false;
    std::size_t top_m = 1;
    QueryEmbedder embedder;
};

struct SyntheticOptions {
    std::string counts;
    bool reference_counts = false;
    std::size_t n_topics = 0;
    std::size_t dim = 64;
    double intra_spread = 0.0;
    double inter_spread = 0.0;
};

void cmd_ingest(const GlobalOptions& g, const IngestOptions& o, std::ostream& out);
void cmd_embed(const GlobalOptions& g, const EmbedOptions& o, std::ostream& out);
void cmd_transform(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out);
void cmd_index(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out);
void cmd_query(const GlobalOptions& g, const QueryOptions& o, std::ostream& out);
void cmd_eval_cluster(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out);
void cmd_eval_retrieval(const GlobalOptions& g, const EvalRetrievalOptions& o, std::ostream& out);
void cmd_export_2d(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out,
                   std::ostream& err);
void cmd_gen_synthetic(const GlobalOptions& g, const SyntheticOptions& o, std::ostream& out);

} // namespace topicret::cli
