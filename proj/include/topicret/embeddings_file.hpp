#pragma once

#include "topicret/embedding.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace topicret {

/// Id-keyed embeddings with a single shared dimension, in file order.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    /// Appends a record. Throws DataError on a duplicate id or a dimension
    /// different from the records already present.
    void add(std::string id, Embedding embedding);

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<Embedding>& embeddings() const { return embeddings_; }

    bool contains(const std::string& id) const { return lookup_.contains(id); }
    /// Throws DataError if `id` is absent.
    const Embedding& at(const std::string& id) const;

    /// Transform method recorded in the file header, if the file had one.
    std::optional<std::string> method;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<Embedding> embeddings_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

/// Reads {"id", "vector"} JSON lines. An optional first line
/// {"method": str, "dim": int} is accepted as a header.
EmbeddingTable load_embeddings_file(const std::filesystem::path& path);

/// Writes the table as JSON lines; when `method` is set a
/// {"method", "dim"} header line comes first.
void save_embeddings_file(const EmbeddingTable& table, const std::filesystem::path& path,
                          const std::optional<std::string>& method = std::nullopt);

} // namespace topicret
