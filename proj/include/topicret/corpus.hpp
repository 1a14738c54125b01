#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace topicret {

struct Document {
    std::string id;
    std::string topic;
    std::string text;
};

/// A fixed-size contiguous slice of a document. `id` is "<doc_id>#<ordinal>".
struct Chunk {
    std::string id;
    std::string doc_id;
    std::string topic;
    std::string text;
    std::size_t ordinal = 0;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct ChunkingConfig {
    /// Measured in unicode scalar values.
    std::size_t chunk_size = 2000;
};

std::string make_chunk_id(const std::string& doc_id, std::size_t ordinal);

/// Reads a JSON-lines corpus ({"id", "topic", "text"} per line). Blank
/// lines are skipped. Throws DataError naming the offending line.
std::vector<Document> load_corpus(const std::filesystem::path& path);

/// Splits `doc.text` into ceil(len / chunk_size) chunks, never inside a
/// code point. Concatenating the chunk texts reproduces the document.
std::vector<Chunk> chunk_document(const Document& doc, const ChunkingConfig& cfg);

/// Chunks every document; output is grouped by document in input order.
std::vector<Chunk> chunk_corpus(std::span<const Document> docs, const ChunkingConfig& cfg);

std::map<std::string, std::size_t> corpus_stats(std::span<const Chunk> chunks);

void save_chunks(std::span<const Chunk> chunks, const std::filesystem::path& path);
std::vector<Chunk> load_chunks(const std::filesystem::path& path);

} // namespace topicret
