#include "topicret/corpus.hpp"

#include "jsonl.hpp"
#include "topicret/atomic_file.hpp"
#include "topicret/utf8.hpp"

#include <unordered_map>

namespace topicret {

std::string make_chunk_id(const std::string& doc_id, std::size_t ordinal) {
    return doc_id + "#" + std::to_string(ordinal);
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> seen;
    detail::for_each_json_line(path, [&](const nlohmann::json& obj, std::size_t line_no) {
        Document doc;
        doc.id = detail::require_string(obj, "id", path, line_no);
        doc.topic = detail::require_string(obj, "topic", path, line_no);
        doc.text = detail::require_string(obj, "text", path, line_no);
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (doc.id.empty()) {
            throw DataError(where + ": empty document id");
        }
        if (doc.topic.empty()) {
            throw DataError(where + ": empty topic for document \"" + doc.id + "\"");
        }
        auto [it, inserted] = seen.emplace(doc.id, line_no);
        if (!inserted) {
            throw DataError(where + ": duplicate document id \"" + doc.id +
                            "\" (first seen on line " + std::to_string(it->second) + ")");
        }
        docs.push_back(std::move(doc));
    });
    return docs;
}

std::vector<Chunk> chunk_document(const Document& doc, const ChunkingConfig& cfg) {
    if (cfg.chunk_size == 0) {
        throw std::invalid_argument("chunk_size must be at least 1");
    }
    std::vector<Chunk> chunks;
    const std::string& text = doc.text;
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t end = begin;
        std::size_t scalars = 0;
        while (end < text.size() && scalars < cfg.chunk_size) {
            ++end;
            while (end < text.size() &&
                   utf8::is_continuation(static_cast<unsigned char>(text[end]))) {
                ++end;
            }
            ++scalars;
        }
        Chunk chunk;
        chunk.ordinal = chunks.size();
        chunk.id = make_chunk_id(doc.id, chunk.ordinal);
        chunk.doc_id = doc.id;
        chunk.topic = doc.topic;
        chunk.text = text.substr(begin, end - begin);
        chunks.push_back(std::move(chunk));
        begin = end;
    }
    return chunks;
}

std::vector<Chunk> chunk_corpus(std::span<const Document> docs, const ChunkingConfig& cfg) {
    if (cfg.chunk_size == 0) {
        throw std::invalid_argument("chunk_size must be at least 1");
    }
    std::vector<std::vector<Chunk>> per_doc(docs.size());
    const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        per_doc[i] = chunk_document(docs[i], cfg);
    }
    std::vector<Chunk> out;
    for (auto& chunks : per_doc) {
        for (auto& c : chunks) {
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::map<std::string, std::size_t> corpus_stats(std::span<const Chunk> chunks) {
    std::map<std::string, std::size_t> counts;
    for (const auto& c : chunks) {
        ++counts[c.topic];
    }
    return counts;
}

void save_chunks(std::span<const Chunk> chunks, const std::filesystem::path& path) {
    AtomicOutputFile file(path, true);
    for (const auto& c : chunks) {
        nlohmann::json obj = {
            {"id", c.id}, {"doc_id", c.doc_id}, {"topic", c.topic},
            {"ordinal", c.ordinal}, {"text", c.text},
        };
        file.stream() << obj.dump() << '\n';
    }
    file.commit();
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) {
    std::vector<Chunk> chunks;
    std::unordered_map<std::string, std::size_t> seen;
    detail::for_each_json_line(path, [&](const nlohmann::json& obj, std::size_t line_no) {
        Chunk c;
        c.id = detail::require_string(obj, "id", path, line_no);
        c.doc_id = detail::require_string(obj, "doc_id", path, line_no);
        c.topic = detail::require_string(obj, "topic", path, line_no);
        c.text = detail::require_string(obj, "text", path, line_no);
        auto ord = obj.find("ordinal");
        if (ord == obj.end() || !ord->is_number_unsigned()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": missing or invalid field \"ordinal\"");
        }
        c.ordinal = ord->get<std::size_t>();
        if (c.topic.empty()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty topic");
        }
        if (!seen.emplace(c.id, line_no).second) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate chunk id \"" + c.id + "\"");
        }
        chunks.push_back(std::move(c));
    });
    return chunks;
}

} // namespace topicret
