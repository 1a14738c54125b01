#include "topicret/embeddings_file.hpp"

#include "jsonl.hpp"
#include "topicret/atomic_file.hpp"

#include <cmath>

namespace topicret {

void EmbeddingTable::add(std::string id, Embedding embedding) {
    if (embedding.empty()) {
        throw DataError("embedding \"" + id + "\" has no components");
    }
    if (!ids_.empty() && embedding.dim() != dim_) {
        throw DataError("dimension mismatch for \"" + id + "\": expected " +
                        std::to_string(dim_) + ", got " + std::to_string(embedding.dim()));
    }
    if (!lookup_.emplace(id, ids_.size()).second) {
        throw DataError("duplicate embedding id \"" + id + "\"");
    }
    dim_ = embedding.dim();
    ids_.push_back(std::move(id));
    embeddings_.push_back(std::move(embedding));
}

const Embedding& EmbeddingTable::at(const std::string& id) const {
    auto it = lookup_.find(id);
    if (it == lookup_.end()) {
        throw DataError("no embedding for \"" + id + "\"");
    }
    return embeddings_[it->second];
}

EmbeddingTable load_embeddings_file(const std::filesystem::path& path) {
    EmbeddingTable table;
    std::optional<std::size_t> header_dim;
    bool first = true;
    detail::for_each_json_line(path, [&](const nlohmann::json& obj, std::size_t line_no) {
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (first && !obj.contains("id") && obj.contains("method")) {
            first = false;
            try {
                table.method = obj.at("method").get<std::string>();
                header_dim = obj.at("dim").get<std::size_t>();
            } catch (const nlohmann::json::exception& e) {
                throw DataError(where + ": invalid header: " + e.what());
            }
            return;
        }
        first = false;
        auto id = detail::require_string(obj, "id", path, line_no);
        auto vec = obj.find("vector");
        if (vec == obj.end() || !vec->is_array()) {
            throw DataError(where + ": missing or invalid field \"vector\" for \"" + id + "\"");
        }
        std::vector<float> values;
        values.reserve(vec->size());
        for (const auto& x : *vec) {
            // Bare NaN/Infinity literals arrive here as null.
            if (!x.is_number()) {
                throw DataError(where + ": non-finite or non-numeric component in \"" + id + "\"");
            }
            const double v = x.get<double>();
            const auto f = static_cast<float>(v);
            if (!std::isfinite(v) || !std::isfinite(f)) {
                throw DataError(where + ": non-finite component in \"" + id + "\"");
            }
            values.push_back(f);
        }
        if (header_dim && values.size() != *header_dim) {
            throw DataError(where + ": dimension mismatch for \"" + id + "\": header says " +
                            std::to_string(*header_dim) + ", got " +
                            std::to_string(values.size()));
        }
        try {
            table.add(id, Embedding(std::move(values)));
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
    }, /*allow_nonfinite_literals=*/true);
    return table;
}

void save_embeddings_file(const EmbeddingTable& table, const std::filesystem::path& path,
                          const std::optional<std::string>& method) {
    AtomicOutputFile file(path, true);
    auto& out = file.stream();
    if (method) {
        out << nlohmann::json{{"method", *method}, {"dim", table.dim()}}.dump() << '\n';
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto values = table.embeddings()[i].values();
        nlohmann::json obj = {
            {"id", table.ids()[i]},
            {"vector", std::vector<float>(values.begin(), values.end())},
        };
        out << obj.dump() << '\n';
    }
    file.commit();
}

} // namespace topicret
