#pragma once

#include "topicret/embedding.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topicret {

/// Lowercases (unicode-aware) and splits on every character that is not a
/// letter or digit. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Vocabulary plus smooth inverse document frequencies,
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Immutable once fitted.
class TfIdfModel {
public:
    TfIdfModel(std::vector<std::string> terms, std::vector<double> idf, std::size_t n_documents);

    std::size_t dim() const { return terms_.size(); }
    std::size_t n_documents() const { return n_documents_; }
    std::span<const std::string> terms() const { return terms_; }
    std::span<const double> idf() const { return idf_; }

    /// Index of `term` in the sorted vocabulary, or -1.
    std::ptrdiff_t index_of(const std::string& term) const;

    void save(const std::filesystem::path& path) const;
    static TfIdfModel load(const std::filesystem::path& path);

private:
    std::vector<std::string> terms_;
    std::vector<double> idf_;
    std::size_t n_documents_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

/// Fits the model on a collection of texts. Throws DataError when there are
/// no texts or no tokens at all.
TfIdfModel fit_tfidf(std::span<const std::string> texts);

/// Raw term counts times idf, L2-normalized. Out-of-vocabulary tokens are
/// ignored; a text with no known tokens maps to the zero vector.
Embedding embed_tfidf(const TfIdfModel& model, std::string_view text);

} // namespace topicret
