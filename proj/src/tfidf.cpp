#include "topicret/tfidf.hpp"

#include "topicret/atomic_file.hpp"
#include "topicret/error.hpp"
#include "topicret/utf8.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cwctype>
#include <fstream>
#include <map>
#include <set>

#include <locale.h>
#include <wctype.h>

namespace topicret {

namespace {

// Character classification comes from the C.UTF-8 locale, queried through
// the *_l variants so the process-global locale is never touched.
class UnicodeCType {
public:
    UnicodeCType() : locale_(::newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0))) {}
    ~UnicodeCType() {
        if (locale_ != static_cast<locale_t>(0)) {
            ::freelocale(locale_);
        }
    }
    UnicodeCType(const UnicodeCType&) = delete;
    UnicodeCType& operator=(const UnicodeCType&) = delete;

    bool is_alnum(char32_t cp) const {
        if (locale_ == static_cast<locale_t>(0)) {
            // No unicode tables available: ASCII rules, everything else kept.
            return cp >= 0x80 || std::iswalnum(static_cast<wint_t>(cp));
        }
        return ::iswalnum_l(static_cast<wint_t>(cp), locale_) != 0;
    }

    char32_t to_lower(char32_t cp) const {
        if (locale_ == static_cast<locale_t>(0)) {
            return cp < 0x80 ? static_cast<char32_t>(std::towlower(static_cast<wint_t>(cp))) : cp;
        }
        return static_cast<char32_t>(::towlower_l(static_cast<wint_t>(cp), locale_));
    }

private:
    locale_t locale_;
};

const UnicodeCType& ctype() {
    static const UnicodeCType instance;
    return instance;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    const auto& ct = ctype();
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = utf8::decode_next(text, pos);
        if (ct.is_alnum(cp)) {
            utf8::append(current, ct.to_lower(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

TfIdfModel::TfIdfModel(std::vector<std::string> terms, std::vector<double> idf,
                       std::size_t n_documents)
    : terms_(std::move(terms)), idf_(std::move(idf)), n_documents_(n_documents) {
    if (terms_.size() != idf_.size()) {
        throw DataError("tf-idf model has " + std::to_string(terms_.size()) + " terms but " +
                        std::to_string(idf_.size()) + " idf values");
    }
    if (!std::is_sorted(terms_.begin(), terms_.end())) {
        throw DataError("tf-idf vocabulary is not sorted");
    }
    lookup_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!(idf_[i] > 0.0) || !std::isfinite(idf_[i])) {
            throw DataError("tf-idf model has a non-positive idf for \"" + terms_[i] + "\"");
        }
        if (!lookup_.emplace(terms_[i], i).second) {
            throw DataError("tf-idf vocabulary repeats \"" + terms_[i] + "\"");
        }
    }
}

std::ptrdiff_t TfIdfModel::index_of(const std::string& term) const {
    auto it = lookup_.find(term);
    return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

void TfIdfModel::save(const std::filesystem::path& path) const {
    nlohmann::json obj = {
        {"n_documents", n_documents_},
        {"terms", terms_},
        {"idf", idf_},
    };
    write_file_atomic(path, obj.dump() + "\n");
}

TfIdfModel TfIdfModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    try {
        const auto obj = nlohmann::json::parse(in);
        return TfIdfModel(obj.at("terms").get<std::vector<std::string>>(),
                          obj.at("idf").get<std::vector<double>>(),
                          obj.at("n_documents").get<std::size_t>());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": invalid tf-idf model: " + e.what());
    }
}

TfIdfModel fit_tfidf(std::span<const std::string> texts) {
    if (texts.empty()) {
        throw DataError("cannot fit tf-idf on an empty corpus");
    }
    std::map<std::string, std::size_t> doc_freq;
    for (const auto& text : texts) {
        auto tokens = tokenize(text);
        std::set<std::string> unique(std::make_move_iterator(tokens.begin()),
                                     std::make_move_iterator(tokens.end()));
        for (const auto& t : unique) {
            ++doc_freq[t];
        }
    }
    if (doc_freq.empty()) {
        throw DataError("cannot fit tf-idf: the corpus contains no tokens");
    }
    const auto n = static_cast<double>(texts.size());
    std::vector<std::string> terms;
    std::vector<double> idf;
    terms.reserve(doc_freq.size());
    idf.reserve(doc_freq.size());
    for (const auto& [term, df] : doc_freq) {
        terms.push_back(term);
        idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
    }
    return TfIdfModel(std::move(terms), std::move(idf), texts.size());
}

Embedding embed_tfidf(const TfIdfModel& model, std::string_view text) {
    std::vector<double> raw(model.dim(), 0.0);
    for (const auto& token : tokenize(text)) {
        const auto idx = model.index_of(token);
        if (idx >= 0) {
            raw[static_cast<std::size_t>(idx)] += 1.0;
        }
    }
    double sq = 0.0;
    const auto idf = model.idf();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] *= idf[i];
        sq += raw[i] * raw[i];
    }
    std::vector<float> out(raw.size(), 0.0f);
    if (sq > 0.0) {
        const double norm = std::sqrt(sq);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            out[i] = static_cast<float>(raw[i] / norm);
        }
    }
    return Embedding(std::move(out));
}

} // namespace topicret
