#include "topicret/metrics.hpp"

#include "topicret/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string_view>
#include <unordered_map>

namespace topicret {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return std::sqrt(acc);
}

struct Centroids {
    std::vector<double> coords;        // k x dim
    std::vector<std::size_t> counts;   // k
    std::vector<double> overall;       // dim
};

// Sums in point order.
Centroids centroids(const LabeledPoints& data) {
    const std::size_t k = data.cluster_count();
    const std::size_t dim = data.dim();
    Centroids c;
    c.coords.assign(k * dim, 0.0);
    c.counts.assign(k, 0);
    c.overall.assign(dim, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto code = static_cast<std::size_t>(data.codes()[i]);
        const auto p = data.point(i);
        for (std::size_t j = 0; j < dim; ++j) {
            c.coords[code * dim + j] += p[j];
            c.overall[j] += p[j];
        }
        ++c.counts[code];
    }
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t j = 0; j < dim; ++j) {
            c.coords[a * dim + j] /= static_cast<double>(c.counts[a]);
        }
    }
    for (auto& x : c.overall) {
        x /= static_cast<double>(data.size());
    }
    return c;
}

} // namespace

LabeledPoints::LabeledPoints(std::size_t dim, std::vector<double> coords,
                             const std::vector<std::string>& labels)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) {
        throw DataError("points must have at least one dimension");
    }
    if (coords_.size() != labels.size() * dim_) {
        throw DataError("coordinate count does not match labels x dim");
    }
    if (labels.size() < 2) {
        throw DataError("cluster indices need at least 2 points");
    }
    for (double x : coords_) {
        if (!std::isfinite(x)) {
            throw DataError("non-finite coordinate");
        }
    }
    std::unordered_map<std::string, int> code_of;
    codes_.reserve(labels.size());
    for (const auto& label : labels) {
        auto [it, inserted] = code_of.emplace(label, static_cast<int>(names_.size()));
        if (inserted) {
            names_.push_back(label);
        }
        codes_.push_back(it->second);
    }
    if (names_.size() < 2) {
        throw DataError("cluster indices need at least 2 distinct labels");
    }
}

LabeledPoints LabeledPoints::from_embeddings(std::span<const ChunkEmbedding> points) {
    if (points.empty()) {
        throw DataError("cluster indices need at least 2 points");
    }
    const std::size_t dim = points.front().embedding.dim();
    std::vector<double> coords;
    coords.reserve(points.size() * dim);
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (const auto& p : points) {
        if (p.embedding.dim() != dim) {
            throw DataError("dimension mismatch for \"" + p.chunk_id + "\"");
        }
        coords.insert(coords.end(), p.embedding.values().begin(), p.embedding.values().end());
        labels.push_back(p.topic);
    }
    return LabeledPoints(dim, std::move(coords), labels);
}

double silhouette(const LabeledPoints& data, kernels::Distance distance) {
    const std::size_t n = data.size();
    const std::size_t k = data.cluster_count();
    std::vector<double> sums(n * k);
    kernels::parallel::cluster_distance_sums(data.coords(), data.dim(), data.codes(), k,
                                             distance, sums);
    std::vector<std::size_t> counts(k, 0);
    for (int code : data.codes()) {
        ++counts[static_cast<std::size_t>(code)];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(data.codes()[i]);
        if (counts[own] < 2) {
            continue;
        }
        const double a = sums[i * k + own] / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) {
                b = std::min(b, sums[i * k + c] / static_cast<double>(counts[c]));
            }
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) {
            total += (b - a) / denom;
        }
    }
    return std::clamp(total / static_cast<double>(n), -1.0, 1.0);
}

double davies_bouldin(const LabeledPoints& data) {
    const std::size_t k = data.cluster_count();
    const std::size_t dim = data.dim();
    const auto c = centroids(data);
    std::vector<double> scatter(k, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto code = static_cast<std::size_t>(data.codes()[i]);
        scatter[code] += euclidean(data.point(i),
                                   std::span<const double>(c.coords).subspan(code * dim, dim));
    }
    for (std::size_t a = 0; a < k; ++a) {
        scatter[a] /= static_cast<double>(c.counts[a]);
    }
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) {
                continue;
            }
            const double sep =
                euclidean(std::span<const double>(c.coords).subspan(a * dim, dim),
                          std::span<const double>(c.coords).subspan(b * dim, dim));
            if (sep == 0.0) {
                throw DegenerateClustersError("clusters \"" + data.cluster_names()[a] +
                                              "\" and \"" + data.cluster_names()[b] +
                                              "\" have coincident centroids");
            }
            worst = std::max(worst, (scatter[a] + scatter[b]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

double calinski_harabasz(const LabeledPoints& data) {
    const std::size_t n = data.size();
    const std::size_t k = data.cluster_count();
    if (n <= k) {
        throw DataError("Calinski-Harabasz needs more points than clusters");
    }
    const std::size_t dim = data.dim();
    const auto c = centroids(data);
    double between = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = c.coords[a * dim + j] - c.overall[j];
            sq += d * d;
        }
        between += static_cast<double>(c.counts[a]) * sq;
    }
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto code = static_cast<std::size_t>(data.codes()[i]);
        const auto p = data.point(i);
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = p[j] - c.coords[code * dim + j];
            within += d * d;
        }
    }
    if (within == 0.0) {
        if (between == 0.0) {
            throw DegenerateClustersError("Calinski-Harabasz is undefined: all points coincide");
        }
        return std::numeric_limits<double>::infinity();
    }
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

std::string ClusterEvalReport::to_json() const {
    nlohmann::ordered_json obj;
    obj["method"] = std::string(to_string(method));
    obj["silhouette"] = silhouette;
    obj["davies_bouldin"] = davies_bouldin;
    if (calinski_harabasz_infinite) {
        obj["calinski_harabasz"] = nullptr;
        obj["calinski_harabasz_infinite"] = true;
    } else {
        obj["calinski_harabasz"] = calinski_harabasz;
    }
    obj["n"] = n;
    obj["k"] = k;
    return obj.dump(2);
}

ClusterEvalReport evaluate_clustering(const LabeledPoints& data, TransformMethod method) {
    ClusterEvalReport report;
    report.method = method;
    report.n = data.size();
    report.k = data.cluster_count();
    report.silhouette = silhouette(data);
    report.davies_bouldin = davies_bouldin(data);
    report.calinski_harabasz = calinski_harabasz(data);
    report.calinski_harabasz_infinite = std::isinf(report.calinski_harabasz);
    return report;
}

double recall_at_k(const SearchResult& results, const std::set<std::string>& relevant,
                   std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    if (relevant.empty()) {
        throw std::invalid_argument("relevant set must not be empty");
    }
    const std::size_t depth = std::min(k, results.hits.size());
    // Distinct ids, so a repeated hit cannot push recall past 1.
    std::set<std::string_view> found;
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.contains(results.hits[i].chunk_id)) {
            found.insert(results.hits[i].chunk_id);
        }
    }
    return static_cast<double>(found.size()) / static_cast<double>(relevant.size());
}

double mean_reciprocal_rank(std::span<const QueryOutcome> outcomes) {
    if (outcomes.empty()) {
        throw std::invalid_argument("mean reciprocal rank of no queries");
    }
    double total = 0.0;
    for (const auto& o : outcomes) {
        for (std::size_t i = 0; i < o.results.hits.size(); ++i) {
            if (o.relevant.contains(o.results.hits[i].chunk_id)) {
                total += 1.0 / static_cast<double>(i + 1);
                break;
            }
        }
    }
    return total / static_cast<double>(outcomes.size());
}

} // namespace topicret
