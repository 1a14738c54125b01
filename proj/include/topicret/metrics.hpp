#pragma once

#include "topicret/embedding.hpp"
#include "topicret/kernels.hpp"
#include "topicret/retrieval.hpp"
#include "topicret/topics.hpp"

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace topicret {

/// Points in double precision with one cluster label each. Labels are
/// mapped to dense codes in order of first appearance.
class LabeledPoints {
public:
    /// `coords` is row-major, labels.size() rows of `dim` columns. Throws
    /// DataError unless there are at least 2 points and 2 distinct labels.
    LabeledPoints(std::size_t dim, std::vector<double> coords,
                  const std::vector<std::string>& labels);

    static LabeledPoints from_embeddings(std::span<const ChunkEmbedding> points);

    std::size_t size() const { return codes_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t cluster_count() const { return names_.size(); }
    std::span<const double> coords() const { return coords_; }
    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_).subspan(i * dim_, dim_);
    }
    std::span<const int> codes() const { return codes_; }
    const std::vector<std::string>& cluster_names() const { return names_; }

private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<int> codes_;
    std::vector<std::string> names_;
};

/// Mean silhouette coefficient. Points in singleton clusters score 0.
double silhouette(const LabeledPoints& data,
                  kernels::Distance distance = kernels::Distance::Euclidean);

/// Davies-Bouldin index with euclidean distances. Throws
/// DegenerateClustersError when two centroids coincide.
double davies_bouldin(const LabeledPoints& data);

/// Calinski-Harabasz index. Returns +infinity when the within-cluster
/// scatter is zero but the between-cluster scatter is not; throws
/// DegenerateClustersError when both are zero and DataError when n <= k.
double calinski_harabasz(const LabeledPoints& data);

struct ClusterEvalReport {
    TransformMethod method = TransformMethod::Original;
    double silhouette = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
    bool calinski_harabasz_infinite = false;
    std::size_t n = 0;
    std::size_t k = 0;

    /// {"method", "silhouette", "davies_bouldin", "calinski_harabasz", "n", "k"}.
    /// An infinite CHI is written as null with "calinski_harabasz_infinite": true.
    std::string to_json() const;
};

ClusterEvalReport evaluate_clustering(const LabeledPoints& data, TransformMethod method);

/// |top-k hits ∩ relevant| / |relevant|.
double recall_at_k(const SearchResult& results, const std::set<std::string>& relevant,
                   std::size_t k);

struct QueryOutcome {
    SearchResult results;
    std::set<std::string> relevant;
};

/// Mean over queries of 1 / rank of the first relevant hit (0 when none of
/// the returned hits is relevant).
double mean_reciprocal_rank(std::span<const QueryOutcome> outcomes);

} // namespace topicret
