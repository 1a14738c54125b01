#pragma once

// Independent reference computations used only by tests. None of these call
// into the library's kernels, metrics or search code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace topicret::oracle {

struct ScoredId {
    std::string id;
    std::string topic;
    double score;
};

/// Cosine of every (unit) row against the query, in double, fully sorted by
/// (score desc, id asc).
inline std::vector<ScoredId> exhaustive_ranking(const std::vector<std::string>& ids,
                                                const std::vector<std::string>& topics,
                                                const std::vector<std::vector<float>>& rows,
                                                const std::vector<float>& query) {
    double qn = 0.0;
    for (float x : query) {
        qn += static_cast<double>(x) * static_cast<double>(x);
    }
    qn = std::sqrt(qn);
    std::vector<ScoredId> all;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            s += static_cast<double>(rows[r][j]) * static_cast<double>(query[j]);
        }
        all.push_back({ids[r], topics[r], std::clamp(s / qn, -1.0, 1.0)});
    }
    std::sort(all.begin(), all.end(), [](const ScoredId& a, const ScoredId& b) {
        return a.score != b.score ? a.score > b.score : a.id < b.id;
    });
    return all;
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        s += (a[j] - b[j]) * (a[j] - b[j]);
    }
    return std::sqrt(s);
}

/// Textbook silhouette: for each point, mean distance to every other cluster
/// computed directly from the definition.
inline double naive_silhouette(const std::vector<std::vector<double>>& pts,
                               const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        members[labels[i]].push_back(i);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& own = members[labels[i]];
        if (own.size() == 1) {
            continue;
        }
        double a = 0.0;
        for (auto j : own) {
            if (j != i) {
                a += distance(pts[i], pts[j]);
            }
        }
        a /= static_cast<double>(own.size() - 1);
        double b = INFINITY;
        for (const auto& [label, idx] : members) {
            if (label == labels[i]) {
                continue;
            }
            double m = 0.0;
            for (auto j : idx) {
                m += distance(pts[i], pts[j]);
            }
            b = std::min(b, m / static_cast<double>(idx.size()));
        }
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(pts.size());
}

/// Calinski-Harabasz from the traces of explicit d x d between- and
/// within-cluster scatter matrices.
inline double scatter_matrix_chi(const std::vector<std::vector<double>>& pts,
                                 const std::vector<int>& labels) {
    const std::size_t d = pts.front().size();
    const std::size_t n = pts.size();
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        members[labels[i]].push_back(i);
    }
    std::vector<double> mean(d, 0.0);
    for (const auto& p : pts) {
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += p[j] / static_cast<double>(n);
        }
    }
    std::vector<std::vector<double>> B(d, std::vector<double>(d, 0.0));
    std::vector<std::vector<double>> W(d, std::vector<double>(d, 0.0));
    for (const auto& [label, idx] : members) {
        std::vector<double> c(d, 0.0);
        for (auto i : idx) {
            for (std::size_t j = 0; j < d; ++j) {
                c[j] += pts[i][j] / static_cast<double>(idx.size());
            }
        }
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) {
                B[r][s] += static_cast<double>(idx.size()) * (c[r] - mean[r]) * (c[s] - mean[s]);
            }
        }
        for (auto i : idx) {
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t s = 0; s < d; ++s) {
                    W[r][s] += (pts[i][r] - c[r]) * (pts[i][s] - c[s]);
                }
            }
        }
    }
    double trB = 0.0;
    double trW = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
        trB += B[r][r];
        trW += W[r][r];
    }
    const double k = static_cast<double>(members.size());
    return (trB / (k - 1.0)) / (trW / (static_cast<double>(n) - k));
}

struct EigenPair {
    double value;
    std::vector<double> vector;
};

/// Top eigenpairs of the sample covariance by plain power iteration with
/// deflation on the explicit d x d matrix.
inline std::vector<EigenPair> covariance_power_iteration(const std::vector<std::vector<double>>& pts,
                                                         std::size_t how_many) {
    const std::size_t d = pts.front().size();
    const std::size_t n = pts.size();
    std::vector<double> mean(d, 0.0);
    for (const auto& p : pts) {
        for (std::size_t j = 0; j < d; ++j) {
            mean[j] += p[j] / static_cast<double>(n);
        }
    }
    std::vector<std::vector<double>> C(d, std::vector<double>(d, 0.0));
    for (const auto& p : pts) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) {
                C[r][s] += (p[r] - mean[r]) * (p[s] - mean[s]) / static_cast<double>(n - 1);
            }
        }
    }
    std::vector<EigenPair> out;
    for (std::size_t e = 0; e < how_many; ++e) {
        std::vector<double> v(d);
        for (std::size_t j = 0; j < d; ++j) {
            v[j] = 1.0 + 0.1 * static_cast<double>(j);
        }
        double lambda = 0.0;
        for (int it = 0; it < 20000; ++it) {
            std::vector<double> w(d, 0.0);
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t s = 0; s < d; ++s) {
                    w[r] += C[r][s] * v[s];
                }
            }
            double norm = 0.0;
            for (double x : w) {
                norm += x * x;
            }
            norm = std::sqrt(norm);
            if (norm == 0.0) {
                break;
            }
            double change = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                w[j] /= norm;
                change = std::max(change, std::abs(std::abs(w[j]) - std::abs(v[j])));
            }
            v = w;
            lambda = norm;
            if (change < 1e-14) {
                break;
            }
        }
        // Deflate.
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) {
                C[r][s] -= lambda * v[r] * v[s];
            }
        }
        out.push_back({lambda, v});
    }
    return out;
}

} // namespace topicret::oracle
