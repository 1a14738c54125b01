#include "topicret/pca.hpp"

#include "topicret/atomic_file.hpp"
#include "topicret/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

namespace topicret {

namespace {

constexpr int kMaxIterations = 2000;
constexpr double kConvergence = 1e-13;
constexpr double kRankTolerance = 1e-12;

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void scale(std::vector<double>& v, double s) {
    for (auto& x : v) {
        x *= s;
    }
}

// Returns the norm before normalization; zero vectors are left alone.
double normalize(std::vector<double>& v) {
    const double n = std::sqrt(vdot(v, v));
    if (n > 0.0) {
        scale(v, 1.0 / n);
    }
    return n;
}

void remove_component(std::vector<double>& v, const std::vector<double>& unit) {
    const double c = vdot(v, unit);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= c * unit[i];
    }
}

// out = C v with C = X^T X / (n - 1) for the centered data X.
std::vector<double> apply_covariance(const std::vector<double>& centered, std::size_t n,
                                     std::size_t dim, const std::vector<double>& v) {
    std::vector<double> out(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = centered.data() + i * dim;
        double proj = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            proj += row[j] * v[j];
        }
        for (std::size_t j = 0; j < dim; ++j) {
            out[j] += proj * row[j];
        }
    }
    scale(out, 1.0 / static_cast<double>(n - 1));
    return out;
}

// Any unit vector orthogonal to `u`, chosen deterministically.
std::vector<double> orthogonal_to(const std::vector<double>& u) {
    for (std::size_t axis = 0; axis < u.size(); ++axis) {
        std::vector<double> e(u.size(), 0.0);
        e[axis] = 1.0;
        remove_component(e, u);
        if (normalize(e) > 1e-6) {
            return e;
        }
    }
    return std::vector<double>(u.size(), 0.0);
}

void orient(std::vector<double>& axis) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (std::abs(axis[i]) > std::abs(axis[best])) {
            best = i;
        }
    }
    if (axis[best] < 0.0) {
        scale(axis, -1.0);
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

} // namespace

Projection2D project_2d(std::span<const double> points, std::size_t dim) {
    if (dim == 0 || points.size() % dim != 0) {
        throw DataError("point buffer is not a whole number of rows");
    }
    const std::size_t n = points.size() / dim;
    if (n < 3) {
        throw DataError("2D projection needs at least 3 points, got " + std::to_string(n));
    }
    Projection2D proj;
    proj.mean.assign(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            proj.mean[j] += points[i * dim + j];
        }
    }
    scale(proj.mean, 1.0 / static_cast<double>(n));
    std::vector<double> centered(points.begin(), points.end());
    double total_variance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            centered[i * dim + j] -= proj.mean[j];
            total_variance += centered[i * dim + j] * centered[i * dim + j];
        }
    }
    total_variance /= static_cast<double>(n - 1);
    if (!(total_variance > 0.0)) {
        throw DataError("2D projection of zero-variance data");
    }

    // Block power iteration on two vectors with Gram-Schmidt, seeded
    // deterministically.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v1(dim), v2(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        v1[j] = unif(rng);
        v2[j] = unif(rng);
    }
    normalize(v1);
    remove_component(v2, v1);
    if (normalize(v2) == 0.0) {
        v2 = orthogonal_to(v1);
    }
    bool second_degenerate = false;
    for (int it = 0; it < kMaxIterations; ++it) {
        auto w1 = apply_covariance(centered, n, dim, v1);
        auto w2 = apply_covariance(centered, n, dim, v2);
        normalize(w1);
        remove_component(w2, w1);
        const double r2 = normalize(w2);
        second_degenerate = r2 <= kRankTolerance * total_variance;
        if (second_degenerate) {
            w2 = orthogonal_to(w1);
        }
        const double delta = std::max(1.0 - std::abs(vdot(w1, v1)), 1.0 - std::abs(vdot(w2, v2)));
        v1 = std::move(w1);
        v2 = std::move(w2);
        if (delta < kConvergence) {
            break;
        }
    }

    // Rayleigh-Ritz on the 2D subspace so the axes come out in variance order.
    const auto c1 = apply_covariance(centered, n, dim, v1);
    const auto c2 = apply_covariance(centered, n, dim, v2);
    const double h11 = vdot(v1, c1);
    const double h12 = vdot(v1, c2);
    const double h22 = vdot(v2, c2);
    const double mid = 0.5 * (h11 + h22);
    const double rad = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
    const double l1 = mid + rad;
    const double l2 = mid - rad;
    // Eigenvector of [[h11, h12], [h12, h22]] for l1 is (cos t, sin t).
    const double theta = 0.5 * std::atan2(2.0 * h12, h11 - h22);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    std::vector<double> a1(dim), a2(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        a1[j] = ct * v1[j] + st * v2[j];
        a2[j] = -st * v1[j] + ct * v2[j];
    }
    normalize(a1);
    normalize(a2);
    orient(a1);
    orient(a2);

    proj.variance = {l1, std::max(l2, 0.0)};
    proj.rank_deficient = second_degenerate || proj.variance[1] <= kRankTolerance * total_variance;
    proj.coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = centered.data() + i * dim;
        double x = 0.0;
        double y = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            x += row[j] * a1[j];
            y += row[j] * a2[j];
        }
        proj.coords[i] = {x, y};
    }
    proj.axes = {std::move(a1), std::move(a2)};
    return proj;
}

Projection2D project_2d(std::span<const ChunkEmbedding> points) {
    if (points.empty()) {
        throw DataError("2D projection needs at least 3 points, got 0");
    }
    const std::size_t dim = points.front().embedding.dim();
    std::vector<double> coords;
    coords.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (p.embedding.dim() != dim) {
            throw DataError("dimension mismatch for \"" + p.chunk_id + "\"");
        }
        coords.insert(coords.end(), p.embedding.values().begin(), p.embedding.values().end());
    }
    return project_2d(coords, dim);
}

void write_projection_csv(std::span<const ChunkEmbedding> points, const Projection2D& projection,
                          const std::filesystem::path& path) {
    if (points.size() != projection.coords.size()) {
        throw DataError("projection has " + std::to_string(projection.coords.size()) +
                        " rows for " + std::to_string(points.size()) + " points");
    }
    AtomicOutputFile file(path, true);
    auto& out = file.stream();
    out << "chunk_id,topic,x,y\n" << std::setprecision(17);
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << csv_field(points[i].chunk_id) << ',' << csv_field(points[i].topic) << ','
            << projection.coords[i][0] << ',' << projection.coords[i][1] << '\n';
    }
    file.commit();
}

} // namespace topicret
