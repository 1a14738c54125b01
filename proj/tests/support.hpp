#pragma once

// Shared helpers for the unit tests: seeded random data and scratch dirs.

#include "topicret/embedding.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace topicret::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    std::mt19937_64& engine() { return engine_; }

    std::vector<double> gaussian(std::size_t dim) {
        std::vector<double> v(dim);
        for (auto& x : v) {
            x = normal();
        }
        return v;
    }

    std::vector<double> unit(std::size_t dim) {
        auto v = gaussian(dim);
        double n = 0.0;
        for (double x : v) {
            n += x * x;
        }
        n = std::sqrt(n);
        for (auto& x : v) {
            x /= n;
        }
        return v;
    }

    Embedding embedding(std::size_t dim) {
        auto v = gaussian(dim);
        return Embedding(std::vector<float>(v.begin(), v.end()));
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline Embedding to_embedding(const std::vector<double>& v) {
    return Embedding(std::vector<float>(v.begin(), v.end()));
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("topicret-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& contents) {
    std::ofstream out(p, std::ios::binary);
    out << contents;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace topicret::testing
