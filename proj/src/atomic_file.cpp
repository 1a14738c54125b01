#include "topicret/atomic_file.hpp"

#include "topicret/error.hpp"

#include <atomic>
#include <system_error>

#include <unistd.h>

namespace topicret {

namespace {

std::filesystem::path temp_path_for(const std::filesystem::path& target) {
    static std::atomic<unsigned> counter{0};
    auto name = target.filename().string();
    name += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    return target.parent_path() / name;
}

} // namespace

AtomicOutputFile::AtomicOutputFile(std::filesystem::path target, bool binary)
    : target_(std::move(target)), temp_(temp_path_for(target_)) {
    auto mode = std::ios::out | std::ios::trunc;
    if (binary) {
        mode |= std::ios::binary;
    }
    out_.open(temp_, mode);
    if (!out_) {
        throw Error("cannot open " + temp_.string() + " for writing");
    }
}

AtomicOutputFile::~AtomicOutputFile() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(temp_, ec);
    }
}

void AtomicOutputFile::commit() {
    out_.flush();
    if (!out_) {
        throw Error("write failed for " + temp_.string());
    }
    out_.close();
    std::error_code ec;
    std::filesystem::rename(temp_, target_, ec);
    if (ec) {
        std::filesystem::remove(temp_, ec);
        throw Error("cannot move output into place at " + target_.string());
    }
    committed_ = true;
}

void write_file_atomic(const std::filesystem::path& target, std::string_view contents) {
    AtomicOutputFile file(target, true);
    file.stream().write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.commit();
}

} // namespace topicret
