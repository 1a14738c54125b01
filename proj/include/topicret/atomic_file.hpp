#pragma once

#include <filesystem>
#include <fstream>
#include <string_view>

namespace topicret {

/// Output stream backed by a temporary file next to the target. The target
/// only appears once commit() renames the temporary into place; an
/// uncommitted file is removed on destruction.
class AtomicOutputFile {
public:
    explicit AtomicOutputFile(std::filesystem::path target, bool binary = false);
    ~AtomicOutputFile();

    AtomicOutputFile(const AtomicOutputFile&) = delete;
    AtomicOutputFile& operator=(const AtomicOutputFile&) = delete;

    std::ostream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_file_atomic(const std::filesystem::path& target, std::string_view contents);

} // namespace topicret
