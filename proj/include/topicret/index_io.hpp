#pragma once

#include "topicret/error.hpp"
#include "topicret/retrieval.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace topicret {

/*
 * Index file layout, all integers little-endian:
 *
 *   header   "TPIX" | u16 version | u8 method tag | u32 dim | u64 count
 *   payload  u32 topic_count | u32 topic_dim
 *            topic_count x { u32 name_len | name (UTF-8) | topic_dim x f32 }
 *            count x { u32 id_len | id (UTF-8) | u32 topic ref | dim x f32 }
 *   trailer  u32 CRC-32 of the payload bytes
 */
inline constexpr char kIndexMagic[4] = {'T', 'P', 'I', 'X'};
inline constexpr std::uint16_t kIndexFormatVersion = 1;

class IndexFormatError : public DataError {
public:
    enum class Kind { BadMagic, VersionMismatch, Truncated, ChecksumMismatch, Invalid };

    IndexFormatError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Writes atomically: the target is replaced only once the file is complete.
void save_index(const VectorIndex& index, const std::filesystem::path& path);

/// Reads and validates the whole file before constructing the index, so a
/// failure never yields a partial index.
VectorIndex load_index(const std::filesystem::path& path);

} // namespace topicret
