#include "topicret/index_io.hpp"

#include "topicret/atomic_file.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <vector>

namespace topicret {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    } else {
        return value;
    }
}

class Writer {
public:
    template <typename T>
    void put(T value) {
        value = to_little(value);
        const auto* p = reinterpret_cast<const char*>(&value);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }

    void put_string(const std::string& s) {
        if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
            throw DataError("string too long for index format");
        }
        put(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    void put_floats(std::span<const float> values) {
        for (float v : values) {
            put(v);
        }
    }

    std::vector<char>& bytes() { return buf_; }

private:
    std::vector<char> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const char> data) : data_(data) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T value;
        std::memcpy(&value, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return to_little(value);
    }

    std::string get_string() {
        const auto len = get<std::uint32_t>();
        need(len);
        std::string s(data_.data() + pos_, len);
        pos_ += len;
        return s;
    }

    void get_floats(std::size_t count, std::vector<float>& out) {
        if (count > remaining() / sizeof(float)) {
            need(count * sizeof(float));
        }
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(get<float>());
        }
    }

    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (n > remaining()) {
            throw IndexFormatError(IndexFormatError::Kind::Truncated,
                                   "index file is truncated");
        }
    }

    std::span<const char> data_;
    std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const char> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large payloads in pieces.
    constexpr std::size_t kPiece = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kPiece) {
        const auto len = std::min(kPiece, bytes.size() - off);
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off),
                      static_cast<uInt>(len));
    }
    return static_cast<std::uint32_t>(crc);
}

constexpr std::size_t kHeaderSize = 4 + 2 + 1 + 4 + 8;

} // namespace

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
    Writer header;
    for (char c : kIndexMagic) {
        header.put(c);
    }
    header.put(kIndexFormatVersion);
    header.put(static_cast<std::uint8_t>(index.method()));
    header.put(static_cast<std::uint32_t>(index.dim()));
    header.put(static_cast<std::uint64_t>(index.size()));

    Writer payload;
    payload.put(static_cast<std::uint32_t>(index.topic_count()));
    payload.put(static_cast<std::uint32_t>(index.topic_dim()));
    for (std::size_t t = 0; t < index.topic_count(); ++t) {
        payload.put_string(index.topic_name(t));
        payload.put_floats(index.topic_vector(t));
    }
    for (std::size_t r = 0; r < index.size(); ++r) {
        payload.put_string(index.id(r));
        payload.put(index.topic_ref(r));
        payload.put_floats(index.vector(r));
    }
    const std::uint32_t crc = crc_of(payload.bytes());

    AtomicOutputFile file(path, true);
    auto& out = file.stream();
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
    out.write(payload.bytes().data(), static_cast<std::streamsize>(payload.bytes().size()));
    Writer trailer;
    trailer.put(crc);
    out.write(trailer.bytes().data(), static_cast<std::streamsize>(trailer.bytes().size()));
    file.commit();
}

VectorIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    const std::vector<char> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
    using Kind = IndexFormatError::Kind;
    const std::size_t magic_seen = std::min(data.size(), sizeof(kIndexMagic));
    if (std::memcmp(data.data(), kIndexMagic, magic_seen) != 0 || data.empty()) {
        throw IndexFormatError(Kind::BadMagic, path.string() + ": not an index file (bad magic)");
    }
    if (magic_seen < sizeof(kIndexMagic)) {
        throw IndexFormatError(Kind::Truncated, path.string() + ": index file is truncated");
    }
    Reader header(std::span<const char>(data).first(std::min(data.size(), kHeaderSize)));
    header.get<std::uint32_t>();
    const auto version = header.get<std::uint16_t>();
    if (version != kIndexFormatVersion) {
        throw IndexFormatError(Kind::VersionMismatch,
                               path.string() + ": unsupported index format version " +
                                   std::to_string(version));
    }
    const auto method_tag = header.get<std::uint8_t>();
    const auto dim = header.get<std::uint32_t>();
    const auto count = header.get<std::uint64_t>();
    if (method_tag > static_cast<std::uint8_t>(TransformMethod::Append)) {
        throw IndexFormatError(Kind::Invalid,
                               path.string() + ": unknown method tag " + std::to_string(method_tag));
    }
    if (data.size() < kHeaderSize + sizeof(std::uint32_t)) {
        throw IndexFormatError(Kind::Truncated, path.string() + ": index file is truncated");
    }

    const auto payload =
        std::span<const char>(data).subspan(kHeaderSize, data.size() - kHeaderSize - 4);
    Reader trailer(std::span<const char>(data).last(4));
    const auto stored_crc = trailer.get<std::uint32_t>();

    // Structure is parsed before the checksum is compared so that a file cut
    // short reports truncation rather than a checksum failure.
    Reader r(payload);
    std::vector<std::string> topic_names;
    std::vector<float> topic_vectors;
    std::vector<std::string> ids;
    std::vector<std::uint32_t> refs;
    std::vector<float> vectors;
    try {
        const auto topic_count = r.get<std::uint32_t>();
        const auto topic_dim = r.get<std::uint32_t>();
        for (std::uint32_t t = 0; t < topic_count; ++t) {
            topic_names.push_back(r.get_string());
            r.get_floats(topic_dim, topic_vectors);
        }
        // Each record needs at least its length prefix, ref and vector.
        const std::uint64_t min_record = 8 + 4ull * dim;
        if (count > r.remaining() / min_record) {
            throw IndexFormatError(Kind::Truncated, "index file is truncated");
        }
        ids.reserve(count);
        refs.reserve(count);
        vectors.reserve(count * dim);
        for (std::uint64_t i = 0; i < count; ++i) {
            ids.push_back(r.get_string());
            refs.push_back(r.get<std::uint32_t>());
            r.get_floats(dim, vectors);
        }
        if (r.remaining() != 0) {
            throw IndexFormatError(Kind::Invalid, "trailing bytes after the last record");
        }
        if (crc_of(payload) != stored_crc) {
            throw IndexFormatError(Kind::ChecksumMismatch, "checksum mismatch");
        }
        return VectorIndex(static_cast<TransformMethod>(method_tag), dim, std::move(ids),
                           std::move(refs), std::move(vectors), std::move(topic_names),
                           topic_dim, std::move(topic_vectors));
    } catch (const IndexFormatError& e) {
        throw IndexFormatError(e.kind(), path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw IndexFormatError(Kind::Invalid, path.string() + ": " + e.what());
    }
}

} // namespace topicret
