#pragma once

// Internal helpers for the JSON-lines formats.

#include "topicret/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace topicret::detail {

inline bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

/// Rewrites bare NaN, Infinity and -Infinity tokens (as written by Python's
/// json module) to null so the caller can report them per record.
inline void null_out_nonfinite_literals(std::string& line) {
    std::string out;
    out.reserve(line.size());
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string) {
            out += c;
            if (c == '\\' && i + 1 < line.size()) {
                out += line[++i];
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            out += c;
            continue;
        }
        std::string_view rest(line.data() + i, line.size() - i);
        std::size_t skip = 0;
        for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
            if (rest.starts_with(token)) {
                skip = token.size();
                break;
            }
        }
        if (skip > 0) {
            out += "null";
            i += skip - 1;
        } else {
            out += c;
        }
    }
    line = std::move(out);
}

/// Calls fn(json_object, line_number) for every non-blank line.
template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn,
                        bool allow_nonfinite_literals = false) {
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        if (allow_nonfinite_literals) {
            null_out_nonfinite_literals(line);
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed JSON: " + e.what());
        }
        if (!obj.is_object()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected a JSON object");
        }
        fn(obj, line_no);
    }
}

inline std::string require_string(const nlohmann::json& obj, const char* field,
                                  const std::filesystem::path& path, std::size_t line_no) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": missing field \"" +
                        field + "\"");
    }
    if (!it->is_string()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": field \"" + field +
                        "\" must be a string");
    }
    return it->get<std::string>();
}

} // namespace topicret::detail
