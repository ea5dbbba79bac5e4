#pragma once

// Record-per-line archive helpers. One JSON object per line, text verbatim.

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustbench/types.hpp"

namespace trustbench::jsonl {

using nlohmann::json;

inline std::vector<json> read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("IO_ERROR", "cannot open " + path.string(), path.string());
    std::vector<json> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("IO_ERROR",
                        path.string() + ":" + std::to_string(lineno) + ": malformed record");
        out.push_back(std::move(j));
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::vector<json>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("IO_ERROR", "cannot write " + path.string(), path.string());
    for (const auto& j : records) out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error("IO_ERROR", "write failed for " + path.string(), path.string());
}

// Streaming variant for stores that must survive partial trailing lines:
// unparseable final line is reported through `on_partial` and skipped.
inline std::vector<json> read_file_tolerant(const std::filesystem::path& path,
                                            const std::function<void(size_t)>& on_partial = {}) {
    std::ifstream in(path);
    std::vector<json> out;
    if (!in) return out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            if (in.peek() == EOF) {
                if (on_partial) on_partial(lineno);
                break;
            }
            throw Error("IO_ERROR",
                        path.string() + ":" + std::to_string(lineno) + ": malformed record");
        }
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace trustbench::jsonl
