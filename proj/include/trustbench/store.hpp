#pragma once

// Crash-safe trace store: two append-only record-per-line files (traces,
// failures) plus an in-memory key index rebuilt at startup. A torn trailing
// line left by a crash mid-write is truncated on open, so the interrupted
// key reads as incomplete and is re-fetched on resume without duplicates.

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "trustbench/bundle.hpp"
#include "trustbench/jsonl.hpp"
#include "trustbench/trace.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

struct RunKey {
    std::string model_id;
    Variant variant = Variant::BASE;
    std::string sample_id;

    bool operator==(const RunKey&) const = default;

    std::string key_string() const {
        return model_id + '\x1f' + to_string(variant) + '\x1f' + sample_id;
    }
};

struct StoredTrace {
    RunKey key;
    ReasoningTrace trace;
    PerturbationRecord provenance;  // includes the input bundle and O_ref
};

struct FailureEntry {
    RunKey key;
    std::string cause;
    std::string detail;
};

inline json to_json(const StoredTrace& s) {
    return json{{"model_id", s.key.model_id},
                {"variant", to_string(s.key.variant)},
                {"sample_id", s.key.sample_id},
                {"overall_confidence", s.trace.overall_confidence},
                {"trace", trace_to_json(s.trace)},
                {"provenance", to_json(s.provenance)}};
}

inline StoredTrace stored_trace_from_json(const json& j, const LabelBands& bands = {}) {
    StoredTrace s;
    s.key.model_id = j.at("model_id").get<std::string>();
    auto v = variant_from_string(j.at("variant").get<std::string>());
    if (!v) throw Error("BAD_ENUM", "unknown variant in store", j["variant"].get<std::string>());
    s.key.variant = *v;
    s.key.sample_id = j.at("sample_id").get<std::string>();
    s.trace = validate_trace(j.at("trace").dump(), s.key.sample_id, s.key.variant,
                             s.key.model_id, bands);
    s.provenance = perturbation_from_json(j.at("provenance"));
    return s;
}

class TraceStore {
public:
    explicit TraceStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        recover_file(traces_path());
        recover_file(failures_path());
        for (const auto& j : jsonl::read_file_tolerant(traces_path()))
            keys_.insert(record_key(j));
        for (const auto& j : jsonl::read_file_tolerant(failures_path()))
            failed_keys_.insert(record_key(j));
    }

    std::filesystem::path traces_path() const { return dir_ / "traces.jsonl"; }
    std::filesystem::path failures_path() const { return dir_ / "failures.jsonl"; }

    bool contains(const RunKey& key) const {
        std::lock_guard lock(mutex_);
        return keys_.count(key.key_string()) > 0;
    }

    bool failed(const RunKey& key) const {
        std::lock_guard lock(mutex_);
        return failed_keys_.count(key.key_string()) > 0;
    }

    size_t size() const {
        std::lock_guard lock(mutex_);
        return keys_.size();
    }

    size_t failure_count() const {
        std::lock_guard lock(mutex_);
        return failed_keys_.size();
    }

    // Durable append; at most one record per key.
    void append(const RunKey& key, const ReasoningTrace& trace,
                const PerturbationRecord& provenance) {
        std::lock_guard lock(mutex_);
        if (keys_.count(key.key_string()))
            throw Error("DUPLICATE_KEY", "trace already stored", key.key_string());
        StoredTrace s{key, trace, provenance};
        append_line(traces_path(), to_json(s).dump());
        keys_.insert(key.key_string());
    }

    void append_failure(const FailureEntry& entry) {
        std::lock_guard lock(mutex_);
        json j{{"model_id", entry.key.model_id},
               {"variant", to_string(entry.key.variant)},
               {"sample_id", entry.key.sample_id},
               {"cause", entry.cause},
               {"detail", entry.detail}};
        append_line(failures_path(), j.dump());
        failed_keys_.insert(entry.key.key_string());
    }

    std::vector<StoredTrace> load_all(const LabelBands& bands = {}) const {
        std::lock_guard lock(mutex_);
        std::vector<StoredTrace> out;
        for (const auto& j : jsonl::read_file_tolerant(traces_path()))
            out.push_back(stored_trace_from_json(j, bands));
        return out;
    }

    std::vector<FailureEntry> load_failures() const {
        std::lock_guard lock(mutex_);
        std::vector<FailureEntry> out;
        for (const auto& j : jsonl::read_file_tolerant(failures_path())) {
            FailureEntry e;
            e.key.model_id = j.value("model_id", "");
            if (auto v = variant_from_string(j.value("variant", ""))) e.key.variant = *v;
            e.key.sample_id = j.value("sample_id", "");
            e.cause = j.value("cause", "");
            e.detail = j.value("detail", "");
            out.push_back(std::move(e));
        }
        return out;
    }

private:
    static std::string record_key(const json& j) {
        return j.value("model_id", "") + '\x1f' + j.value("variant", "") + '\x1f' +
               j.value("sample_id", "");
    }

    // Truncates a torn trailing line (no final newline or unparseable tail).
    static void recover_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return;
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        in.close();
        if (content.empty()) return;

        size_t keep = content.size();
        if (content.back() != '\n') {
            size_t nl = content.find_last_of('\n');
            keep = nl == std::string::npos ? 0 : nl + 1;
        } else {
            // final line ends in newline but may still be garbage from a
            // partially flushed write followed by the newline of the next
            size_t prev = content.find_last_of('\n', content.size() - 2);
            std::string last = content.substr(prev == std::string::npos ? 0 : prev + 1);
            json j = json::parse(last, nullptr, false);
            if (j.is_discarded() && !detail::trim(last).empty())
                keep = prev == std::string::npos ? 0 : prev + 1;
        }
        if (keep != content.size()) {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out.write(content.data(), static_cast<std::streamsize>(keep));
        }
    }

    static void append_line(const std::filesystem::path& path, const std::string& line) {
        std::ofstream out(path, std::ios::app);
        if (!out) throw Error("IO_ERROR", "cannot append to " + path.string());
        out << line << '\n';
        out.flush();
        if (!out) throw Error("IO_ERROR", "append failed for " + path.string());
    }

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::unordered_set<std::string> keys_;
    std::unordered_set<std::string> failed_keys_;
};

}  // namespace trustbench
