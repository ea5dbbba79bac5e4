#pragma once

// Run configuration: one file drives every stage. The config round-trips
// through serialization unchanged, and its hash is recorded into the run
// summary so resumed runs refuse on drift.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustbench/harness.hpp"
#include "trustbench/metrics.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

struct EmbedderConfig {
    std::string kind = "hash";  // hash | http | none
    size_t dim = 256;           // hash backend
    std::string url;            // http backend
    std::string model = "BAAI/bge-base-en-v1.5";

    bool operator==(const EmbedderConfig&) const = default;
};

struct RunConfig {
    std::string corpus_path;   // directory of sources or a .jsonl archive
    std::string output_root = "out";
    std::vector<EndpointProfile> endpoints;
    std::string mutation_endpoint = "auditor:oracle";
    int mutation_retry_limit = 3;
    EmbedderConfig embedder;
    std::vector<std::string> models;    // empty = all endpoints
    std::vector<Variant> variants;      // empty = all seven
    size_t sample_limit = 0;            // 0 = no limit
    uint64_t seed = 0;
    LabelBands bands;
    CombineMode combine_mode = CombineMode::CONCAT;

    void check() const {
        for (const auto& e : endpoints) e.check();
    }
};

inline json to_json(const BackoffSchedule& b) {
    return json{{"initial_s", b.initial_s}, {"multiplier", b.multiplier}, {"cap_s", b.cap_s}};
}

inline json to_json(const EndpointProfile& p) {
    return json{{"locator", p.locator},
                {"model_id", p.model_id},
                {"concurrency", p.concurrency},
                {"retry_limit", p.retry_limit},
                {"backoff", to_json(p.backoff)},
                {"max_output_tokens", p.max_output_tokens},
                {"temperature", p.temperature},
                {"timeout_s", p.timeout_s},
                {"api_key_env", p.api_key_env}};
}

inline EndpointProfile endpoint_profile_from_json(const json& j) {
    EndpointProfile p;
    p.locator = j.at("locator").get<std::string>();
    p.model_id = j.at("model_id").get<std::string>();
    p.concurrency = j.value("concurrency", p.concurrency);
    p.retry_limit = j.value("retry_limit", p.retry_limit);
    if (j.contains("backoff")) {
        p.backoff.initial_s = j["backoff"].value("initial_s", p.backoff.initial_s);
        p.backoff.multiplier = j["backoff"].value("multiplier", p.backoff.multiplier);
        p.backoff.cap_s = j["backoff"].value("cap_s", p.backoff.cap_s);
    }
    p.max_output_tokens = j.value("max_output_tokens", p.max_output_tokens);
    p.temperature = j.value("temperature", p.temperature);
    p.timeout_s = j.value("timeout_s", p.timeout_s);
    p.api_key_env = j.value("api_key_env", p.api_key_env);
    return p;
}

inline json to_json(const RunConfig& c) {
    json endpoints = json::array();
    for (const auto& e : c.endpoints) endpoints.push_back(to_json(e));
    json variants = json::array();
    for (Variant v : c.variants) variants.push_back(to_string(v));
    return json{{"corpus_path", c.corpus_path},
                {"output_root", c.output_root},
                {"endpoints", endpoints},
                {"mutation_endpoint", c.mutation_endpoint},
                {"mutation_retry_limit", c.mutation_retry_limit},
                {"embedder",
                 {{"kind", c.embedder.kind},
                  {"dim", c.embedder.dim},
                  {"url", c.embedder.url},
                  {"model", c.embedder.model}}},
                {"models", c.models},
                {"variants", variants},
                {"sample_limit", c.sample_limit},
                {"seed", c.seed},
                {"label_bands", {{"low_upper", c.bands.low_upper},
                                 {"medium_upper", c.bands.medium_upper}}},
                {"combine_mode", c.combine_mode == CombineMode::CONCAT ? "concat" : "mean"}};
}

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.corpus_path = j.value("corpus_path", "");
    c.output_root = j.value("output_root", c.output_root);
    for (const auto& e : j.value("endpoints", json::array()))
        c.endpoints.push_back(endpoint_profile_from_json(e));
    c.mutation_endpoint = j.value("mutation_endpoint", c.mutation_endpoint);
    c.mutation_retry_limit = j.value("mutation_retry_limit", c.mutation_retry_limit);
    if (j.contains("embedder")) {
        const json& e = j["embedder"];
        c.embedder.kind = e.value("kind", c.embedder.kind);
        c.embedder.dim = e.value("dim", c.embedder.dim);
        c.embedder.url = e.value("url", c.embedder.url);
        c.embedder.model = e.value("model", c.embedder.model);
    }
    for (const auto& m : j.value("models", json::array()))
        c.models.push_back(m.get<std::string>());
    for (const auto& v : j.value("variants", json::array())) {
        auto parsed = variant_from_string(v.get<std::string>());
        if (!parsed) throw Error("CONFIG_INVALID", "unknown variant " + v.get<std::string>());
        c.variants.push_back(*parsed);
    }
    c.sample_limit = j.value("sample_limit", c.sample_limit);
    c.seed = j.value("seed", c.seed);
    if (j.contains("label_bands")) {
        c.bands.low_upper = j["label_bands"].value("low_upper", c.bands.low_upper);
        c.bands.medium_upper = j["label_bands"].value("medium_upper", c.bands.medium_upper);
    }
    std::string mode = j.value("combine_mode", "concat");
    if (mode != "concat" && mode != "mean")
        throw Error("CONFIG_INVALID", "unknown combine_mode " + mode);
    c.combine_mode = mode == "concat" ? CombineMode::CONCAT : CombineMode::MEAN;
    c.check();
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("IO_ERROR", "cannot open config " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("CONFIG_INVALID", "config is not valid JSON",
                                      path.string());
    return config_from_json(j);
}

inline std::string config_hash(const RunConfig& c) { return fnv1a_hex(to_json(c).dump()); }

inline std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& cfg) {
    if (cfg.kind == "hash") return std::make_unique<HashedEmbedder>(cfg.dim);
    if (cfg.kind == "http") return std::make_unique<HttpEmbedder>(cfg.url, cfg.model);
    if (cfg.kind == "none") return nullptr;
    throw Error("CONFIG_INVALID", "unknown embedder kind " + cfg.kind);
}

}  // namespace trustbench
