#pragma once

// Elicitation harness: runs the (model x variant x sample) matrix against
// chat endpoints under the blind protocol. Parallel with a per-endpoint
// in-flight bound, retry/backoff on transient failures, and exactly-once
// semantics per RunKey via the crash-safe store.

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "trustbench/bundle.hpp"
#include "trustbench/endpoint.hpp"
#include "trustbench/mutation.hpp"
#include "trustbench/prompts.hpp"
#include "trustbench/store.hpp"
#include "trustbench/trace.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

struct BackoffSchedule {
    double initial_s = 30.0;
    double multiplier = 2.0;
    double cap_s = 300.0;

    double delay_for_attempt(int attempt) const {
        double d = initial_s;
        for (int i = 0; i < attempt; ++i) d = std::min(d * multiplier, cap_s);
        return std::min(d, cap_s);
    }

    bool operator==(const BackoffSchedule&) const = default;
};

struct EndpointProfile {
    std::string locator;  // http(s)://... or auditor:...
    std::string model_id;
    int concurrency = 5;
    int retry_limit = 5;
    BackoffSchedule backoff;
    int max_output_tokens = 16384;
    double temperature = 0.0;  // fixed by protocol
    double timeout_s = 300.0;
    std::string api_key_env;

    void check() const {
        if (concurrency < 1)
            throw Error("CONFIG_INVALID", "concurrency must be >= 1", model_id);
        if (temperature != 0.0)
            throw Error("CONFIG_INVALID", "temperature must be exactly 0.0", model_id);
    }

    bool operator==(const EndpointProfile&) const = default;
};

// ---- blind prompt + leak scanning ----------------------------------------

struct RenderedPrompt {
    std::string system_text;
    std::string user_text;
};

// Provenance substrings that must never reach a blind user prompt.
inline std::vector<std::string> provenance_strings(const PerturbationRecord& record) {
    std::vector<std::string> out;
    if (record.variant != Variant::BASE) out.push_back(to_string(record.variant));
    if (record.severity) out.push_back(to_string(*record.severity));
    if (record.strategy) out.push_back(to_string(*record.strategy));
    if (record.fault_category) out.push_back(to_string(*record.fault_category));
    if (!record.ground_truth_summary.empty()) out.push_back(record.ground_truth_summary);
    return out;
}

inline std::vector<std::string> scan_for_leaks(const PerturbationRecord& record,
                                               std::string_view user_text) {
    std::vector<std::string> leaks;
    for (const auto& s : provenance_strings(record))
        if (user_text.find(s) != std::string_view::npos) leaks.push_back(s);
    return leaks;
}

// Renders the fixed system prompt plus the four-section user prompt, then
// self-scans the user text; a provenance leak aborts the cell before it is
// sent anywhere.
inline RenderedPrompt render_blind_prompt(const PerturbationRecord& record) {
    RenderedPrompt p;
    p.system_text = prompts::elicitation_system_prompt();
    p.user_text = prompts::blind_user_prompt(record.bundle);
    auto leaks = scan_for_leaks(record, p.user_text);
    if (!leaks.empty()) {
        std::string joined;
        for (const auto& l : leaks) joined += (joined.empty() ? "" : ", ") + l;
        throw Error("LEAK_ABORT", "provenance would leak into the user prompt", joined);
    }
    return p;
}

// Scans every reconstructible user prompt of a variant matrix; returns the
// (sample_id, variant, leaked substring) triples found.
inline std::vector<std::string> leak_scan_matrix(const VariantMatrix& matrix) {
    std::vector<std::string> violations;
    for (const auto& [variant, records] : matrix) {
        for (const auto& r : records) {
            auto leaks = scan_for_leaks(r, prompts::blind_user_prompt(r.bundle));
            for (const auto& l : leaks)
                violations.push_back(r.sample_id() + "/" + to_string(variant) + ": " + l);
        }
    }
    return violations;
}

// Hash of the fixed prompt texts; recorded in the run summary so a resumed
// run with drifted prompts refuses instead of mixing experiments.
inline std::string prompt_content_hash() {
    std::string all = prompts::elicitation_system_prompt();
    all += '\x1f';
    all += prompts::kJavadocHeader;
    all += prompts::kSignatureHeader;
    all += prompts::kMutHeader;
    all += prompts::kTestPrefixHeader;
    return fnv1a_hex(all);
}

// ---- matrix run ------------------------------------------------------------

struct RunOptions {
    size_t limit_per_variant = 0;  // 0 = all samples
    std::vector<Variant> variants;  // empty = all seven
    std::vector<std::string> models;  // empty = all profiles
    std::function<bool()> cancel;  // polled between cells; true stops cleanly
    std::function<void(double)> sleeper;  // injectable for tests
    LabelBands bands;
};

struct RunSummary {
    size_t attempted = 0;
    size_t succeeded = 0;
    size_t failed = 0;
    size_t skipped = 0;  // already stored or ledgered
    bool cancelled = false;
    std::string prompt_hash;
};

using EndpointFactory =
    std::function<std::shared_ptr<ChatEndpoint>(const EndpointProfile&)>;

inline std::shared_ptr<ChatEndpoint> make_http_endpoint(const EndpointProfile& profile) {
    return std::make_shared<HttpChatEndpoint>(profile.locator, "/v1/chat",
                                              profile.api_key_env, profile.timeout_s);
}

namespace detail {

struct Cell {
    RunKey key;
    const PerturbationRecord* record;
};

inline void run_one_cell(const EndpointProfile& profile, ChatEndpoint& endpoint,
                         const Cell& cell, TraceStore& store, const RunOptions& opts,
                         std::atomic<size_t>& succeeded, std::atomic<size_t>& failed) {
    auto sleep_for = [&](double seconds) {
        if (opts.sleeper)
            opts.sleeper(seconds);
        else
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };

    RenderedPrompt prompt;
    try {
        prompt = render_blind_prompt(*cell.record);
    } catch (const Error& e) {
        store.append_failure({cell.key, e.code(), e.detail()});
        ++failed;
        return;
    }

    ChatRequest request{profile.model_id, prompt.system_text, prompt.user_text,
                        profile.temperature, profile.max_output_tokens};

    std::string last_cause = "RETRY_EXHAUSTED";
    std::string last_detail;
    int transport_attempt = 0;
    for (int attempt = 0; attempt <= profile.retry_limit; ++attempt) {
        std::string raw;
        try {
            raw = endpoint.complete(request).content;
        } catch (const Error& e) {
            if (e.code() == "TRANSIENT") {
                last_cause = e.code();
                last_detail = e.what();
                sleep_for(profile.backoff.delay_for_attempt(transport_attempt++));
                continue;
            }
            store.append_failure({cell.key, e.code(), e.what()});
            ++failed;
            return;
        }
        try {
            std::string candidate = repair_raw_output(raw);
            ReasoningTrace trace =
                validate_trace(candidate, cell.key.sample_id, cell.key.variant,
                               cell.key.model_id, opts.bands);
            store.append(cell.key, trace, *cell.record);
            ++succeeded;
            return;
        } catch (const Error& e) {
            // parse/validation failure: re-request up to the retry limit
            last_cause = e.code();
            last_detail = e.what();
        }
    }
    store.append_failure({cell.key, last_cause, last_detail});
    ++failed;
}

}  // namespace detail

// Runs every cell not yet in the store. Per-endpoint in-flight requests
// never exceed the profile's concurrency bound; appends are serialized by
// the store. Interrupting and re-running continues without reprocessing
// completed cells.
inline RunSummary run_matrix(const std::vector<EndpointProfile>& profiles,
                             const VariantMatrix& datasets, TraceStore& store,
                             const RunOptions& opts = {},
                             const EndpointFactory& factory = make_http_endpoint) {
    RunSummary summary;
    summary.prompt_hash = prompt_content_hash();

    std::atomic<size_t> succeeded{0}, failed{0}, skipped{0}, attempted{0};
    std::atomic<bool> cancelled{false};

    std::vector<std::thread> endpoint_threads;
    for (const auto& profile : profiles) {
        if (!opts.models.empty() &&
            std::find(opts.models.begin(), opts.models.end(), profile.model_id) ==
                opts.models.end())
            continue;
        profile.check();

        // materialize this profile's cell list in variant-major order
        auto cells = std::make_shared<std::vector<detail::Cell>>();
        for (Variant v : all_variants()) {
            if (!opts.variants.empty() &&
                std::find(opts.variants.begin(), opts.variants.end(), v) ==
                    opts.variants.end())
                continue;
            auto it = datasets.find(v);
            if (it == datasets.end()) continue;
            size_t n = it->second.size();
            if (opts.limit_per_variant > 0) n = std::min(n, opts.limit_per_variant);
            for (size_t i = 0; i < n; ++i)
                cells->push_back({RunKey{profile.model_id, v, it->second[i].sample_id()},
                                  &it->second[i]});
        }

        endpoint_threads.emplace_back([&, profile, cells]() {
            std::shared_ptr<ChatEndpoint> endpoint = factory(profile);
            std::atomic<size_t> next{0};
            std::vector<std::thread> workers;
            int pool = std::min<int>(profile.concurrency,
                                     static_cast<int>(std::max<size_t>(cells->size(), 1)));
            for (int w = 0; w < pool; ++w) {
                workers.emplace_back([&]() {
                    for (;;) {
                        if (cancelled.load()) return;
                        if (opts.cancel && opts.cancel()) {
                            cancelled.store(true);
                            return;
                        }
                        size_t i = next.fetch_add(1);
                        if (i >= cells->size()) return;
                        const detail::Cell& cell = (*cells)[i];
                        if (store.contains(cell.key) || store.failed(cell.key)) {
                            ++skipped;
                            continue;
                        }
                        ++attempted;
                        detail::run_one_cell(profile, *endpoint, cell, store, opts,
                                             succeeded, failed);
                    }
                });
            }
            for (auto& w : workers) w.join();
        });
    }
    for (auto& t : endpoint_threads) t.join();

    summary.attempted = attempted.load();
    summary.succeeded = succeeded.load();
    summary.failed = failed.load();
    summary.skipped = skipped.load();
    summary.cancelled = cancelled.load();
    return summary;
}

inline json to_json(const RunSummary& s) {
    return json{{"attempted", s.attempted},   {"succeeded", s.succeeded},
                {"failed", s.failed},         {"skipped", s.skipped},
                {"cancelled", s.cancelled},   {"prompt_hash", s.prompt_hash}};
}

}  // namespace trustbench
