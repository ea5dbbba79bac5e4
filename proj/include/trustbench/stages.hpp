#pragma once

// Pipeline stages behind the CLI subcommands. Each stage reads its
// prerequisites from the output root, refuses with the missing paths when
// they are absent, writes its archives, and returns a JSON summary that is
// also persisted as <stage>_summary.json.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "trustbench/auditor.hpp"
#include "trustbench/config.hpp"
#include "trustbench/curation.hpp"
#include "trustbench/extract.hpp"
#include "trustbench/harness.hpp"
#include "trustbench/metrics.hpp"
#include "trustbench/mutation.hpp"
#include "trustbench/store.hpp"

namespace trustbench {

namespace detail {

inline void require_paths(const std::vector<std::filesystem::path>& paths) {
    std::string missing;
    for (const auto& p : paths)
        if (!std::filesystem::exists(p)) missing += (missing.empty() ? "" : ", ") + p.string();
    if (!missing.empty())
        throw Error("MISSING_PREREQUISITE", "required stage outputs are absent", missing);
}

inline void write_summary(const std::filesystem::path& out_root, const std::string& stage,
                          const json& summary) {
    std::filesystem::create_directories(out_root);
    std::ofstream out(out_root / (stage + "_summary.json"));
    out << summary.dump(2) << '\n';
}

inline double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace detail

inline std::filesystem::path variant_archive_path(const std::filesystem::path& out_root,
                                                  Variant v) {
    return out_root / "variants" / (to_string(v) + ".jsonl");
}

// ---- curate ---------------------------------------------------------------

inline json stage_curate(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::path out_root = cfg.output_root;
    if (cfg.corpus_path.empty() || !std::filesystem::exists(cfg.corpus_path))
        throw Error("MISSING_PREREQUISITE", "corpus path does not exist", cfg.corpus_path);

    std::vector<ArtifactBundle> candidates = load_candidates(cfg.corpus_path);
    CurationResult result = curate(candidates);

    std::vector<json> accepted, verdicts;
    for (const auto& b : result.accepted) accepted.push_back(to_json(b));
    for (const auto& v : result.verdicts) verdicts.push_back(to_json(v));
    jsonl::write_file(out_root / "base.jsonl", accepted);
    jsonl::write_file(out_root / "curation_verdicts.jsonl", verdicts);

    json summary{{"stage", "curate"},
                 {"candidates", candidates.size()},
                 {"accepted", result.accepted.size()},
                 {"rejected", candidates.size() - result.accepted.size()},
                 {"duration_ms", detail::ms_since(start)}};
    detail::write_summary(out_root, "curate", summary);
    return summary;
}

// ---- perturb ----------------------------------------------------------------

// Requests one mutation family record via the configured mutation endpoint,
// with bounded retries absorbing validator rejections.
inline PerturbationRecord request_mutation(ChatEndpoint& endpoint, const ArtifactBundle& base,
                                           Variant family, Severity severity,
                                           std::optional<Strategy> strategy, int retry_limit) {
    prompts::MutationPrompt prompt =
        prompts::build_mutation_request(base, family, severity, strategy);
    std::string last_error = "no attempt";
    for (int attempt = 0; attempt <= retry_limit; ++attempt) {
        std::string raw =
            endpoint.complete({"mutation", prompt.system_text, prompt.user_text, 0.0, 16384})
                .content;
        try {
            std::string candidate = repair_raw_output(raw);
            json reply = json::parse(candidate);
            return validate_mutation(base, reply, family, severity, strategy);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    throw Error("MUTATION_REJECTED",
                "mutation not accepted after " + std::to_string(retry_limit + 1) +
                    " attempts: " + last_error,
                base.sample_id + "/" + to_string(family));
}

inline json stage_perturb(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::path out_root = cfg.output_root;
    detail::require_paths({out_root / "base.jsonl"});

    std::vector<ArtifactBundle> accepted;
    for (const auto& j : jsonl::read_file(out_root / "base.jsonl"))
        accepted.push_back(bundle_from_json(j));

    std::vector<std::string> ids;
    for (const auto& b : accepted) ids.push_back(b.sample_id);

    EndpointProfile mutation_profile;
    mutation_profile.locator = cfg.mutation_endpoint;
    mutation_profile.model_id = "mutation";
    std::shared_ptr<ChatEndpoint> endpoint =
        make_endpoint_factory(nullptr)(mutation_profile);

    std::vector<PerturbationRecord> mutation_records;
    for (Variant family : mutation_variants()) {
        auto plan = plan_assignments(ids, family, cfg.seed);
        for (const auto& b : accepted) {
            const MutationAssignment& a = plan.at(b.sample_id);
            mutation_records.push_back(request_mutation(
                *endpoint, b, family, a.severity, a.strategy, cfg.mutation_retry_limit));
        }
    }

    VariantMatrix matrix = assemble_variant_matrix(accepted, mutation_records);
    for (const auto& [variant, records] : matrix) {
        std::vector<json> rows;
        for (const auto& r : records) rows.push_back(to_json(r));
        jsonl::write_file(variant_archive_path(out_root, variant), rows);
    }

    std::vector<json> review;
    for (const auto& r : mutation_records) review.push_back(review_queue_entry(r));
    jsonl::write_file(out_root / "review_queue.jsonl", review);

    json summary{{"stage", "perturb"},
                 {"samples", accepted.size()},
                 {"records", matrix_record_count(matrix)},
                 {"review_queue", review.size()},
                 {"duration_ms", detail::ms_since(start)}};
    detail::write_summary(out_root, "perturb", summary);
    return summary;
}

// ---- elicit -----------------------------------------------------------------

inline VariantMatrix load_variant_matrix(const std::filesystem::path& out_root) {
    VariantMatrix matrix;
    std::vector<std::filesystem::path> missing_check;
    for (Variant v : all_variants()) missing_check.push_back(variant_archive_path(out_root, v));
    detail::require_paths(missing_check);
    for (Variant v : all_variants())
        for (const auto& j : jsonl::read_file(variant_archive_path(out_root, v)))
            matrix[v].push_back(perturbation_from_json(j));
    return matrix;
}

inline json stage_elicit(const RunConfig& cfg, bool resume = false,
                         const RunOptions& extra = {}) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::path out_root = cfg.output_root;
    VariantMatrix matrix = load_variant_matrix(out_root);

    std::filesystem::path summary_path = out_root / "run_summary.json";
    std::string cfg_hash = config_hash(cfg);
    std::string prompt_hash = prompt_content_hash();
    if (std::filesystem::exists(summary_path)) {
        std::ifstream in(summary_path);
        json prior = json::parse(in, nullptr, false);
        if (!resume)
            throw Error("ALREADY_RUN",
                        "a prior elicit run exists; pass resume to continue it",
                        summary_path.string());
        if (!prior.is_discarded()) {
            if (prior.value("prompt_hash", "") != prompt_hash)
                throw Error("CONFIG_MISMATCH", "prompt text drifted since the prior run",
                            summary_path.string());
            if (prior.value("config_hash", "") != cfg_hash)
                throw Error("CONFIG_MISMATCH", "config drifted since the prior run",
                            summary_path.string());
        }
    }

    TraceStore store(out_root);

    // persist the hashes before any cell runs, so a crashed run still
    // carries the drift guard into its resume
    {
        json running{{"stage", "elicit"},
                     {"status", "running"},
                     {"prompt_hash", prompt_hash},
                     {"config_hash", cfg_hash}};
        std::ofstream out(summary_path);
        out << running.dump(2) << '\n';
    }

    RunOptions opts = extra;
    opts.bands = cfg.bands;
    if (opts.limit_per_variant == 0) opts.limit_per_variant = cfg.sample_limit;
    if (opts.variants.empty()) opts.variants = cfg.variants;
    if (opts.models.empty()) opts.models = cfg.models;

    RunSummary run = run_matrix(cfg.endpoints, matrix, store, opts,
                                make_endpoint_factory(&matrix));

    json summary{{"stage", "elicit"},
                 {"status", run.cancelled ? "cancelled" : "complete"},
                 {"attempted", run.attempted},
                 {"succeeded", run.succeeded},
                 {"failed", run.failed},
                 {"skipped", run.skipped},
                 {"cancelled", run.cancelled},
                 {"stored_total", store.size()},
                 {"failure_ledger", store.failure_count()},
                 {"prompt_hash", prompt_hash},
                 {"config_hash", cfg_hash},
                 {"duration_ms", detail::ms_since(start)}};
    detail::write_summary(out_root, "elicit", summary);
    {
        std::ofstream out(summary_path);
        out << summary.dump(2) << '\n';
    }
    return summary;
}

// ---- evaluate ------------------------------------------------------------------

namespace detail {

inline std::string severity_str(const std::optional<Severity>& s) {
    return s ? to_string(*s) : "";
}
inline std::string strategy_str(const std::optional<Strategy>& s) {
    return s ? to_string(*s) : "";
}

struct MetricsBuilder {
    std::vector<MetricRow> rows;

    void add(MetricRow row) { rows.push_back(std::move(row)); }

    void add_stat(const std::string& model, const std::string& variant,
                  const std::string& severity, const std::string& strategy,
                  const std::string& signal, const std::string& dimension,
                  const std::string& statistic, double value, size_t n,
                  std::optional<double> stddev = std::nullopt) {
        rows.push_back({model, variant, severity, strategy, signal, dimension, statistic,
                        value, n, stddev});
    }
};

}  // namespace detail

// Computes the full metric suite from the trace store joined with the
// perturbation archives. Groups that cannot be computed (missing embedder,
// empty partitions) are emitted as *_unavailable rows, never silently
// zeroed.
inline std::vector<MetricRow> compute_metrics(const std::vector<EvaluationRecord>& records,
                                              Embedder* embedder,
                                              CombineMode combine_mode = CombineMode::CONCAT) {
    detail::MetricsBuilder out;

    std::map<std::string, std::map<Variant, std::vector<EvaluationRecord>>> by_model_variant;
    for (const auto& r : records) by_model_variant[r.key.model_id][r.key.variant].push_back(r);

    for (const auto& [model, variants] : by_model_variant) {
        // mean scores per dimension and variant
        for (const auto& [variant, group] : variants) {
            for (Dimension d : {Dimension::JAVADOC, Dimension::SIGNATURE, Dimension::MUT,
                                Dimension::TEST_PREFIX, Dimension::OVERALL}) {
                std::vector<double> scores;
                for (const auto& r : group) scores.push_back(r.scores.at(d));
                GroupStat gs = group_stat(scores);
                out.add_stat(model, to_string(variant), "", "", "", to_string(d),
                             "mean_score", gs.mean, gs.n, gs.stddev);
            }
        }

        auto base_it = variants.find(Variant::BASE);
        bool has_base = base_it != variants.end() && !base_it->second.empty();

        // delta from base per perturbed variant
        if (has_base) {
            for (const auto& [variant, group] : variants) {
                if (variant == Variant::BASE || group.empty()) continue;
                DeltaReport delta = delta_from_base(base_it->second, group);
                for (const auto& [dim, value] : delta.delta)
                    out.add_stat(model, to_string(variant), "", "", "", to_string(dim),
                                 "delta_from_base", value, delta.paired);
            }
        }

        // severity breakdown per mutation family
        for (Variant family : mutation_variants()) {
            auto it = variants.find(family);
            if (it == variants.end() || it->second.empty()) continue;
            try {
                SeverityBreakdown b = severity_breakdown(it->second);
                for (const auto& [tier, stat] : b.per_tier)
                    out.add_stat(model, to_string(family), to_string(tier), "", "", "OVERALL",
                                 "mean_overall", stat.mean, stat.n, stat.stddev);
                out.add_stat(model, to_string(family), "", "", "", "", "monotonic",
                             b.monotonic ? 1.0 : 0.0, it->second.size());
                out.add_stat(model, to_string(family), "", "", "", "",
                             "heavy_to_subtle_gap", b.heavy_to_subtle_gap,
                             it->second.size());
            } catch (const Error&) {
                out.add_stat(model, to_string(family), "", "", "", "",
                             "severity_breakdown_unavailable", 1.0, it->second.size());
            }
        }

        // detection rates, false-positive floors, net gains
        std::map<Signal, double> floor;
        for (Signal sig : all_signals()) {
            if (has_base) {
                floor[sig] = detection_rate(base_it->second, sig);
                out.add_stat(model, "BASE", "", "", to_string(sig), "",
                             "false_positive_floor", floor[sig], base_it->second.size());
            }
            for (const auto& [variant, group] : variants) {
                if (variant == Variant::BASE || group.empty()) continue;
                double rate = detection_rate(group, sig);
                out.add_stat(model, to_string(variant), "", "", to_string(sig), "",
                             "detection_rate", rate, group.size());
                if (has_base)
                    out.add_stat(model, to_string(variant), "", "", to_string(sig), "",
                                 "net_gain_pp", net_gain(rate, floor[sig]), group.size());

                // severity- and strategy-stratified rates for mutation families
                std::map<std::string, std::vector<EvaluationRecord>> by_sev, by_strat;
                for (const auto& r : group) {
                    if (r.severity) by_sev[to_string(*r.severity)].push_back(r);
                    if (r.strategy) by_strat[to_string(*r.strategy)].push_back(r);
                }
                for (const auto& [sev, g] : by_sev)
                    out.add_stat(model, to_string(variant), sev, "", to_string(sig), "",
                                 "detection_rate", detection_rate(g, sig), g.size());
                for (const auto& [strat, g] : by_strat)
                    out.add_stat(model, to_string(variant), "", strat, to_string(sig), "",
                                 "detection_rate", detection_rate(g, sig), g.size());
            }
        }

        // description fidelity and calibration per mutation family
        for (Variant family : mutation_variants()) {
            auto it = variants.find(family);
            if (it == variants.end() || it->second.empty()) continue;
            const auto& group = it->second;

            // description fidelity; skipped and marked unavailable when the
            // embedder is absent or unreachable, never silently zeroed
            bool similarity_ok = embedder != nullptr;
            if (similarity_ok) {
                try {
                    std::map<std::string, std::vector<double>> per_signal;
                    std::vector<double> detected, missed;  // combined cosine by IR outcome
                    std::map<std::string, std::map<std::string, std::vector<double>>> by_sev;
                    for (const auto& r : group) {
                        SimilarityScores s =
                            description_similarity(r, *embedder, combine_mode);
                        per_signal["PCA"].push_back(s.pca);
                        per_signal["IC"].push_back(s.ic);
                        per_signal["IR"].push_back(s.ir);
                        per_signal["COMBINED"].push_back(s.combined);
                        (r.signals.ir_fires ? detected : missed).push_back(s.combined);
                        if (r.severity) {
                            auto& bucket = by_sev[to_string(*r.severity)];
                            bucket["PCA"].push_back(s.pca);
                            bucket["IC"].push_back(s.ic);
                            bucket["IR"].push_back(s.ir);
                            bucket["COMBINED"].push_back(s.combined);
                        }
                    }
                    for (const auto& [sig, values] : per_signal) {
                        GroupStat gs = group_stat(values);
                        out.add_stat(model, to_string(family), "", "", sig, "",
                                     "mean_cosine", gs.mean, gs.n, gs.stddev);
                    }
                    for (const auto& [sev, buckets] : by_sev)
                        for (const auto& [sig, values] : buckets) {
                            GroupStat gs = group_stat(values);
                            out.add_stat(model, to_string(family), sev, "", sig, "",
                                         "mean_cosine", gs.mean, gs.n, gs.stddev);
                        }
                    if (!detected.empty())
                        out.add_stat(model, to_string(family), "", "", "COMBINED", "",
                                     "mean_cosine_detected", group_stat(detected).mean,
                                     detected.size());
                    if (!missed.empty())
                        out.add_stat(model, to_string(family), "", "", "COMBINED", "",
                                     "mean_cosine_missed", group_stat(missed).mean,
                                     missed.size());
                    if (!detected.empty() && !missed.empty())
                        out.add_stat(model, to_string(family), "", "", "COMBINED", "",
                                     "cosine_gap",
                                     group_stat(detected).mean - group_stat(missed).mean,
                                     group.size());
                } catch (const Error& e) {
                    if (e.code() != "EMBEDDER_UNAVAILABLE") throw;
                    similarity_ok = false;
                }
            }
            if (!similarity_ok)
                out.add_stat(model, to_string(family), "", "", "", "",
                             "similarity_unavailable", 1.0, group.size());

            CalibrationGap cal = calibration_gap(group, Signal::IR);
            out.add_stat(model, to_string(family), "", "", "IR", "", "n_detected",
                         static_cast<double>(cal.n_detected), group.size());
            out.add_stat(model, to_string(family), "", "", "IR", "", "n_missed",
                         static_cast<double>(cal.n_missed), group.size());
            if (cal.defined) {
                out.add_stat(model, to_string(family), "", "", "IR", "",
                             "mean_confidence_detected", cal.mean_confidence_detected,
                             cal.n_detected);
                out.add_stat(model, to_string(family), "", "", "IR", "",
                             "mean_confidence_missed", cal.mean_confidence_missed,
                             cal.n_missed);
                out.add_stat(model, to_string(family), "", "", "IR", "", "calibration_gap",
                             cal.gap, group.size());
            } else {
                out.add_stat(model, to_string(family), "", "", "IR", "",
                             "calibration_gap_undefined", 1.0, group.size());
            }

            // rank concordance (records with a single designated faulty artifact)
            std::vector<double> taus;
            std::map<std::string, std::vector<double>> taus_by_sev, taus_by_strat;
            size_t excluded = 0;
            for (const auto& r : group) {
                PerturbationRecord probe;
                probe.variant = r.key.variant;
                probe.strategy = r.strategy;
                auto faulty = designated_faulty_artifact(probe);
                if (!faulty) {
                    ++excluded;
                    continue;
                }
                double tau = rank_concordance(r.prioritization, *faulty);
                taus.push_back(tau);
                if (r.severity) taus_by_sev[to_string(*r.severity)].push_back(tau);
                if (r.strategy) taus_by_strat[to_string(*r.strategy)].push_back(tau);
            }
            if (!taus.empty()) {
                GroupStat gs = group_stat(taus);
                out.add_stat(model, to_string(family), "", "", "", "", "mean_tau_b", gs.mean,
                             gs.n, gs.stddev);
            }
            for (const auto& [sev, values] : taus_by_sev) {
                GroupStat gs = group_stat(values);
                out.add_stat(model, to_string(family), sev, "", "", "", "mean_tau_b",
                             gs.mean, gs.n, gs.stddev);
            }
            for (const auto& [strat, values] : taus_by_strat) {
                GroupStat gs = group_stat(values);
                out.add_stat(model, to_string(family), "", strat, "", "", "mean_tau_b",
                             gs.mean, gs.n, gs.stddev);
            }
            if (excluded > 0)
                out.add_stat(model, to_string(family), "", "", "", "",
                             "tau_b_excluded_records", static_cast<double>(excluded),
                             group.size());
        }
    }
    return out.rows;
}

inline json stage_evaluate(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::path out_root = cfg.output_root;
    detail::require_paths({out_root / "traces.jsonl"});

    TraceStore store(out_root);
    std::vector<EvaluationRecord> records;
    for (const auto& s : store.load_all(cfg.bands))
        records.push_back(make_evaluation_record(s));

    std::unique_ptr<Embedder> embedder = make_embedder(cfg.embedder);
    std::vector<MetricRow> rows = compute_metrics(records, embedder.get(), cfg.combine_mode);

    std::vector<json> out_rows;
    for (const auto& r : rows) out_rows.push_back(r.to_json());
    jsonl::write_file(out_root / "metrics.jsonl", out_rows);

    json summary{{"stage", "evaluate"},
                 {"traces", records.size()},
                 {"metric_rows", rows.size()},
                 {"embedder", cfg.embedder.kind},
                 {"duration_ms", detail::ms_since(start)}};
    detail::write_summary(out_root, "evaluate", summary);
    return summary;
}

// ---- report -----------------------------------------------------------------------

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << "model,variant,severity,strategy,signal,dimension,statistic,value,n,stddev\n";
    for (const auto& r : rows) {
        out << csv_escape(r.model) << ',' << r.variant << ',' << r.severity << ','
            << r.strategy << ',' << r.signal << ',' << r.dimension << ','
            << csv_escape(r.statistic) << ',' << r.value << ',' << r.n << ',';
        if (r.stddev) out << *r.stddev;
        out << '\n';
    }
}

}  // namespace detail

// Emits panel CSVs (one per figure-style grouping) plus a combined table
// and a human-readable digest.
inline json stage_report(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::path out_root = cfg.output_root;
    detail::require_paths({out_root / "metrics.jsonl"});

    std::vector<MetricRow> rows;
    for (const auto& j : jsonl::read_file(out_root / "metrics.jsonl"))
        rows.push_back(metric_row_from_json(j));

    std::filesystem::path report_dir = out_root / "report";
    auto select = [&](const std::vector<std::string>& stats) {
        std::vector<MetricRow> out;
        for (const auto& r : rows)
            for (const auto& s : stats)
                if (r.statistic == s) out.push_back(r);
        return out;
    };
    detail::write_csv(report_dir / "mean_scores.csv", select({"mean_score"}));
    detail::write_csv(report_dir / "deltas.csv", select({"delta_from_base"}));
    detail::write_csv(report_dir / "severity.csv",
                      select({"mean_overall", "monotonic", "heavy_to_subtle_gap"}));
    detail::write_csv(report_dir / "detection.csv",
                      select({"detection_rate", "false_positive_floor", "net_gain_pp"}));
    detail::write_csv(report_dir / "similarity.csv",
                      select({"mean_cosine", "mean_cosine_detected", "mean_cosine_missed",
                              "cosine_gap", "similarity_unavailable"}));
    detail::write_csv(report_dir / "calibration.csv",
                      select({"mean_confidence_detected", "mean_confidence_missed",
                              "calibration_gap", "calibration_gap_undefined", "n_detected",
                              "n_missed"}));
    detail::write_csv(report_dir / "concordance.csv",
                      select({"mean_tau_b", "tau_b_excluded_records"}));
    detail::write_csv(report_dir / "all_metrics.csv", rows);

    // human-readable digest
    std::ofstream digest(report_dir / "report.txt");
    digest << "metric rows: " << rows.size() << "\n";
    for (const auto& r : rows) {
        if (r.statistic != "detection_rate" || !r.severity.empty() || !r.strategy.empty() ||
            r.signal != "IR")
            continue;
        digest << r.model << " " << r.variant << " IR detection rate: " << r.value
               << " (n=" << r.n << ")\n";
    }

    json summary{{"stage", "report"},
                 {"rows", rows.size()},
                 {"report_dir", report_dir.string()},
                 {"duration_ms", detail::ms_since(start)}};
    detail::write_summary(out_root, "report", summary);
    return summary;
}

}  // namespace trustbench
