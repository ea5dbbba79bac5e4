#pragma once

// Metric suite over the trace store: score means and deltas from base,
// severity breakdowns with the monotonicity predicate, five-signal
// detection rates with false-positive floors and net gains, description
// fidelity via embedding cosine, confidence calibration gaps, and source
// prioritization rank concordance (Kendall tau-b with tie correction).

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "trustbench/bundle.hpp"
#include "trustbench/signals.hpp"
#include "trustbench/store.hpp"
#include "trustbench/trace.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

// ---- basic statistics -----------------------------------------------------

struct GroupStat {
    double mean = 0.0;
    double stddev = 0.0;  // sample stddev; 0 when n < 2
    size_t n = 0;
};

inline GroupStat group_stat(std::span<const double> values) {
    GroupStat g;
    g.n = values.size();
    if (g.n == 0) return g;
    double sum = 0.0;
    for (double v : values) sum += v;
    g.mean = sum / static_cast<double>(g.n);
    if (g.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - g.mean) * (v - g.mean);
        g.stddev = std::sqrt(ss / static_cast<double>(g.n - 1));
    }
    return g;
}

// ---- Kendall tau-b ---------------------------------------------------------

// Pair-counting tau-b with tie corrections on both vectors:
//   tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2))
// where n0 = n(n-1)/2 and n1, n2 are tied-pair counts in x and y.
inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error("BAD_INPUT", "tau_b requires equal-length vectors");
    size_t n = x.size();
    if (n < 2) throw Error("DEGENERATE", "tau_b needs at least two observations");

    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j];
            double dy = y[i] - y[j];
            if (dx == 0.0) ++ties_x;
            if (dy == 0.0) ++ties_y;
            if (dx == 0.0 || dy == 0.0) continue;
            if (dx * dy > 0.0)
                ++concordant;
            else
                ++discordant;
        }
    }
    double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                             (n0 - static_cast<double>(ties_y)));
    if (denom == 0.0)
        throw Error("DEGENERATE", "tau_b undefined: a vector is constant");
    return (static_cast<double>(concordant) - static_cast<double>(discordant)) / denom;
}

// Concordance between a binary fault-provenance label vector (1 for the
// known faulty artifact) and the trace's rank vector (1 = most reliable).
// Positive values mean the faulty artifact is ranked less reliable.
inline double rank_concordance(const SourcePrioritization& prioritization,
                               Artifact faulty_artifact) {
    std::vector<double> ranks, labels;
    for (Artifact a : all_artifacts()) {
        ranks.push_back(static_cast<double>(prioritization.rank_of(a)));
        labels.push_back(a == faulty_artifact ? 1.0 : 0.0);
    }
    return kendall_tau_b(ranks, labels);
}

// The single designated faulty artifact for concordance, when one exists.
// BOTH-strategy contradictions and non-mutation variants have none.
inline std::optional<Artifact> designated_faulty_artifact(const PerturbationRecord& r) {
    switch (r.variant) {
        case Variant::DOC_BUG: return Artifact::JAVADOC;
        case Variant::MUT_BUG: return Artifact::MUT;
        case Variant::CONTRADICTION:
            if (r.strategy == Strategy::MUT_ONLY) return Artifact::MUT;
            if (r.strategy == Strategy::DOCSTRING_ONLY) return Artifact::JAVADOC;
            return std::nullopt;  // BOTH excluded
        default: return std::nullopt;
    }
}

// ---- embedding --------------------------------------------------------------

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
};

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("BAD_INPUT", "cosine requires equal-dimension vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Deterministic hashed bag-of-words embedder for offline runs and tests.
// Identical text maps to the identical vector, so self-similarity is 1.
class HashedEmbedder : public Embedder {
public:
    explicit HashedEmbedder(size_t dim = 256) : dim_(dim) {}

    std::vector<double> embed(const std::string& text) override {
        std::vector<double> v(dim_, 0.0);
        std::string token;
        auto flush = [&]() {
            if (!token.empty()) {
                v[fnv1a(token) % dim_] += 1.0;
                token.clear();
            }
        };
        for (char c : text) {
            if (std::isalnum(static_cast<unsigned char>(c)))
                token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            else
                flush();
        }
        flush();
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (double& x : v) x /= norm;
        return v;
    }

private:
    size_t dim_;
};

// Client for a sentence-embedding HTTP service (the documented default
// backend model is BAAI/bge-base-en-v1.5 behind a local inference server).
// Wire: POST /v1/embed {"model":..., "texts":[...]} -> {"embeddings":[[...]]}.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string base_url, std::string model = "BAAI/bge-base-en-v1.5",
                 double timeout_s = 120.0)
        : base_url_(std::move(base_url)), model_(std::move(model)), timeout_s_(timeout_s) {}

    std::vector<double> embed(const std::string& text) override {
        httplib::Client client(base_url_);
        client.set_connection_timeout(static_cast<time_t>(timeout_s_), 0);
        client.set_read_timeout(static_cast<time_t>(timeout_s_), 0);
        json body{{"model", model_}, {"texts", {text}}};
        auto result = client.Post("/v1/embed", body.dump(), "application/json");
        if (!result || result->status != 200)
            throw Error("EMBEDDER_UNAVAILABLE", "embedding service unreachable", base_url_);
        json reply = json::parse(result->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("embeddings") ||
            !reply["embeddings"].is_array() || reply["embeddings"].empty())
            throw Error("EMBEDDER_UNAVAILABLE", "malformed embedding reply", result->body);
        return reply["embeddings"][0].get<std::vector<double>>();
    }

private:
    std::string base_url_;
    std::string model_;
    double timeout_s_;
};

// ---- evaluation records ------------------------------------------------------

// One stored trace joined with its perturbation provenance; the unit every
// metric below consumes.
struct EvaluationRecord {
    RunKey key;
    std::optional<Severity> severity;
    std::optional<Strategy> strategy;
    std::set<Artifact> affected_artifacts;
    std::string ground_truth_summary;
    std::map<Dimension, double> scores;
    SignalVector signals;
    SourcePrioritization prioritization;
    double overall_confidence = 0.0;

    bool is_mutation_family() const {
        return key.variant == Variant::DOC_BUG || key.variant == Variant::MUT_BUG ||
               key.variant == Variant::CONTRADICTION;
    }
};

inline EvaluationRecord make_evaluation_record(const StoredTrace& s) {
    EvaluationRecord r;
    r.key = s.key;
    r.severity = s.provenance.severity;
    r.strategy = s.provenance.strategy;
    r.affected_artifacts = s.provenance.affected_artifacts;
    r.ground_truth_summary = s.provenance.ground_truth_summary;
    for (Dimension d : {Dimension::JAVADOC, Dimension::SIGNATURE, Dimension::MUT,
                        Dimension::TEST_PREFIX, Dimension::OVERALL})
        r.scores[d] = s.trace.assessment.entry(d).score;
    r.signals = derive_signals(s.trace);
    r.prioritization = s.trace.prioritization;
    r.overall_confidence = s.trace.overall_confidence;
    return r;
}

// ---- score deltas -------------------------------------------------------------

struct DeltaReport {
    std::map<Dimension, double> delta;  // mean(perturbed) - mean(base)
    size_t paired = 0;
    size_t unpaired = 0;  // excluded records across both archives
};

// Pairs base and perturbed traces of one model by sample_id; unpaired
// samples are excluded and counted.
inline DeltaReport delta_from_base(const std::vector<EvaluationRecord>& base_records,
                                   const std::vector<EvaluationRecord>& perturbed_records) {
    std::map<std::string, const EvaluationRecord*> base_by_id;
    for (const auto& r : base_records) base_by_id[r.key.sample_id] = &r;

    std::map<Dimension, double> base_sum, pert_sum;
    size_t paired = 0, unpaired = 0;
    for (const auto& p : perturbed_records) {
        auto it = base_by_id.find(p.key.sample_id);
        if (it == base_by_id.end()) {
            ++unpaired;
            continue;
        }
        ++paired;
        for (const auto& [dim, score] : p.scores) {
            pert_sum[dim] += score;
            base_sum[dim] += it->second->scores.at(dim);
        }
    }
    unpaired += base_records.size() - paired;

    DeltaReport report;
    report.paired = paired;
    report.unpaired = unpaired;
    if (paired == 0) throw Error("EMPTY_GROUP", "no paired samples for delta");
    for (const auto& [dim, sum] : pert_sum)
        report.delta[dim] = (sum - base_sum[dim]) / static_cast<double>(paired);
    return report;
}

// ---- severity breakdown ----------------------------------------------------------

struct SeverityBreakdown {
    std::map<Severity, GroupStat> per_tier;  // mean overall score per tier
    bool monotonic = false;  // mean(HEAVY) < mean(NORMAL) <= mean(SUBTLE)
    double heavy_to_subtle_gap = 0.0;  // mean(SUBTLE) - mean(HEAVY)
};

inline SeverityBreakdown severity_breakdown(const std::vector<EvaluationRecord>& records) {
    std::map<Severity, std::vector<double>> by_tier;
    for (const auto& r : records) {
        if (!r.severity)
            throw Error("MISSING_METADATA", "record lacks severity provenance",
                        r.key.key_string());
        by_tier[*r.severity].push_back(r.scores.at(Dimension::OVERALL));
    }
    SeverityBreakdown b;
    for (Severity s : {Severity::HEAVY, Severity::NORMAL, Severity::SUBTLE}) {
        if (by_tier[s].empty())
            throw Error("EMPTY_GROUP", "severity tier has zero samples", to_string(s));
        b.per_tier[s] = group_stat(by_tier[s]);
    }
    double h = b.per_tier[Severity::HEAVY].mean;
    double n = b.per_tier[Severity::NORMAL].mean;
    double s = b.per_tier[Severity::SUBTLE].mean;
    b.monotonic = h < n && n <= s;
    b.heavy_to_subtle_gap = s - h;
    return b;
}

// ---- detection ----------------------------------------------------------------------

inline double detection_rate(const std::vector<EvaluationRecord>& records, Signal signal) {
    if (records.empty()) throw Error("EMPTY_GROUP", "detection rate over an empty group");
    size_t fired = 0;
    for (const auto& r : records)
        if (r.signals.fires(signal)) ++fired;
    return static_cast<double>(fired) / static_cast<double>(records.size());
}

// Net detection gain above the false-positive floor, in percentage points.
inline double net_gain(double perturbed_rate, double base_rate) {
    return (perturbed_rate - base_rate) * 100.0;
}

// ---- description fidelity ------------------------------------------------------------

enum class CombineMode { CONCAT, MEAN };

struct SimilarityScores {
    double pca = 0.0, ic = 0.0, ir = 0.0, combined = 0.0;
};

// Cosine between each fired signal's text and the ground-truth summary;
// exactly 0 for unfired or empty signals. Combined concatenates the fired
// texts (order PCA, IC, IR) into one embedding call by default; MEAN mode
// averages the per-signal cosines of fired signals instead.
inline SimilarityScores description_similarity(const EvaluationRecord& record,
                                               Embedder& embedder,
                                               CombineMode mode = CombineMode::CONCAT) {
    if (record.ground_truth_summary.empty())
        throw Error("MISSING_METADATA", "record lacks a ground-truth summary",
                    record.key.key_string());
    SimilarityScores out;
    std::vector<double> summary_vec = embedder.embed(record.ground_truth_summary);

    auto score_signal = [&](bool fired, const std::string& text) {
        if (!fired || text.empty()) return 0.0;
        return cosine_similarity(embedder.embed(text), summary_vec);
    };
    out.pca = score_signal(record.signals.pca_fires, record.signals.pca_text);
    out.ic = score_signal(record.signals.ic_fires, record.signals.ic_text);
    out.ir = score_signal(record.signals.ir_fires, record.signals.ir_text);

    std::vector<std::pair<bool, const std::string*>> fired = {
        {record.signals.pca_fires, &record.signals.pca_text},
        {record.signals.ic_fires, &record.signals.ic_text},
        {record.signals.ir_fires, &record.signals.ir_text}};
    if (mode == CombineMode::CONCAT) {
        std::string concat;
        for (const auto& [f, text] : fired) {
            if (!f || text->empty()) continue;
            if (!concat.empty()) concat += ' ';
            concat += *text;
        }
        out.combined =
            concat.empty() ? 0.0 : cosine_similarity(embedder.embed(concat), summary_vec);
    } else {
        double sum = 0.0;
        size_t n = 0;
        if (record.signals.pca_fires) { sum += out.pca; ++n; }
        if (record.signals.ic_fires) { sum += out.ic; ++n; }
        if (record.signals.ir_fires) { sum += out.ir; ++n; }
        out.combined = n == 0 ? 0.0 : sum / static_cast<double>(n);
    }
    return out;
}

// ---- calibration ------------------------------------------------------------------------

struct CalibrationGap {
    bool defined = false;
    double mean_confidence_detected = 0.0;
    double mean_confidence_missed = 0.0;
    double gap = 0.0;  // detected - missed
    size_t n_detected = 0;
    size_t n_missed = 0;
};

// Confidence separation between detected and missed perturbed samples
// under the chosen signal. Either partition empty leaves the gap
// undefined; partition sizes are always reported.
inline CalibrationGap calibration_gap(const std::vector<EvaluationRecord>& records,
                                      Signal signal) {
    std::vector<double> detected, missed;
    for (const auto& r : records)
        (r.signals.fires(signal) ? detected : missed).push_back(r.overall_confidence);
    CalibrationGap g;
    g.n_detected = detected.size();
    g.n_missed = missed.size();
    if (detected.empty() || missed.empty()) return g;
    g.defined = true;
    g.mean_confidence_detected = group_stat(detected).mean;
    g.mean_confidence_missed = group_stat(missed).mean;
    g.gap = g.mean_confidence_detected - g.mean_confidence_missed;
    return g;
}

// ---- report rows ----------------------------------------------------------------------------

// Long-format row: grouping keys + one statistic. Empty grouping values
// mean "not applicable to this row".
struct MetricRow {
    std::string model;
    std::string variant;
    std::string severity;
    std::string strategy;
    std::string signal;
    std::string dimension;
    std::string statistic;
    double value = 0.0;
    size_t n = 0;
    std::optional<double> stddev;

    json to_json() const {
        json j{{"model", model},     {"variant", variant},   {"severity", severity},
               {"strategy", strategy}, {"signal", signal},   {"dimension", dimension},
               {"statistic", statistic}, {"value", value},   {"n", n}};
        if (stddev) j["stddev"] = *stddev;
        return j;
    }
};

inline MetricRow metric_row_from_json(const json& j) {
    MetricRow r;
    r.model = j.value("model", "");
    r.variant = j.value("variant", "");
    r.severity = j.value("severity", "");
    r.strategy = j.value("strategy", "");
    r.signal = j.value("signal", "");
    r.dimension = j.value("dimension", "");
    r.statistic = j.value("statistic", "");
    r.value = j.value("value", 0.0);
    r.n = j.value("n", static_cast<size_t>(0));
    if (j.contains("stddev") && j["stddev"].is_number()) r.stddev = j["stddev"].get<double>();
    return r;
}

}  // namespace trustbench
