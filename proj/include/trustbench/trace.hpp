#pragma once

// Structured reasoning-trace schema: the quality assessment, source
// prioritization, and consistency report a model must emit for every
// bundle, plus the repair and validation path that turns raw completion
// text into a usable trace.
//
// The wire format is normative for this project: one JSON object with
// top-level keys `assessment`, `prioritization`, `consistency`,
// `metadata`, `overall_confidence`.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trustbench/types.hpp"

namespace trustbench {

using nlohmann::json;

struct LabelBands {
    double low_upper = 0.40;   // LOW: [0, low_upper)
    double medium_upper = 0.70;  // MEDIUM: [low_upper, medium_upper); HIGH above

    bool operator==(const LabelBands&) const = default;
};

inline Label label_of(double score, const LabelBands& bands = {}) {
    if (score < 0.0 || score > 1.0)
        throw Error("OUT_OF_RANGE", "score outside [0,1]", std::to_string(score));
    if (score < bands.low_upper) return Label::LOW;
    if (score < bands.medium_upper) return Label::MEDIUM;
    return Label::HIGH;
}

struct AssessmentEntry {
    double score = 0.0;
    Label label = Label::LOW;
    std::string evidence;

    bool operator==(const AssessmentEntry&) const = default;
};

struct QualityAssessment {
    AssessmentEntry javadoc, signature, mut, test_prefix, overall;

    bool operator==(const QualityAssessment&) const = default;

    const AssessmentEntry& entry(Dimension d) const {
        switch (d) {
            case Dimension::JAVADOC: return javadoc;
            case Dimension::SIGNATURE: return signature;
            case Dimension::MUT: return mut;
            case Dimension::TEST_PREFIX: return test_prefix;
            case Dimension::OVERALL: return overall;
        }
        throw Error("BAD_ENUM", "unknown dimension");
    }
    AssessmentEntry& entry(Dimension d) {
        return const_cast<AssessmentEntry&>(
            static_cast<const QualityAssessment*>(this)->entry(d));
    }
};

struct RankEntry {
    Artifact source = Artifact::JAVADOC;
    int rank = 0;  // 1 = most reliable
    double confidence = 0.0;

    bool operator==(const RankEntry&) const = default;
};

struct SourcePrioritization {
    std::vector<RankEntry> ranking;  // exactly four entries, one per source

    bool operator==(const SourcePrioritization&) const = default;

    int rank_of(Artifact a) const {
        for (const auto& r : ranking)
            if (r.source == a) return r.rank;
        throw Error("MISSING_FIELD", "source absent from ranking", to_string(a));
    }
};

struct PairwiseVerdict {
    Artifact first = Artifact::JAVADOC;
    Artifact second = Artifact::MUT;
    Verdict verdict = Verdict::CONSISTENT;
    std::string rationale;

    bool operator==(const PairwiseVerdict&) const = default;
};

struct IdentifiedConflict {
    std::set<Artifact> involved_artifacts;
    std::string description;

    bool operator==(const IdentifiedConflict&) const = default;
};

struct InconsistencyReport {
    bool has_inconsistency = false;
    std::set<Artifact> affected_artifacts;
    std::string description;

    bool operator==(const InconsistencyReport&) const = default;
};

struct AnomalyAssessment {
    bool flag = false;
    std::string description;

    bool operator==(const AnomalyAssessment&) const = default;
};

struct ConsistencyReport {
    std::vector<PairwiseVerdict> pairwise;  // all six unordered pairs
    std::vector<IdentifiedConflict> identified_conflicts;
    InconsistencyReport inconsistency;
    AnomalyAssessment anomaly;
    std::string behavioral_hypothesis;

    bool operator==(const ConsistencyReport&) const = default;

    std::optional<Verdict> verdict_for(Artifact a, Artifact b) const {
        for (const auto& p : pairwise)
            if ((p.first == a && p.second == b) || (p.first == b && p.second == a))
                return p.verdict;
        return std::nullopt;
    }
    const PairwiseVerdict* pair_entry(Artifact a, Artifact b) const {
        for (const auto& p : pairwise)
            if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return &p;
        return nullptr;
    }
};

struct TraceMetadata {
    std::string assumptions, limitations, uncertainty;

    bool operator==(const TraceMetadata&) const = default;
};

struct ReasoningTrace {
    std::string sample_id;
    Variant variant = Variant::BASE;
    std::string model_id;

    QualityAssessment assessment;
    SourcePrioritization prioritization;
    ConsistencyReport consistency;
    TraceMetadata metadata;
    double overall_confidence = 0.0;

    // validator diagnostics (label/score disagreements); not serialized
    std::vector<std::string> warnings;

    bool operator==(const ReasoningTrace& o) const {
        return sample_id == o.sample_id && variant == o.variant && model_id == o.model_id &&
               assessment == o.assessment && prioritization == o.prioritization &&
               consistency == o.consistency && metadata == o.metadata &&
               overall_confidence == o.overall_confidence;
    }
};

inline const std::vector<std::pair<Artifact, Artifact>>& artifact_pairs() {
    static const std::vector<std::pair<Artifact, Artifact>> pairs = {
        {Artifact::JAVADOC, Artifact::SIGNATURE}, {Artifact::JAVADOC, Artifact::MUT},
        {Artifact::JAVADOC, Artifact::TEST_PREFIX}, {Artifact::SIGNATURE, Artifact::MUT},
        {Artifact::SIGNATURE, Artifact::TEST_PREFIX}, {Artifact::MUT, Artifact::TEST_PREFIX}};
    return pairs;
}

// ---- serialization ------------------------------------------------------

namespace detail {

inline json assessment_entry_to_json(const AssessmentEntry& e) {
    return json{{"score", e.score}, {"label", to_string(e.label)}, {"evidence", e.evidence}};
}

inline json artifact_set_to_json(const std::set<Artifact>& s) {
    json arr = json::array();
    for (Artifact a : s) arr.push_back(to_string(a));
    return arr;
}

}  // namespace detail

inline json trace_to_json(const ReasoningTrace& t) {
    json assessment{{"javadoc", detail::assessment_entry_to_json(t.assessment.javadoc)},
                    {"signature", detail::assessment_entry_to_json(t.assessment.signature)},
                    {"mut", detail::assessment_entry_to_json(t.assessment.mut)},
                    {"test_prefix", detail::assessment_entry_to_json(t.assessment.test_prefix)},
                    {"overall", detail::assessment_entry_to_json(t.assessment.overall)}};

    json ranking = json::array();
    for (const auto& r : t.prioritization.ranking)
        ranking.push_back(json{{"source", to_string(r.source)},
                               {"rank", r.rank},
                               {"confidence", r.confidence}});

    json pairwise = json::array();
    for (const auto& p : t.consistency.pairwise)
        pairwise.push_back(json{{"artifacts", {to_string(p.first), to_string(p.second)}},
                                {"verdict", to_string(p.verdict)},
                                {"rationale", p.rationale}});

    json conflicts = json::array();
    for (const auto& c : t.consistency.identified_conflicts)
        conflicts.push_back(json{{"involved_artifacts",
                                  detail::artifact_set_to_json(c.involved_artifacts)},
                                 {"description", c.description}});

    json consistency{
        {"pairwise", pairwise},
        {"identified_conflicts", conflicts},
        {"inconsistency",
         {{"has_inconsistency", t.consistency.inconsistency.has_inconsistency},
          {"affected_artifacts",
           detail::artifact_set_to_json(t.consistency.inconsistency.affected_artifacts)},
          {"description", t.consistency.inconsistency.description}}},
        {"anomaly",
         {{"flag", t.consistency.anomaly.flag},
          {"description", t.consistency.anomaly.description}}},
        {"behavioral_hypothesis", t.consistency.behavioral_hypothesis}};

    return json{{"assessment", assessment},
                {"prioritization", {{"ranking", ranking}}},
                {"consistency", consistency},
                {"metadata",
                 {{"assumptions", t.metadata.assumptions},
                  {"limitations", t.metadata.limitations},
                  {"uncertainty", t.metadata.uncertainty}}},
                {"overall_confidence", t.overall_confidence}};
}

inline std::string serialize_trace(const ReasoningTrace& t) { return trace_to_json(t).dump(); }

// ---- repair -------------------------------------------------------------

namespace detail {

inline bool parses_as_object(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    return !j.is_discarded() && j.is_object();
}

// Drops leading hidden-reasoning tag blocks like <think>...</think>.
inline std::string strip_leading_tag_blocks(std::string text) {
    for (;;) {
        std::string t = trim(text);
        if (t.empty() || t[0] != '<') return text;
        size_t name_end = 1;
        while (name_end < t.size() &&
               (std::isalnum(static_cast<unsigned char>(t[name_end])) || t[name_end] == '_'))
            ++name_end;
        if (name_end == 1) return text;  // '<' not a tag
        std::string name = t.substr(1, name_end - 1);
        std::string close = "</" + name + ">";
        size_t close_pos = t.find(close);
        if (close_pos != std::string::npos) {
            text = t.substr(close_pos + close.size());
            continue;
        }
        // unterminated tag block: skip to the first object start
        size_t brace = t.find('{');
        if (brace == std::string::npos) return text;
        text = t.substr(brace);
        return text;
    }
}

}  // namespace detail

// Turns raw completion text into parseable object text: strips leading and
// trailing non-object text and reasoning tag blocks, normalizes invalid
// escape sequences, closes unterminated strings and balances braces at
// end-of-text. Already-valid objects pass through byte-identical, which
// also makes the repair idempotent.
inline std::string repair_raw_output(const std::string& raw) {
    if (detail::parses_as_object(raw)) return raw;

    std::string text = detail::strip_leading_tag_blocks(raw);
    size_t start = text.find('{');
    if (start == std::string::npos)
        throw Error("PARSE_FAILURE", "no object found in completion", raw);

    std::string out;
    out.reserve(text.size() - start);
    std::vector<char> open_stack;
    bool in_string = false;
    char last_sig = 0;       // last significant char seen outside strings
    char string_prefix = 0;  // last_sig at the moment the current string opened
    size_t i = start;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') {
                char n = i + 1 < text.size() ? text[i + 1] : '\0';
                static const std::string valid = "\"\\/bfnrtu";
                if (n == '\0') {
                    out += "\\\\";
                    ++i;
                } else if (valid.find(n) != std::string::npos) {
                    bool ok = true;
                    if (n == 'u') {
                        ok = i + 5 < text.size();
                        for (size_t k = i + 2; ok && k < i + 6; ++k)
                            ok = std::isxdigit(static_cast<unsigned char>(text[k]));
                    }
                    if (ok) {
                        out += c;
                        out += n;
                        ++i;
                    } else {
                        out += "\\\\";  // lone \u without hex digits
                        out += n;
                        ++i;
                    }
                } else {
                    out += "\\\\";  // invalid escape: keep the character, escape the backslash
                    out += n;
                    ++i;
                }
            } else if (c == '"') {
                in_string = false;
                last_sig = '"';
                out += c;
            } else if (c == '\n' || c == '\t' || c == '\r') {
                // raw control characters inside strings are invalid JSON
                out += c == '\n' ? "\\n" : (c == '\t' ? "\\t" : "\\r");
            } else {
                out += c;
            }
        } else {
            if (c == '"') {
                string_prefix = last_sig;
                in_string = true;
                out += c;
            } else if (c == '{' || c == '[') {
                open_stack.push_back(c);
                last_sig = c;
                out += c;
            } else if (c == '}' || c == ']') {
                if (!open_stack.empty()) open_stack.pop_back();
                last_sig = c;
                out += c;
                if (open_stack.empty()) break;  // balanced: drop trailing text
            } else {
                if (!std::isspace(static_cast<unsigned char>(c))) last_sig = c;
                out += c;
            }
        }
    }

    if (!open_stack.empty()) {
        // text ran out mid-object: mend the truncation point before closing
        bool in_object = open_stack.back() == '{';
        bool key_position = in_object && (string_prefix == '{' || string_prefix == ',');
        if (in_string) {
            out += '"';
            if (key_position) out += ":null";
        } else {
            size_t end = out.find_last_not_of(" \t\r\n");
            if (end != std::string::npos) {
                char tail = out[end];
                if (tail == ',') {
                    out.erase(end);
                } else if (tail == ':') {
                    out += "null";
                } else if (tail == '"' && key_position && last_sig == '"') {
                    out += ":null";
                } else if (std::isalpha(static_cast<unsigned char>(tail))) {
                    // partial true/false/null literal
                    size_t tok = end;
                    while (tok > 0 && std::isalpha(static_cast<unsigned char>(out[tok - 1])))
                        --tok;
                    std::string word = out.substr(tok, end - tok + 1);
                    bool completed = false;
                    for (std::string_view lit : {"true", "false", "null"})
                        if (lit.size() > word.size() && lit.substr(0, word.size()) == word) {
                            out += lit.substr(word.size());
                            completed = true;
                            break;
                        }
                    // exponent cut off a numeric literal: 1.2e -> 1.2e0
                    if (!completed && (word == "e" || word == "E") && tok > 0 &&
                        std::isdigit(static_cast<unsigned char>(out[tok - 1])))
                        out += '0';
                } else if (tail == '.' || tail == '-' || tail == '+' || tail == 'e' ||
                           tail == 'E') {
                    out += '0';  // partial numeric literal
                }
            }
        }
        while (!open_stack.empty()) {
            out += open_stack.back() == '{' ? '}' : ']';
            open_stack.pop_back();
        }
    }

    if (!detail::parses_as_object(out))
        throw Error("PARSE_FAILURE", "completion not repairable", raw);
    return out;
}

// ---- validation -----------------------------------------------------------

namespace detail {

inline const json& require_field(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        throw Error("MISSING_FIELD", "required field absent", path + "." + key);
    return *it;
}

inline double require_unit_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw Error("MISSING_FIELD", "number expected", path);
    double v = j.get<double>();
    if (v < 0.0 || v > 1.0) throw Error("OUT_OF_RANGE", "value outside [0,1]", path);
    return v;
}

inline std::string require_string(const json& j, const char* key, const std::string& path) {
    const json& f = require_field(j, key, path);
    if (!f.is_string()) throw Error("MISSING_FIELD", "string expected", path + "." + key);
    return f.get<std::string>();
}

inline Artifact require_artifact(const json& j, const std::string& path) {
    if (!j.is_string()) throw Error("BAD_ENUM", "artifact name expected", path);
    auto a = artifact_from_string(j.get<std::string>());
    if (!a) throw Error("BAD_ENUM", "unknown artifact " + j.get<std::string>(), path);
    return *a;
}

inline AssessmentEntry parse_assessment_entry(const json& j, const std::string& path,
                                              const LabelBands& bands,
                                              std::vector<std::string>& warnings) {
    if (!j.is_object()) throw Error("MISSING_FIELD", "assessment entry expected", path);
    AssessmentEntry e;
    e.score = require_unit_number(require_field(j, "score", path), path + ".score");
    std::string label_str = require_string(j, "label", path);
    auto label = label_from_string(label_str);
    if (!label) throw Error("BAD_ENUM", "unknown label " + label_str, path + ".label");
    e.label = *label;
    e.evidence = require_string(j, "evidence", path);
    if (label_of(e.score, bands) != e.label)
        warnings.push_back(path + ": label " + label_str + " disagrees with score banding");
    return e;
}

}  // namespace detail

// Strict-reject validation: all six analysis components, five assessment
// entries, six pairwise verdicts, the four-source total order and the
// overall confidence must be present and in bounds. Label/score banding
// disagreements are recorded as warnings on the returned trace, not
// rejections.
inline ReasoningTrace validate_trace(const std::string& candidate, std::string sample_id,
                                     Variant variant, std::string model_id,
                                     const LabelBands& bands = {}) {
    json j = json::parse(candidate, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error("PARSE_FAILURE", "candidate is not a JSON object", candidate);

    ReasoningTrace t;
    t.sample_id = std::move(sample_id);
    t.variant = variant;
    t.model_id = std::move(model_id);

    // A: input-quality assessment
    const json& assessment = detail::require_field(j, "assessment", "$");
    static const std::pair<const char*, Dimension> dims[] = {
        {"javadoc", Dimension::JAVADOC},
        {"signature", Dimension::SIGNATURE},
        {"mut", Dimension::MUT},
        {"test_prefix", Dimension::TEST_PREFIX},
        {"overall", Dimension::OVERALL}};
    for (const auto& [key, dim] : dims) {
        const json& entry = detail::require_field(assessment, key, "assessment");
        t.assessment.entry(dim) = detail::parse_assessment_entry(
            entry, std::string("assessment.") + key, bands, t.warnings);
    }

    // P: source prioritization, a total order over the four artifacts
    const json& prioritization = detail::require_field(j, "prioritization", "$");
    const json& ranking = detail::require_field(prioritization, "ranking", "prioritization");
    if (!ranking.is_array() || ranking.size() != 4)
        throw Error("MISSING_FIELD", "ranking must list all four sources",
                    "prioritization.ranking");
    std::set<Artifact> seen_sources;
    std::set<int> seen_ranks;
    for (size_t i = 0; i < ranking.size(); ++i) {
        std::string path = "prioritization.ranking[" + std::to_string(i) + "]";
        const json& r = ranking[i];
        RankEntry e;
        e.source = detail::require_artifact(detail::require_field(r, "source", path),
                                            path + ".source");
        const json& rank = detail::require_field(r, "rank", path);
        if (!rank.is_number_integer())
            throw Error("MISSING_FIELD", "integer rank expected", path + ".rank");
        e.rank = rank.get<int>();
        if (e.rank < 1 || e.rank > 4)
            throw Error("OUT_OF_RANGE", "rank outside 1..4", path + ".rank");
        e.confidence = detail::require_unit_number(
            detail::require_field(r, "confidence", path), path + ".confidence");
        if (!seen_sources.insert(e.source).second)
            throw Error("DUPLICATE_SOURCE", "source ranked twice", to_string(e.source));
        if (!seen_ranks.insert(e.rank).second)
            throw Error("DUPLICATE_SOURCE", "rank assigned twice",
                        "rank " + std::to_string(e.rank));
        t.prioritization.ranking.push_back(e);
    }

    // C: consistency report
    const json& consistency = detail::require_field(j, "consistency", "$");
    const json& pairwise = detail::require_field(consistency, "pairwise", "consistency");
    if (!pairwise.is_array() || pairwise.size() != 6)
        throw Error("MISSING_FIELD", "six pairwise verdicts required", "consistency.pairwise");
    for (size_t i = 0; i < pairwise.size(); ++i) {
        std::string path = "consistency.pairwise[" + std::to_string(i) + "]";
        const json& p = pairwise[i];
        const json& arts = detail::require_field(p, "artifacts", path);
        if (!arts.is_array() || arts.size() != 2)
            throw Error("MISSING_FIELD", "artifact pair expected", path + ".artifacts");
        PairwiseVerdict v;
        v.first = detail::require_artifact(arts[0], path + ".artifacts[0]");
        v.second = detail::require_artifact(arts[1], path + ".artifacts[1]");
        std::string verdict_str = detail::require_string(p, "verdict", path);
        auto verdict = verdict_from_string(verdict_str);
        if (!verdict)
            throw Error("BAD_ENUM", "unknown verdict " + verdict_str, path + ".verdict");
        v.verdict = *verdict;
        if (p.contains("rationale") && p["rationale"].is_string())
            v.rationale = p["rationale"].get<std::string>();
        t.consistency.pairwise.push_back(std::move(v));
    }
    for (const auto& [a, b] : artifact_pairs())
        if (!t.consistency.verdict_for(a, b))
            throw Error("MISSING_FIELD",
                        "pairwise verdict missing for " + to_string(a) + "-" + to_string(b),
                        "consistency.pairwise");

    const json& conflicts =
        detail::require_field(consistency, "identified_conflicts", "consistency");
    if (!conflicts.is_array())
        throw Error("MISSING_FIELD", "identified_conflicts must be an array",
                    "consistency.identified_conflicts");
    for (size_t i = 0; i < conflicts.size(); ++i) {
        std::string path = "consistency.identified_conflicts[" + std::to_string(i) + "]";
        const json& c = conflicts[i];
        IdentifiedConflict ic;
        const json& involved = detail::require_field(c, "involved_artifacts", path);
        if (!involved.is_array() || involved.empty())
            throw Error("MISSING_FIELD", "involved_artifacts must be non-empty",
                        path + ".involved_artifacts");
        for (const auto& a : involved)
            ic.involved_artifacts.insert(
                detail::require_artifact(a, path + ".involved_artifacts"));
        ic.description = detail::require_string(c, "description", path);
        t.consistency.identified_conflicts.push_back(std::move(ic));
    }

    const json& inconsistency =
        detail::require_field(consistency, "inconsistency", "consistency");
    const json& has = detail::require_field(inconsistency, "has_inconsistency",
                                            "consistency.inconsistency");
    if (!has.is_boolean())
        throw Error("MISSING_FIELD", "boolean expected",
                    "consistency.inconsistency.has_inconsistency");
    t.consistency.inconsistency.has_inconsistency = has.get<bool>();
    const json& affected = detail::require_field(inconsistency, "affected_artifacts",
                                                 "consistency.inconsistency");
    if (!affected.is_array())
        throw Error("MISSING_FIELD", "affected_artifacts must be an array",
                    "consistency.inconsistency.affected_artifacts");
    for (const auto& a : affected)
        t.consistency.inconsistency.affected_artifacts.insert(
            detail::require_artifact(a, "consistency.inconsistency.affected_artifacts"));
    t.consistency.inconsistency.description =
        detail::require_string(inconsistency, "description", "consistency.inconsistency");
    if (t.consistency.inconsistency.has_inconsistency &&
        t.consistency.inconsistency.affected_artifacts.empty())
        throw Error("MISSING_FIELD", "inconsistency flagged without affected artifacts",
                    "consistency.inconsistency.affected_artifacts");

    const json& anomaly = detail::require_field(consistency, "anomaly", "consistency");
    const json& flag = detail::require_field(anomaly, "flag", "consistency.anomaly");
    if (!flag.is_boolean())
        throw Error("MISSING_FIELD", "boolean expected", "consistency.anomaly.flag");
    t.consistency.anomaly.flag = flag.get<bool>();
    t.consistency.anomaly.description =
        detail::require_string(anomaly, "description", "consistency.anomaly");

    t.consistency.behavioral_hypothesis =
        detail::require_string(consistency, "behavioral_hypothesis", "consistency");

    // psi: metadata (required presence, empty strings allowed)
    const json& metadata = detail::require_field(j, "metadata", "$");
    t.metadata.assumptions = detail::require_string(metadata, "assumptions", "metadata");
    t.metadata.limitations = detail::require_string(metadata, "limitations", "metadata");
    t.metadata.uncertainty = detail::require_string(metadata, "uncertainty", "metadata");

    t.overall_confidence = detail::require_unit_number(
        detail::require_field(j, "overall_confidence", "$"), "overall_confidence");

    return t;
}

}  // namespace trustbench
