#pragma once

// Deterministic offline stand-in for a model endpoint. Unlike real models
// it sees perturbation provenance, so it can act as a perfect judge
// (ORACLE), a judge that never flags (SILENT), a coin-flip judge
// (RANDOM), or a generator of deliberately malformed output exercising
// the repair path (MALFORMED). It also answers mutation requests with
// canned deterministic mutations so the whole pipeline runs offline.
//
// It speaks the same chat-completion contract as real endpoints; the run
// harness cannot distinguish it.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "trustbench/bundle.hpp"
#include "trustbench/endpoint.hpp"
#include "trustbench/harness.hpp"
#include "trustbench/mutation.hpp"
#include "trustbench/prompts.hpp"
#include "trustbench/trace.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

struct AuditorProfile {
    enum class Mode { ORACLE, RANDOM, SILENT, MALFORMED };
    enum class MalformedKind { TAG_PREFIXED, TRUNCATED, BAD_ESCAPE };

    Mode mode = Mode::ORACLE;
    double p_flag = 0.2;        // RANDOM: independent per-signal fire probability
    uint64_t seed = 0;          // fixes all randomness
    MalformedKind kind = MalformedKind::TAG_PREFIXED;

    // score policy
    double base_score = 0.85;
    double penalty_subtle = 0.10;
    double penalty_normal = 0.20;
    double penalty_heavy = 0.35;
    double removal_penalty_desc = 0.20;
    double removal_penalty_return = 0.10;
    double removal_penalty_desc_return = 0.30;

    double fixed_delay_s = 0.0;

    double penalty(Severity s) const {
        switch (s) {
            case Severity::SUBTLE: return penalty_subtle;
            case Severity::NORMAL: return penalty_normal;
            case Severity::HEAVY: return penalty_heavy;
        }
        return 0.0;
    }
};

// Locator grammar: auditor:<oracle|random|silent|malformed>[?p=..&seed=..&kind=..&base=..]
inline bool is_auditor_locator(std::string_view locator) {
    return locator.rfind("auditor:", 0) == 0;
}

inline AuditorProfile parse_auditor_locator(std::string_view locator) {
    if (!is_auditor_locator(locator))
        throw Error("CONFIG_INVALID", "not an auditor locator", std::string(locator));
    std::string rest(locator.substr(8));
    std::string mode = rest;
    std::string query;
    if (size_t q = rest.find('?'); q != std::string::npos) {
        mode = rest.substr(0, q);
        query = rest.substr(q + 1);
    }
    AuditorProfile p;
    if (mode == "oracle") p.mode = AuditorProfile::Mode::ORACLE;
    else if (mode == "random") p.mode = AuditorProfile::Mode::RANDOM;
    else if (mode == "silent") p.mode = AuditorProfile::Mode::SILENT;
    else if (mode == "malformed") p.mode = AuditorProfile::Mode::MALFORMED;
    else throw Error("CONFIG_INVALID", "unknown auditor mode " + mode, std::string(locator));

    size_t pos = 0;
    while (pos < query.size()) {
        size_t amp = query.find('&', pos);
        if (amp == std::string::npos) amp = query.size();
        std::string kv = query.substr(pos, amp - pos);
        pos = amp + 1;
        size_t eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "p") p.p_flag = std::stod(value);
        else if (key == "seed") p.seed = std::stoull(value);
        else if (key == "base") p.base_score = std::stod(value);
        else if (key == "delay_ms") p.fixed_delay_s = std::stod(value) / 1000.0;
        else if (key == "kind") {
            if (value == "tag") p.kind = AuditorProfile::MalformedKind::TAG_PREFIXED;
            else if (value == "truncated") p.kind = AuditorProfile::MalformedKind::TRUNCATED;
            else if (value == "escape") p.kind = AuditorProfile::MalformedKind::BAD_ESCAPE;
            else throw Error("CONFIG_INVALID", "unknown malformed kind " + value);
        }
    }
    if (p.p_flag < 0.0 || p.p_flag > 1.0)
        throw Error("CONFIG_INVALID", "p_flag outside [0,1]", std::string(locator));
    return p;
}

namespace detail {

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

inline AssessmentEntry make_entry(double score, const std::string& evidence,
                                  const LabelBands& bands = {}) {
    AssessmentEntry e;
    e.score = round2(score);
    e.label = label_of(e.score, bands);
    e.evidence = evidence;
    return e;
}

// Base reliability order used when nothing is suspect.
inline std::vector<Artifact> base_rank_order() {
    return {Artifact::SIGNATURE, Artifact::MUT, Artifact::JAVADOC, Artifact::TEST_PREFIX};
}

inline SourcePrioritization make_ranking(const std::set<Artifact>& suspect) {
    std::vector<Artifact> order;
    for (Artifact a : base_rank_order())
        if (!suspect.count(a)) order.push_back(a);
    // suspects go last, Javadoc below MUT when both are suspect
    if (suspect.count(Artifact::MUT)) order.push_back(Artifact::MUT);
    if (suspect.count(Artifact::JAVADOC)) order.push_back(Artifact::JAVADOC);
    if (suspect.count(Artifact::TEST_PREFIX)) order.push_back(Artifact::TEST_PREFIX);
    if (suspect.count(Artifact::SIGNATURE)) order.push_back(Artifact::SIGNATURE);

    SourcePrioritization p;
    const double confidences[4] = {0.90, 0.80, 0.70, 0.60};
    for (size_t i = 0; i < order.size(); ++i)
        p.ranking.push_back({order[i], static_cast<int>(i) + 1, confidences[i]});
    return p;
}

inline std::vector<PairwiseVerdict> all_consistent_pairwise() {
    std::vector<PairwiseVerdict> out;
    for (const auto& [a, b] : artifact_pairs())
        out.push_back({a, b, Verdict::CONSISTENT, ""});
    return out;
}

}  // namespace detail

// The trace a perfect (or controlled imperfect) judge would emit for a
// record whose provenance it can see. Returned as raw completion text.
//
// ORACLE behavior by variant:
//   BASE           - nothing fires, every score at the base level
//   removal        - Javadoc score drops by the removal penalty, the
//                    Javadoc pairs read INCOMPLETE, no conflict signals
//   DOC_BUG/MUT_BUG- Javadoc-MUT pair CONTRADICTORY, one identified
//                    conflict involving both, inconsistency affecting
//                    exactly the modified artifact (so a MUT-only fault
//                    deliberately does not satisfy IR-strict)
//   CONTRADICTION  - as above, but the inconsistency affects both Javadoc
//                    and MUT for every strategy: the fault is the mutual
//                    contradiction, whichever side was edited
inline ReasoningTrace oracle_reasoning_trace(const PerturbationRecord& record,
                                             const AuditorProfile& profile) {
    ReasoningTrace t;
    t.sample_id = record.sample_id();
    t.variant = record.variant;

    double base = profile.base_score;
    std::map<Dimension, double> scores = {{Dimension::JAVADOC, base},
                                          {Dimension::SIGNATURE, base},
                                          {Dimension::MUT, base},
                                          {Dimension::TEST_PREFIX, base},
                                          {Dimension::OVERALL, base}};
    std::map<Dimension, std::string> evidence = {
        {Dimension::JAVADOC, "Documentation is well-formed and matches the implementation."},
        {Dimension::SIGNATURE, "Declaration is complete and typed."},
        {Dimension::MUT, "Implementation is coherent."},
        {Dimension::TEST_PREFIX, "Setup exercises the method plausibly."},
        {Dimension::OVERALL, "Artifacts support confident reasoning."}};

    std::set<Artifact> suspect;
    t.consistency.pairwise = detail::all_consistent_pairwise();
    t.consistency.behavioral_hypothesis =
        "Behavior follows the implementation as documented.";
    t.overall_confidence = 0.90;

    switch (record.variant) {
        case Variant::BASE:
            break;
        case Variant::DOC_DESC_REMOVED:
        case Variant::DOC_RETURN_REMOVED:
        case Variant::DOC_DESC_RETURN_REMOVED: {
            double penalty = record.variant == Variant::DOC_DESC_REMOVED
                                 ? profile.removal_penalty_desc
                                 : record.variant == Variant::DOC_RETURN_REMOVED
                                       ? profile.removal_penalty_return
                                       : profile.removal_penalty_desc_return;
            scores[Dimension::JAVADOC] = base - penalty;
            scores[Dimension::OVERALL] = base - penalty / 2.0;
            evidence[Dimension::JAVADOC] = "Documentation is missing expected components.";
            suspect.insert(Artifact::JAVADOC);
            for (auto& p : t.consistency.pairwise)
                if (p.first == Artifact::JAVADOC || p.second == Artifact::JAVADOC) {
                    p.verdict = Verdict::INCOMPLETE;
                    p.rationale = "Documentation lacks content the counterpart implies.";
                }
            break;
        }
        case Variant::DOC_BUG:
        case Variant::MUT_BUG:
        case Variant::CONTRADICTION: {
            double penalty = record.severity ? profile.penalty(*record.severity) : 0.0;
            for (Artifact a : record.affected_artifacts) {
                Dimension d = a == Artifact::JAVADOC ? Dimension::JAVADOC : Dimension::MUT;
                scores[d] = base - penalty;
                evidence[d] = "Claims in this artifact disagree with the rest of the bundle.";
            }
            scores[Dimension::OVERALL] = base - penalty;
            evidence[Dimension::OVERALL] =
                "Cross-artifact contradiction reduces bundle reliability.";
            suspect = record.affected_artifacts;

            const std::string& summary = record.ground_truth_summary;
            for (auto& p : t.consistency.pairwise)
                if ((p.first == Artifact::JAVADOC && p.second == Artifact::MUT) ||
                    (p.first == Artifact::MUT && p.second == Artifact::JAVADOC)) {
                    p.verdict = Verdict::CONTRADICTORY;
                    p.rationale = summary;
                }
            t.consistency.identified_conflicts.push_back(
                {{Artifact::JAVADOC, Artifact::MUT}, summary});
            t.consistency.inconsistency.has_inconsistency = true;
            t.consistency.inconsistency.description = summary;
            t.consistency.inconsistency.affected_artifacts =
                record.variant == Variant::CONTRADICTION
                    ? std::set<Artifact>{Artifact::JAVADOC, Artifact::MUT}
                    : record.affected_artifacts;
            t.consistency.behavioral_hypothesis =
                "Documentation and implementation disagree; trust the unmodified artifacts.";
            t.overall_confidence = 0.95;
            break;
        }
    }

    for (auto& [dim, score] : scores)
        t.assessment.entry(dim) = detail::make_entry(score, evidence[dim]);
    t.prioritization = detail::make_ranking(suspect);
    t.metadata.assumptions = "Provenance-grounded reference judgment.";
    t.metadata.limitations = "Deterministic policy, not a learned model.";
    t.metadata.uncertainty = "none";
    return t;
}

inline ReasoningTrace silent_reasoning_trace(const PerturbationRecord& record,
                                             const AuditorProfile& profile) {
    PerturbationRecord as_base = record;
    as_base.variant = Variant::BASE;
    as_base.severity.reset();
    as_base.strategy.reset();
    as_base.affected_artifacts.clear();
    ReasoningTrace t = oracle_reasoning_trace(as_base, profile);
    t.variant = record.variant;
    t.overall_confidence = 0.50;
    return t;
}

inline ReasoningTrace random_reasoning_trace(const PerturbationRecord& record,
                                             const AuditorProfile& profile) {
    std::mt19937_64 rng(fnv1a(record.sample_id() + '\x1f' + to_string(record.variant),
                              profile.seed ^ 0x9e3779b97f4a7c15ull));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool pca = unit(rng) < profile.p_flag;
    bool ic = unit(rng) < profile.p_flag;
    bool ir = unit(rng) < profile.p_flag;

    ReasoningTrace t = silent_reasoning_trace(record, profile);
    if (pca)
        for (auto& p : t.consistency.pairwise)
            if ((p.first == Artifact::JAVADOC && p.second == Artifact::MUT) ||
                (p.first == Artifact::MUT && p.second == Artifact::JAVADOC)) {
                p.verdict = Verdict::CONTRADICTORY;
                p.rationale = "Possible disagreement between documentation and code.";
            }
    if (ic)
        t.consistency.identified_conflicts.push_back(
            {{Artifact::JAVADOC, Artifact::MUT},
             "Documentation and implementation may conflict."});
    if (ir) {
        t.consistency.inconsistency.has_inconsistency = true;
        t.consistency.inconsistency.affected_artifacts = {Artifact::JAVADOC, Artifact::MUT};
        t.consistency.inconsistency.description =
            "Reported inconsistency between documentation and implementation.";
    }
    t.overall_confidence = detail::round2(unit(rng));
    return t;
}

inline std::string wrap_malformed(const std::string& valid_text,
                                  AuditorProfile::MalformedKind kind) {
    switch (kind) {
        case AuditorProfile::MalformedKind::TAG_PREFIXED:
            return "<think>\nWeighing the four artifacts against each other before "
                   "answering.\n</think>\n" +
                   valid_text;
        case AuditorProfile::MalformedKind::TRUNCATED:
            // drops the closing-bracket run, which brace balancing restores
            return valid_text.substr(0, valid_text.size() - 3);
        case AuditorProfile::MalformedKind::BAD_ESCAPE: {
            std::string broken = valid_text;
            size_t pos = broken.find("\"uncertainty\":\"");
            if (pos != std::string::npos)
                broken.insert(pos + 15, "\\x07 ");
            return broken;
        }
    }
    return valid_text;
}

// Raw completion text for one record under the configured auditor mode.
inline std::string oracle_trace(const PerturbationRecord& record,
                                const AuditorProfile& profile) {
    switch (profile.mode) {
        case AuditorProfile::Mode::ORACLE:
            return serialize_trace(oracle_reasoning_trace(record, profile));
        case AuditorProfile::Mode::SILENT:
            return serialize_trace(silent_reasoning_trace(record, profile));
        case AuditorProfile::Mode::RANDOM:
            return serialize_trace(random_reasoning_trace(record, profile));
        case AuditorProfile::Mode::MALFORMED:
            return wrap_malformed(serialize_trace(oracle_reasoning_trace(record, profile)),
                                  profile.kind);
    }
    throw Error("BAD_ENUM", "unknown auditor mode");
}

// ---- canned mutations ------------------------------------------------------

namespace detail {

struct BodyTweak {
    std::string from, to, note;
    FaultCategory category;
};

inline const std::vector<BodyTweak>& body_tweaks(Severity severity) {
    static const std::vector<BodyTweak> heavy = {
        {"&&", "||", "inverted a compound condition", FaultCategory::LOGIC},
        {"==", "!=", "inverted an equality check", FaultCategory::LOGIC},
        {"true", "false", "flipped a boolean constant", FaultCategory::LOGIC},
        {"+", "-", "reversed an arithmetic operation", FaultCategory::LOGIC}};
    static const std::vector<BodyTweak> normal = {
        {">=", ">", "tightened a lower-bound comparison", FaultCategory::BOUNDARY},
        {"<=", "<", "tightened an upper-bound comparison", FaultCategory::BOUNDARY},
        {"+ 1", "+ 2", "shifted an index offset", FaultCategory::BOUNDARY},
        {"==", "!=", "inverted an equality check", FaultCategory::LOGIC}};
    static const std::vector<BodyTweak> subtle = {
        {"<=", "<", "excluded the boundary value from a range check",
         FaultCategory::BOUNDARY},
        {">=", ">", "excluded the boundary value from a range check",
         FaultCategory::BOUNDARY},
        {"!= null", "== null", "inverted a null guard", FaultCategory::NULL_CHECK},
        {"+ 1", "+ 2", "shifted an index offset", FaultCategory::BOUNDARY}};
    switch (severity) {
        case Severity::HEAVY: return heavy;
        case Severity::NORMAL: return normal;
        case Severity::SUBTLE: return subtle;
    }
    return normal;
}

struct CannedBodyMutation {
    std::string body;
    std::string note;
    FaultCategory category;
};

// Canned replies must stay byte-distinct across families: the auditor's
// elicitation answer key is keyed by artifact bytes, and two variants whose
// mutated bundles coincide would be indistinguishable to any blind judge.
// Contradiction-family body mutations therefore also carry an inert local.
inline CannedBodyMutation canned_body_mutation(const std::string& body, Severity severity,
                                               bool contradiction) {
    std::string mutated = body;
    std::string note = "inserted an unused guard variable";
    FaultCategory category = FaultCategory::API_MISUSE;
    bool tweaked = false;
    for (const auto& t : body_tweaks(severity)) {
        size_t pos = body.find(t.from);
        if (pos != std::string::npos) {
            mutated.replace(pos, t.from.size(), t.to);
            if (mutated != body) {
                note = t.note;
                category = t.category;
                tweaked = true;
                break;
            }
            mutated = body;
        }
    }
    if (!tweaked || contradiction) {
        std::string inserted = contradiction ? "\n        int crossCheck = 0;"
                                             : "\n        int guard = 0;";
        size_t brace = mutated.find('{');
        if (brace != std::string::npos)
            mutated.insert(brace + 1, inserted);
        else
            mutated = inserted + "\n" + mutated;
    }
    return {mutated, note, category};
}

inline std::string doc_false_claim(Severity severity, bool contradiction) {
    if (contradiction) {
        switch (severity) {
            case Severity::HEAVY:
                return "The result is always zero regardless of the inputs.";
            case Severity::NORMAL:
                return "A null input yields an immediate empty result.";
            case Severity::SUBTLE:
                return "The final element of the range is never included.";
        }
    }
    switch (severity) {
        case Severity::HEAVY:
            return "Always returns an empty result and performs no processing.";
        case Severity::NORMAL:
            return "Negative inputs are rejected before any processing occurs.";
        case Severity::SUBTLE:
            return "Boundary values are treated as exclusive by the comparison.";
    }
    return "";
}

inline std::string canned_doc_mutation(const std::string& javadoc, Severity severity,
                                       bool contradiction) {
    std::string claim = doc_false_claim(severity, contradiction);
    auto lines = split_lines(javadoc);
    if (lines.size() >= 2) {
        std::vector<std::string> out;
        out.push_back(lines[0]);
        out.push_back(" * " + claim);
        for (size_t i = 1; i < lines.size(); ++i) out.push_back(lines[i]);
        return join_lines(out);
    }
    // single-line doc: expand to the block form
    std::string payload = doc_payload(javadoc);
    return "/**\n * " + payload + "\n * " + claim + "\n */";
}

inline FaultCategory doc_fault_category(Severity severity) {
    switch (severity) {
        case Severity::HEAVY: return FaultCategory::WRONG_BEHAVIOR;
        case Severity::NORMAL: return FaultCategory::WRONG_PARAMS;
        case Severity::SUBTLE: return FaultCategory::WRONG_RETURN;
    }
    return FaultCategory::WRONG_BEHAVIOR;
}

}  // namespace detail

// Deterministic mutation reply for one request, matching the reply schema
// build_mutation_request demands.
inline std::string canned_mutation_reply(const ArtifactBundle& base, Variant variant,
                                         Severity severity,
                                         std::optional<Strategy> strategy) {
    json reply;
    reply["severity"] = to_string(severity);
    switch (variant) {
        case Variant::MUT_BUG: {
            auto m = detail::canned_body_mutation(base.mut_body, severity, false);
            reply["mutated_mut"] = m.body;
            reply["fault_category"] = to_string(m.category);
            reply["ground_truth_summary"] =
                "Implementation fault: " + m.note + ", so behavior deviates from the "
                "documented contract.";
            break;
        }
        case Variant::DOC_BUG: {
            reply["mutated_javadoc"] =
                detail::canned_doc_mutation(base.javadoc, severity, false);
            reply["fault_category"] = to_string(detail::doc_fault_category(severity));
            reply["ground_truth_summary"] =
                "Documentation fault: the description asserts behavior the implementation "
                "does not have.";
            break;
        }
        case Variant::CONTRADICTION: {
            if (!strategy)
                throw Error("MISSING_METADATA", "CONTRADICTION reply requires a strategy");
            switch (*strategy) {
                case Strategy::MUT_ONLY: {
                    auto m = detail::canned_body_mutation(base.mut_body, severity, true);
                    reply["mutated_mut"] = m.body;
                    reply["ground_truth_summary"] =
                        "Contradiction: the method body was changed (" + m.note +
                        ") while the documentation still describes the original behavior.";
                    break;
                }
                case Strategy::DOCSTRING_ONLY:
                    reply["mutated_javadoc"] =
                        detail::canned_doc_mutation(base.javadoc, severity, true);
                    reply["ground_truth_summary"] =
                        "Contradiction: the documentation now makes a claim the unchanged "
                        "implementation violates.";
                    break;
                case Strategy::BOTH: {
                    auto m = detail::canned_body_mutation(base.mut_body, severity, true);
                    reply["mutated_mut"] = m.body;
                    reply["mutated_javadoc"] =
                        detail::canned_doc_mutation(base.javadoc, severity, true);
                    reply["ground_truth_summary"] =
                        "Contradiction: documentation and implementation were both altered "
                        "to disagree (" + m.note + ").";
                    break;
                }
            }
            break;
        }
        default:
            throw Error("BAD_ENUM", "not a mutation family", to_string(variant));
    }
    return reply.dump();
}

// ---- the endpoint ------------------------------------------------------------

// Answers elicitation requests by recovering the record from the blind user
// prompt via an artifact-text index (out-of-band ground truth, like a grader
// holding the answer key), and mutation requests via canned mutations.
class AuditorEndpoint : public ChatEndpoint {
public:
    AuditorEndpoint(AuditorProfile profile, const VariantMatrix& datasets = {})
        : profile_(profile) {
        for (const auto& [variant, records] : datasets)
            for (const auto& r : records) index(r);
    }

    void index(const PerturbationRecord& record) {
        uint64_t h = bundle_hash(record.bundle);
        auto it = records_.find(h);
        // identical artifact bytes must judge identically: prefer BASE
        if (it == records_.end() || record.variant == Variant::BASE)
            records_[h] = record;
    }

    ChatResponse complete(const ChatRequest& request) override {
        if (profile_.fixed_delay_s > 0.0)
            std::this_thread::sleep_for(
                std::chrono::duration<double>(profile_.fixed_delay_s));

        if (request.system_text.find(prompts::kMutationSystemMarker) != std::string::npos)
            return {answer_mutation(request)};
        return {answer_elicitation(request)};
    }

private:
    static uint64_t bundle_hash(const ArtifactBundle& b) {
        return fnv1a(b.javadoc + '\x1f' + b.signature + '\x1f' + b.mut_body + '\x1f' +
                     b.test_prefix);
    }

    std::string answer_elicitation(const ChatRequest& request) const {
        auto sections = prompts::parse_user_prompt(request.user_text);
        if (!sections)
            throw Error("PERMANENT_REFUSAL", "user prompt sections unreadable");
        ArtifactBundle probe;
        probe.javadoc = sections->javadoc;
        probe.signature = sections->signature;
        probe.mut_body = sections->mut;
        probe.test_prefix = sections->test_prefix;
        auto it = records_.find(bundle_hash(probe));
        if (it == records_.end())
            throw Error("PERMANENT_REFUSAL", "bundle not in the auditor's answer key");
        return oracle_trace(it->second, profile_);
    }

    std::string answer_mutation(const ChatRequest& request) const {
        auto params = prompts::parse_mutation_params(request.user_text);
        auto sections = prompts::parse_user_prompt(request.user_text);
        if (!params || !sections)
            throw Error("PERMANENT_REFUSAL", "mutation request unreadable");
        auto variant = variant_from_string(params->value("variant", ""));
        auto severity = severity_from_string(params->value("severity", ""));
        std::optional<Strategy> strategy;
        if (params->contains("strategy"))
            strategy = strategy_from_string(params->value("strategy", ""));
        if (!variant || !severity)
            throw Error("PERMANENT_REFUSAL", "mutation request lacks parameters");
        ArtifactBundle base;
        base.javadoc = sections->javadoc;
        base.signature = sections->signature;
        base.mut_body = sections->mut;
        base.test_prefix = sections->test_prefix;
        return canned_mutation_reply(base, *variant, *severity, strategy);
    }

    AuditorProfile profile_;
    std::map<uint64_t, PerturbationRecord> records_;
};

// Endpoint factory covering both locator schemes. Auditor endpoints load
// their answer key from the variant datasets.
inline EndpointFactory make_endpoint_factory(const VariantMatrix* datasets) {
    return [datasets](const EndpointProfile& profile) -> std::shared_ptr<ChatEndpoint> {
        if (is_auditor_locator(profile.locator)) {
            AuditorProfile ap = parse_auditor_locator(profile.locator);
            return std::make_shared<AuditorEndpoint>(ap, datasets ? *datasets
                                                                  : VariantMatrix{});
        }
        return make_http_endpoint(profile);
    };
}

}  // namespace trustbench
