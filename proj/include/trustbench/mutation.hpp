#pragma once

// Mutation-reply validation and variant-matrix assembly: the three
// deterministic removal transforms plus three endpoint-generated mutation
// families, aligned per sample with balanced severity tiers and
// contradiction strategies.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trustbench/bundle.hpp"
#include "trustbench/curation.hpp"
#include "trustbench/doc_transforms.hpp"
#include "trustbench/prompts.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

namespace detail {

inline size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return 0;
    size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

inline size_t count_occurrences_ci(std::string_view haystack, std::string_view needle) {
    return count_occurrences(ascii_lower(haystack), ascii_lower(needle));
}

}  // namespace detail

// Case-insensitive marker lexicon; any hit disqualifies a mutated artifact.
inline const std::vector<std::string>& marker_lexicon() {
    static const std::vector<std::string> markers = {"BUG", "FIXME", "TODO", "INJECT",
                                                     "MUTAT"};
    return markers;
}

// Lexical scan for revealing cues: lexicon hits plus comment tokens newly
// introduced relative to the base artifact text.
inline std::optional<std::string> find_marker_leak(std::string_view base_text,
                                                   std::string_view mutated_text) {
    for (const auto& marker : marker_lexicon())
        if (detail::count_occurrences_ci(mutated_text, marker) > 0)
            return "marker substring '" + marker + "'";
    for (std::string_view tok : {"//", "/*"}) {
        if (detail::count_occurrences(mutated_text, tok) >
            detail::count_occurrences(base_text, tok))
            return "newly introduced comment token '" + std::string(tok) + "'";
    }
    return std::nullopt;
}

// Validates a mutation-endpoint reply against the base bundle and builds a
// fully populated PerturbationRecord. Rejection codes: SIGNATURE_CHANGED,
// NO_EFFECTIVE_CHANGE, MARKER_LEAK, MISSING_METADATA, UNEXPECTED_ARTIFACT.
inline PerturbationRecord validate_mutation(const ArtifactBundle& base, const json& reply,
                                            Variant variant, Severity severity,
                                            std::optional<Strategy> strategy = std::nullopt) {
    if (!reply.is_object())
        throw Error("MISSING_METADATA", "mutation reply must be a JSON object", reply.dump());
    std::set<Artifact> expected = expected_affected(variant, strategy);

    if (reply.contains("signature") && reply["signature"].is_string() &&
        reply["signature"].get<std::string>() != base.signature)
        throw Error("SIGNATURE_CHANGED", "signature must be byte-identical to base",
                    reply.dump());

    auto mutated_text = [&](const char* key) -> std::optional<std::string> {
        if (reply.contains(key) && reply[key].is_string())
            return reply[key].get<std::string>();
        return std::nullopt;
    };
    auto mut = mutated_text("mutated_mut");
    auto doc = mutated_text("mutated_javadoc");

    if (mut && !expected.count(Artifact::MUT) && *mut != base.mut_body)
        throw Error("UNEXPECTED_ARTIFACT", "reply mutates the MUT for a doc-side variant",
                    reply.dump());
    if (doc && !expected.count(Artifact::JAVADOC) && *doc != base.javadoc)
        throw Error("UNEXPECTED_ARTIFACT", "reply mutates the Javadoc for a code-side variant",
                    reply.dump());

    PerturbationRecord rec;
    rec.bundle = base;
    rec.variant = variant;
    rec.severity = severity;
    rec.strategy = strategy;
    rec.affected_artifacts = expected;

    if (expected.count(Artifact::MUT)) {
        if (!mut)
            throw Error("MISSING_METADATA", "reply lacks mutated_mut", reply.dump());
        if (*mut == base.mut_body)
            throw Error("NO_EFFECTIVE_CHANGE", "mutated MUT equals base", reply.dump());
        if (auto leak = find_marker_leak(base.mut_body, *mut))
            throw Error("MARKER_LEAK", *leak, reply.dump());
        rec.bundle.mut_body = *mut;
    }
    if (expected.count(Artifact::JAVADOC)) {
        if (!doc)
            throw Error("MISSING_METADATA", "reply lacks mutated_javadoc", reply.dump());
        if (*doc == base.javadoc)
            throw Error("NO_EFFECTIVE_CHANGE", "mutated Javadoc equals base", reply.dump());
        if (auto leak = find_marker_leak(base.javadoc, *doc))
            throw Error("MARKER_LEAK", *leak, reply.dump());
        rec.bundle.javadoc = *doc;
    }

    if (!reply.contains("ground_truth_summary") ||
        !reply["ground_truth_summary"].is_string() ||
        reply["ground_truth_summary"].get<std::string>().empty())
        throw Error("MISSING_METADATA", "reply lacks ground_truth_summary", reply.dump());
    rec.ground_truth_summary = reply["ground_truth_summary"].get<std::string>();

    if (variant == Variant::DOC_BUG || variant == Variant::MUT_BUG) {
        if (!reply.contains("fault_category") || !reply["fault_category"].is_string())
            throw Error("MISSING_METADATA", "reply lacks fault_category", reply.dump());
        auto cat = fault_category_from_string(reply["fault_category"].get<std::string>());
        if (!cat)
            throw Error("MISSING_METADATA",
                        "unknown fault_category " + reply["fault_category"].get<std::string>(),
                        reply.dump());
        bool doc_cat = *cat == FaultCategory::WRONG_BEHAVIOR ||
                       *cat == FaultCategory::WRONG_RETURN ||
                       *cat == FaultCategory::WRONG_PARAMS ||
                       *cat == FaultCategory::MISSING_INFO;
        if ((variant == Variant::DOC_BUG) != doc_cat)
            throw Error("MISSING_METADATA", "fault_category outside the variant's taxonomy",
                        reply.dump());
        rec.fault_category = cat;
    }

    if (reply.contains("severity") && reply["severity"].is_string()) {
        auto s = severity_from_string(reply["severity"].get<std::string>());
        if (!s || *s != severity)
            throw Error("MISSING_METADATA", "reply severity disagrees with the request",
                        reply.dump());
    }

    return rec;
}

// ---- severity / strategy assignment -------------------------------------

struct MutationAssignment {
    Severity severity = Severity::NORMAL;
    std::optional<Strategy> strategy;  // CONTRADICTION only
};

// Deterministic balanced assignment keyed by (seed, family): sample ids are
// sorted, shuffled with a seeded generator, then dealt into severity tiers
// (HEAVY, NORMAL, SUBTLE) with counts equal within +-1. For CONTRADICTION,
// strategies are dealt round-robin within each tier with rotated offsets so
// both margins stay balanced while the two dimensions cross.
inline std::map<std::string, MutationAssignment> plan_assignments(
    std::vector<std::string> sample_ids, Variant family, uint64_t seed) {
    if (family != Variant::DOC_BUG && family != Variant::MUT_BUG &&
        family != Variant::CONTRADICTION)
        throw Error("BAD_ENUM", "not a mutation family", to_string(family));

    std::sort(sample_ids.begin(), sample_ids.end());
    std::mt19937_64 rng(seed ^ fnv1a(to_string(family)));
    std::shuffle(sample_ids.begin(), sample_ids.end(), rng);

    const Severity tiers[3] = {Severity::HEAVY, Severity::NORMAL, Severity::SUBTLE};
    const Strategy strategies[3] = {Strategy::MUT_ONLY, Strategy::DOCSTRING_ONLY,
                                    Strategy::BOTH};
    size_t n = sample_ids.size();
    size_t tier_count[3];
    for (size_t t = 0; t < 3; ++t) tier_count[t] = n / 3 + (t < n % 3 ? 1 : 0);

    std::map<std::string, MutationAssignment> plan;
    size_t idx = 0;
    for (size_t t = 0; t < 3; ++t) {
        for (size_t i = 0; i < tier_count[t]; ++i, ++idx) {
            MutationAssignment a;
            a.severity = tiers[t];
            if (family == Variant::CONTRADICTION) a.strategy = strategies[(i + t) % 3];
            plan[sample_ids[idx]] = a;
        }
    }
    return plan;
}

// ---- matrix assembly -----------------------------------------------------

using VariantMatrix = std::map<Variant, std::vector<PerturbationRecord>>;

namespace detail {

inline PerturbationRecord removal_record(const ArtifactBundle& base, Variant variant) {
    PerturbationRecord r;
    r.bundle = base;
    r.variant = variant;
    r.affected_artifacts = {Artifact::JAVADOC};
    switch (variant) {
        case Variant::DOC_DESC_REMOVED:
            r.bundle.javadoc = strip_description(base.javadoc);
            break;
        case Variant::DOC_RETURN_REMOVED:
            r.bundle.javadoc = strip_return_tag(base.javadoc);
            break;
        case Variant::DOC_DESC_RETURN_REMOVED:
            r.bundle.javadoc = strip_description_and_return(base.javadoc);
            break;
        default:
            throw Error("BAD_ENUM", "not a removal variant", to_string(variant));
    }
    return r;
}

}  // namespace detail

// Builds the seven aligned datasets: BASE, the three deterministic removal
// variants, and the three mutation families supplied as validated records.
// Every accepted sample must have exactly one record per mutation family;
// missing (sample_id, variant) pairs reject the whole matrix. Severity
// balance within +-1 per family is verified here as well.
inline VariantMatrix assemble_variant_matrix(
    const std::vector<ArtifactBundle>& accepted,
    const std::vector<PerturbationRecord>& mutation_records) {
    VariantMatrix matrix;

    for (const auto& b : accepted) {
        matrix[Variant::BASE].push_back(as_base_record(b));
        matrix[Variant::DOC_DESC_REMOVED].push_back(
            detail::removal_record(b, Variant::DOC_DESC_REMOVED));
        matrix[Variant::DOC_RETURN_REMOVED].push_back(
            detail::removal_record(b, Variant::DOC_RETURN_REMOVED));
        matrix[Variant::DOC_DESC_RETURN_REMOVED].push_back(
            detail::removal_record(b, Variant::DOC_DESC_RETURN_REMOVED));
    }

    std::map<std::pair<std::string, Variant>, const PerturbationRecord*> by_key;
    for (const auto& r : mutation_records) {
        if (!r.is_mutation_family())
            throw Error("BAD_ENUM", "matrix input is not a mutation record",
                        to_string(r.variant));
        by_key[{r.sample_id(), r.variant}] = &r;
    }

    std::string missing;
    for (const auto& b : accepted) {
        for (Variant v : mutation_variants()) {
            auto it = by_key.find({b.sample_id, v});
            if (it == by_key.end()) {
                if (!missing.empty()) missing += ", ";
                missing += "(" + b.sample_id + ", " + to_string(v) + ")";
            } else {
                matrix[v].push_back(*it->second);
            }
        }
    }
    if (!missing.empty())
        throw Error("MATRIX_INCOMPLETE", "variants missing for some samples", missing);

    for (Variant v : mutation_variants()) {
        std::map<Severity, size_t> hist;
        for (const auto& r : matrix[v])
            if (r.severity) ++hist[*r.severity];
        size_t lo = matrix[v].size(), hi = 0;
        for (Severity s : {Severity::HEAVY, Severity::NORMAL, Severity::SUBTLE}) {
            lo = std::min(lo, hist[s]);
            hi = std::max(hi, hist[s]);
        }
        if (!matrix[v].empty() && hi - lo > 1)
            throw Error("MATRIX_UNBALANCED",
                        "severity histogram for " + to_string(v) + " deviates beyond +-1");
    }

    for (auto& [variant, records] : matrix)
        std::sort(records.begin(), records.end(),
                  [](const PerturbationRecord& a, const PerturbationRecord& b) {
                      return a.sample_id() < b.sample_id();
                  });
    return matrix;
}

inline size_t matrix_record_count(const VariantMatrix& m) {
    size_t total = 0;
    for (const auto& [v, records] : m) total += records.size();
    return total;
}

// Review-queue entry for manual verification of accepted mutations. The
// pipeline does not block on review; status starts PENDING.
inline json review_queue_entry(const PerturbationRecord& r) {
    json j{{"sample_id", r.sample_id()},
           {"variant", to_string(r.variant)},
           {"ground_truth_summary", r.ground_truth_summary},
           {"review_status", "PENDING"}};
    if (r.severity) j["severity"] = to_string(*r.severity);
    if (r.strategy) j["strategy"] = to_string(*r.strategy);
    return j;
}

}  // namespace trustbench
