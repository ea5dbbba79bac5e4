#pragma once

// Artifact bundles and their perturbed variants.
//
// An ArtifactBundle is one sample: the method under test, its declaration,
// its documentation, and the test setup/invocation that frames the scenario.
// A PerturbationRecord is an aligned variant of a bundle plus provenance
// describing what was changed and how hard the change is to spot.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustbench/types.hpp"

namespace trustbench {

using nlohmann::json;

struct Origin {
    std::string file;
    std::string method;

    bool operator==(const Origin&) const = default;
};

struct ArtifactBundle {
    std::string sample_id;
    std::string mut_body;
    std::string signature;
    std::string javadoc;
    std::string test_prefix;
    std::optional<std::string> reference_assertion;
    Origin origin;

    bool operator==(const ArtifactBundle&) const = default;

    const std::string& artifact_text(Artifact a) const {
        switch (a) {
            case Artifact::JAVADOC: return javadoc;
            case Artifact::SIGNATURE: return signature;
            case Artifact::MUT: return mut_body;
            case Artifact::TEST_PREFIX: return test_prefix;
        }
        throw Error("BAD_ENUM", "unknown artifact");
    }
};

inline json to_json(const ArtifactBundle& b) {
    json j{{"sample_id", b.sample_id},
           {"mut_body", b.mut_body},
           {"signature", b.signature},
           {"javadoc", b.javadoc},
           {"test_prefix", b.test_prefix},
           {"origin", {{"file", b.origin.file}, {"method", b.origin.method}}}};
    if (b.reference_assertion) j["reference_assertion"] = *b.reference_assertion;
    return j;
}

inline ArtifactBundle bundle_from_json(const json& j) {
    ArtifactBundle b;
    b.sample_id = j.at("sample_id").get<std::string>();
    b.mut_body = j.value("mut_body", "");
    b.signature = j.value("signature", "");
    b.javadoc = j.value("javadoc", "");
    b.test_prefix = j.value("test_prefix", "");
    if (j.contains("reference_assertion") && !j["reference_assertion"].is_null())
        b.reference_assertion = j["reference_assertion"].get<std::string>();
    if (j.contains("origin")) {
        b.origin.file = j["origin"].value("file", "");
        b.origin.method = j["origin"].value("method", "");
    }
    return b;
}

// One aligned variant of a bundle. For removal variants only `javadoc`
// differs from the base; for mutation families the mutated artifact(s)
// replace the base values and provenance metadata is populated.
struct PerturbationRecord {
    ArtifactBundle bundle;  // with mutated fields already applied
    Variant variant = Variant::BASE;
    std::optional<Severity> severity;        // mutation families only
    std::optional<Strategy> strategy;        // CONTRADICTION only
    std::optional<FaultCategory> fault_category;
    std::set<Artifact> affected_artifacts;   // artifacts that were modified
    std::string ground_truth_summary;        // one-line fault description

    const std::string& sample_id() const { return bundle.sample_id; }

    bool is_mutation_family() const {
        return variant == Variant::DOC_BUG || variant == Variant::MUT_BUG ||
               variant == Variant::CONTRADICTION;
    }
};

// Which artifacts a variant is allowed to modify.
inline std::set<Artifact> expected_affected(Variant v, std::optional<Strategy> strategy) {
    switch (v) {
        case Variant::BASE: return {};
        case Variant::DOC_DESC_REMOVED:
        case Variant::DOC_RETURN_REMOVED:
        case Variant::DOC_DESC_RETURN_REMOVED:
        case Variant::DOC_BUG: return {Artifact::JAVADOC};
        case Variant::MUT_BUG: return {Artifact::MUT};
        case Variant::CONTRADICTION:
            if (!strategy) throw Error("MISSING_METADATA", "CONTRADICTION requires a strategy");
            switch (*strategy) {
                case Strategy::MUT_ONLY: return {Artifact::MUT};
                case Strategy::DOCSTRING_ONLY: return {Artifact::JAVADOC};
                case Strategy::BOTH: return {Artifact::JAVADOC, Artifact::MUT};
            }
    }
    return {};
}

inline json to_json(const PerturbationRecord& r) {
    json j = to_json(r.bundle);
    j["variant"] = to_string(r.variant);
    if (r.severity) j["severity"] = to_string(*r.severity);
    if (r.strategy) j["strategy"] = to_string(*r.strategy);
    if (r.fault_category) j["fault_category"] = to_string(*r.fault_category);
    json affected = json::array();
    for (Artifact a : r.affected_artifacts) affected.push_back(to_string(a));
    j["affected_artifacts"] = affected;
    j["ground_truth_summary"] = r.ground_truth_summary;
    return j;
}

inline PerturbationRecord perturbation_from_json(const json& j) {
    PerturbationRecord r;
    r.bundle = bundle_from_json(j);
    auto v = variant_from_string(j.at("variant").get<std::string>());
    if (!v) throw Error("BAD_ENUM", "unknown variant", j["variant"].get<std::string>());
    r.variant = *v;
    if (j.contains("severity") && !j["severity"].is_null()) {
        auto s = severity_from_string(j["severity"].get<std::string>());
        if (!s) throw Error("BAD_ENUM", "unknown severity", j["severity"].get<std::string>());
        r.severity = s;
    }
    if (j.contains("strategy") && !j["strategy"].is_null()) {
        auto s = strategy_from_string(j["strategy"].get<std::string>());
        if (!s) throw Error("BAD_ENUM", "unknown strategy", j["strategy"].get<std::string>());
        r.strategy = s;
    }
    if (j.contains("fault_category") && !j["fault_category"].is_null()) {
        auto c = fault_category_from_string(j["fault_category"].get<std::string>());
        if (!c)
            throw Error("BAD_ENUM", "unknown fault_category",
                        j["fault_category"].get<std::string>());
        r.fault_category = c;
    }
    for (const auto& a : j.value("affected_artifacts", json::array())) {
        auto art = artifact_from_string(a.get<std::string>());
        if (!art) throw Error("BAD_ENUM", "unknown artifact", a.get<std::string>());
        r.affected_artifacts.insert(*art);
    }
    r.ground_truth_summary = j.value("ground_truth_summary", "");
    return r;
}

// Wraps a clean bundle as the BASE row of the variant matrix.
inline PerturbationRecord as_base_record(const ArtifactBundle& b) {
    PerturbationRecord r;
    r.bundle = b;
    r.variant = Variant::BASE;
    return r;
}

}  // namespace trustbench
