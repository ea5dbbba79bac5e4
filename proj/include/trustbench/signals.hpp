#pragma once

// Conflict-signal derivation from a validated trace. Three primary
// signals target the Javadoc-MUT relationship:
//   PCA  - the Javadoc/MUT pairwise verdict is CONTRADICTORY
//   IC   - some identified conflict involves both Javadoc and MUT
//   IR   - an inconsistency is flagged with both Javadoc and MUT among
//          the affected artifacts (the strict, primary detection signal)
// Union fires when any primary signal fires; Majority when at least two do.

#include <string>

#include "trustbench/trace.hpp"

namespace trustbench {

struct SignalVector {
    bool pca_fires = false;
    bool ic_fires = false;
    bool ir_fires = false;
    bool union_fires = false;
    bool majority_fires = false;
    std::string pca_text, ic_text, ir_text;  // empty when the signal did not fire

    bool fires(Signal s) const {
        switch (s) {
            case Signal::PCA: return pca_fires;
            case Signal::IC: return ic_fires;
            case Signal::IR: return ir_fires;
            case Signal::UNION: return union_fires;
            case Signal::MAJORITY: return majority_fires;
        }
        return false;
    }

    const std::string& text(Signal s) const {
        static const std::string empty;
        switch (s) {
            case Signal::PCA: return pca_text;
            case Signal::IC: return ic_text;
            case Signal::IR: return ir_text;
            default: return empty;
        }
    }

    bool operator==(const SignalVector&) const = default;
};

inline SignalVector derive_signals(const ReasoningTrace& trace) {
    SignalVector s;

    const PairwiseVerdict* jm = trace.consistency.pair_entry(Artifact::JAVADOC, Artifact::MUT);
    if (jm && jm->verdict == Verdict::CONTRADICTORY) {
        s.pca_fires = true;
        s.pca_text = !jm->rationale.empty()
                         ? jm->rationale
                         : "Javadoc and MUT pairwise verdict: CONTRADICTORY";
    }

    for (const auto& c : trace.consistency.identified_conflicts) {
        if (c.involved_artifacts.count(Artifact::JAVADOC) &&
            c.involved_artifacts.count(Artifact::MUT)) {
            s.ic_fires = true;
            if (!c.description.empty()) {
                if (!s.ic_text.empty()) s.ic_text += "; ";
                s.ic_text += c.description;
            }
        }
    }
    if (s.ic_fires && s.ic_text.empty())
        s.ic_text = "Conflict identified between Javadoc and MUT";

    const auto& ir = trace.consistency.inconsistency;
    if (ir.has_inconsistency && ir.affected_artifacts.count(Artifact::JAVADOC) &&
        ir.affected_artifacts.count(Artifact::MUT)) {
        s.ir_fires = true;
        s.ir_text = !ir.description.empty()
                        ? ir.description
                        : "Inconsistency reported affecting Javadoc and MUT";
    }

    int fired = (s.pca_fires ? 1 : 0) + (s.ic_fires ? 1 : 0) + (s.ir_fires ? 1 : 0);
    s.union_fires = fired >= 1;
    s.majority_fires = fired >= 2;
    return s;
}

inline json to_json(const SignalVector& s) {
    return json{{"pca_fires", s.pca_fires},     {"ic_fires", s.ic_fires},
                {"ir_fires", s.ir_fires},       {"union_fires", s.union_fires},
                {"majority_fires", s.majority_fires},
                {"pca_text", s.pca_text},       {"ic_text", s.ic_text},
                {"ir_text", s.ir_text}};
}

inline SignalVector signal_vector_from_json(const json& j) {
    SignalVector s;
    s.pca_fires = j.value("pca_fires", false);
    s.ic_fires = j.value("ic_fires", false);
    s.ir_fires = j.value("ir_fires", false);
    s.union_fires = j.value("union_fires", false);
    s.majority_fires = j.value("majority_fires", false);
    s.pca_text = j.value("pca_text", "");
    s.ic_text = j.value("ic_text", "");
    s.ir_text = j.value("ir_text", "");
    return s;
}

}  // namespace trustbench
