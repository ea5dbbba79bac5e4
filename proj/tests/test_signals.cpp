#include <doctest.h>

#include <random>

#include "trustbench/signals.hpp"

#include "fixtures.hpp"

using namespace trustbench;

namespace {

// Builds a trace whose primary signals are forced to the given pattern.
ReasoningTrace trace_with(bool pca, bool ic, bool ir) {
    ReasoningTrace t = fixtures::canonical_trace();
    if (pca)
        for (auto& p : t.consistency.pairwise)
            if ((p.first == Artifact::JAVADOC && p.second == Artifact::MUT) ||
                (p.first == Artifact::MUT && p.second == Artifact::JAVADOC)) {
                p.verdict = Verdict::CONTRADICTORY;
                p.rationale = "doc claims X, code does Y";
            }
    if (ic)
        t.consistency.identified_conflicts.push_back(
            {{Artifact::JAVADOC, Artifact::MUT}, "doc/code conflict"});
    if (ir) {
        t.consistency.inconsistency.has_inconsistency = true;
        t.consistency.inconsistency.affected_artifacts = {Artifact::JAVADOC, Artifact::MUT};
        t.consistency.inconsistency.description = "doc and code disagree";
    }
    return t;
}

}  // namespace

TEST_CASE("derive_signals: clean trace fires nothing") {
    SignalVector s = derive_signals(fixtures::canonical_trace());
    CHECK_FALSE(s.pca_fires);
    CHECK_FALSE(s.ic_fires);
    CHECK_FALSE(s.ir_fires);
    CHECK_FALSE(s.union_fires);
    CHECK_FALSE(s.majority_fires);
    CHECK(s.pca_text.empty());
    CHECK(s.ic_text.empty());
    CHECK(s.ir_text.empty());
}

TEST_CASE("derive_signals: single pairwise contradiction fires union only") {
    SignalVector s = derive_signals(trace_with(true, false, false));
    CHECK(s.pca_fires);
    CHECK(s.union_fires);
    CHECK_FALSE(s.majority_fires);
}

TEST_CASE("derive_signals: full eight-combination truth table") {
    for (int mask = 0; mask < 8; ++mask) {
        bool pca = mask & 1, ic = mask & 2, ir = mask & 4;
        SignalVector s = derive_signals(trace_with(pca, ic, ir));
        INFO("mask ", mask);
        CHECK(s.pca_fires == pca);
        CHECK(s.ic_fires == ic);
        CHECK(s.ir_fires == ir);
        int fired = int(pca) + int(ic) + int(ir);
        CHECK(s.union_fires == (fired >= 1));
        CHECK(s.majority_fires == (fired >= 2));
        // texts are non-empty exactly for fired signals
        CHECK(s.pca_text.empty() == !pca);
        CHECK(s.ic_text.empty() == !ic);
        CHECK(s.ir_text.empty() == !ir);
    }
}

TEST_CASE("derive_signals: IC requires both Javadoc and MUT involved") {
    ReasoningTrace t = fixtures::canonical_trace();
    t.consistency.identified_conflicts.push_back(
        {{Artifact::JAVADOC, Artifact::SIGNATURE}, "doc/signature mismatch"});
    CHECK_FALSE(derive_signals(t).ic_fires);

    t.consistency.identified_conflicts.push_back(
        {{Artifact::JAVADOC, Artifact::MUT, Artifact::TEST_PREFIX}, "three-way"});
    CHECK(derive_signals(t).ic_fires);
}

TEST_CASE("derive_signals: IR-strict requires both artifacts affected") {
    ReasoningTrace t = fixtures::canonical_trace();
    t.consistency.inconsistency.has_inconsistency = true;
    t.consistency.inconsistency.affected_artifacts = {Artifact::MUT};
    t.consistency.inconsistency.description = "code-side drift";
    CHECK_FALSE(derive_signals(t).ir_fires);

    t.consistency.inconsistency.affected_artifacts = {Artifact::MUT, Artifact::JAVADOC};
    CHECK(derive_signals(t).ir_fires);
}

TEST_CASE("derive_signals: INCOMPLETE pairwise verdict does not fire PCA") {
    ReasoningTrace t = fixtures::canonical_trace();
    for (auto& p : t.consistency.pairwise) p.verdict = Verdict::INCOMPLETE;
    CHECK_FALSE(derive_signals(t).pca_fires);
}

TEST_CASE("derive_signals: implications hold on 1000 randomized traces") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < 1000; ++i) {
        SignalVector s = derive_signals(trace_with(coin(rng), coin(rng), coin(rng)));
        if (s.ir_fires) CHECK(s.union_fires);
        if (s.majority_fires) CHECK(s.union_fires);
        int fired = int(s.pca_fires) + int(s.ic_fires) + int(s.ir_fires);
        CHECK(s.union_fires == (fired >= 1));
        CHECK(s.majority_fires == (fired >= 2));
    }
}

TEST_CASE("derive_signals: conflict descriptions are joined into the IC text") {
    ReasoningTrace t = fixtures::canonical_trace();
    t.consistency.identified_conflicts.push_back(
        {{Artifact::JAVADOC, Artifact::MUT}, "first conflict"});
    t.consistency.identified_conflicts.push_back(
        {{Artifact::JAVADOC, Artifact::MUT}, "second conflict"});
    SignalVector s = derive_signals(t);
    CHECK(s.ic_text == "first conflict; second conflict");
}

TEST_CASE("signal vector JSON round-trip") {
    SignalVector s = derive_signals(trace_with(true, false, true));
    SignalVector back = signal_vector_from_json(to_json(s));
    CHECK(back == s);
}
