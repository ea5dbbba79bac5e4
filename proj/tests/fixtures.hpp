#pragma once

// Shared hand-authored fixtures: the 50-candidate curation corpus with
// designed pass/fail labels, the documentation-block corpus for the
// deterministic transforms, and canonical trace builders.

#include <string>
#include <vector>

#include "trustbench/auditor.hpp"
#include "trustbench/bundle.hpp"
#include "trustbench/trace.hpp"

namespace fixtures {

using namespace trustbench;

// Body with an exact executable-line count (>= 5): an if, a for, filler
// assignments through calls, and a return. Two control-flow constructs,
// so every generated body is nontrivial.
inline std::string body_with_lines(int exec_lines, const std::string& tag = "v") {
    std::string body = "{\n";
    body += "    if (seed > 0) {\n";           // 1
    body += "        seed = seed + 1;\n";      // 2
    body += "    }\n";
    body += "    for (int i = 0; i < seed; i++) {\n";  // 3
    body += "        seed = seed - 1;\n";      // 4
    body += "    }\n";
    for (int k = 0; k < exec_lines - 5; ++k)
        body += "    int " + tag + std::to_string(k) + " = helper(seed);\n";
    body += "    return seed;\n";              // exec_lines
    body += "}";
    return body;
}

inline std::string make_javadoc(const std::vector<std::string>& prose,
                                const std::vector<std::string>& tags) {
    std::string doc = "/**\n";
    for (const auto& p : prose) doc += " * " + p + "\n";
    for (const auto& t : tags) doc += " * " + t + "\n";
    doc += " */";
    return doc;
}

inline ArtifactBundle make_bundle(const std::string& id, const std::string& javadoc,
                                  const std::string& signature, const std::string& body,
                                  const std::string& prefix =
                                      "Calculator calc = new Calculator();\n"
                                      "int result = calc.run(7);") {
    ArtifactBundle b;
    b.sample_id = id;
    b.javadoc = javadoc;
    b.signature = signature;
    b.mut_body = body;
    b.test_prefix = prefix;
    b.origin = {"fixtures/" + id + ".java", "run"};
    return b;
}

// A canonical accepted bundle; `salt` makes (mut_body, javadoc) unique.
inline ArtifactBundle passing_bundle(const std::string& id, int salt = 0) {
    std::string doc = make_javadoc(
        {"Accumulates the bounded total of series " + std::to_string(salt) + ",",
         "skipping entries that exceed the configured limit."},
        {"@param seed the accumulation seed", "@return the accumulated total"});
    ArtifactBundle b =
        make_bundle(id, doc, "public int accumulate" + std::to_string(salt) + "(int seed)",
                    body_with_lines(10, "s" + std::to_string(salt)));
    b.reference_assertion = "assertEquals(" + std::to_string(salt) + ", result);";
    return b;
}

struct LabeledCandidate {
    ArtifactBundle bundle;
    bool should_pass;
};

// The 50-candidate corpus: exactly 18 designed to pass, 32 designed to
// fail, labels assigned by hand before the filter existed.
inline std::vector<LabeledCandidate> curation_corpus() {
    std::vector<LabeledCandidate> corpus;
    auto pass = [&](ArtifactBundle b) { corpus.push_back({std::move(b), true}); };
    auto fail = [&](ArtifactBundle b) { corpus.push_back({std::move(b), false}); };

    // ---- designed to pass (18) ----
    pass(passing_bundle("p01", 1));
    // void method: exempt from @return
    pass(make_bundle("p02",
                     make_javadoc({"Rebalances the internal buckets after a burst of",
                                   "insertions, compacting sparse regions."},
                                  {"@param seed the rebalance seed"}),
                     "public void rebalance(int seed)", body_with_lines(12, "rb")));
    // boundary: exactly 8 executable lines
    pass(make_bundle("p03",
                     make_javadoc({"Derives the retry budget for the current window."},
                                  {"@param seed the window seed", "@return the retry budget"}),
                     "public int retryBudget(int seed)", body_with_lines(8, "rt")));
    // boundary: exactly 60 executable lines
    pass(make_bundle("p04",
                     make_javadoc({"Expands the staged configuration into its flattened",
                                   "runtime form, resolving every placeholder."},
                                  {"@param seed the staging seed", "@return the flattened size"}),
                     "public int expandConfiguration(int seed)", body_with_lines(60, "ex")));
    // accessor-prefixed name with a genuinely nontrivial body
    pass(make_bundle("p05",
                     make_javadoc({"Aggregates the cached totals across generations and",
                                   "refreshes stale buckets on the way."},
                                  {"@param seed the cache seed", "@return the aggregate"}),
                     "public int getAggregate(int seed)", body_with_lines(14, "ga")));
    // straight-line but substantial: 4 assignments and 4 calls
    pass(make_bundle(
        "p06",
        make_javadoc({"Publishes the staged snapshot to every registered sink."},
                     {"@param seed the snapshot seed", "@return the publication count"}),
        "public int publishSnapshot(int seed)",
        "{\n"
        "    int staged = prepare(seed);\n"
        "    int written = sinkA(staged);\n"
        "    int mirrored = sinkB(written);\n"
        "    int audited = audit(mirrored);\n"
        "    count = count + audited;\n"
        "    total = total + staged;\n"
        "    sum = sum + written;\n"
        "    return audited;\n"
        "}"));
    // parameterless method: @param not required
    pass(make_bundle("p07",
                     make_javadoc({"Drains the pending queue and reports how many entries",
                                   "were flushed to the journal."},
                                  {"@return the number of flushed entries"}),
                     "public int drainPending()", body_with_lines(11, "dp")));
    for (int i = 8; i <= 18; ++i)
        pass(passing_bundle("p" + std::to_string(i), i));

    // ---- designed to fail (32) ----
    auto doc_ok = make_javadoc({"Counts the widgets currently tracked by this registry."},
                               {"@param seed the registry seed", "@return the widget count"});

    // line bounds
    fail(make_bundle("f01", doc_ok, "public int countA(int seed)", body_with_lines(7, "a")));
    fail(make_bundle("f02", doc_ok, "public int countB(int seed)", body_with_lines(61, "b")));
    // trivial single-line wrapper
    fail(make_bundle("f03", doc_ok, "public int countC(int seed)",
                     "{ return delegate.count(seed); }"));
    // constructor
    fail(make_bundle("f04", doc_ok, "public Registry(int seed)", body_with_lines(10, "c")));
    // entry point
    fail(make_bundle("f05", doc_ok, "public static void main(String[] args)",
                     body_with_lines(10, "d")));
    // trivial getter
    fail(make_bundle("f06", doc_ok, "public int getCount(int seed)",
                     "{ return this.count; }"));
    // inline line comment
    fail(make_bundle("f07", doc_ok, "public int countD(int seed)",
                     "{\n"
                     "    int total = 0;\n"
                     "    // accumulate everything\n"
                     "    if (seed > 0) {\n"
                     "        total = total + seed;\n"
                     "    }\n"
                     "    for (int i = 0; i < seed; i++) {\n"
                     "        total = total + i;\n"
                     "    }\n"
                     "    log.trace(total);\n"
                     "    audit(total);\n"
                     "    touch(total);\n"
                     "    return total;\n"
                     "}"));
    // inline block comment
    fail(make_bundle("f08", doc_ok, "public int countE(int seed)",
                     "{\n"
                     "    int total = 0;\n"
                     "    /* bounded */\n"
                     "    if (seed > 0) {\n"
                     "        total = total + seed;\n"
                     "    }\n"
                     "    for (int i = 0; i < seed; i++) {\n"
                     "        total = total + i;\n"
                     "    }\n"
                     "    log.trace(total);\n"
                     "    audit(total);\n"
                     "    touch(total);\n"
                     "    return total;\n"
                     "}"));
    // embedded documentation block (extraction artifact)
    fail(make_bundle("f09", doc_ok, "public int countF(int seed)",
                     "{\n"
                     "    int total = 0;\n"
                     "    /** Embedded doc. */\n"
                     "    if (seed > 0) {\n"
                     "        total = total + seed;\n"
                     "    }\n"
                     "    for (int i = 0; i < seed; i++) {\n"
                     "        total = total + i;\n"
                     "    }\n"
                     "    log.trace(total);\n"
                     "    audit(total);\n"
                     "    touch(total);\n"
                     "    return total;\n"
                     "}"));
    // inherited documentation
    fail(make_bundle("f10", "/** {@inheritDoc} */", "public int countG(int seed)",
                     body_with_lines(10, "g")));
    // description of exactly 15 characters (must be longer than 15)
    fail(make_bundle("f11", make_javadoc({"Counts widgets."},
                                         {"@param seed the seed", "@return the count"}),
                     "public int countH(int seed)", body_with_lines(10, "h")));
    // tag-only documentation
    fail(make_bundle("f12",
                     make_javadoc({}, {"@param seed the seed", "@return the count"}),
                     "public int countI(int seed)", body_with_lines(10, "i")));
    // non-English description
    fail(make_bundle("f13",
                     make_javadoc({"\xE7\xBB\x9F\xE8\xAE\xA1\xE5\xBD\x93\xE5\x89\x8D\xE8\xB7"
                                   "\x9F\xE8\xB8\xAA\xE7\x9A\x84\xE9\x83\xA8\xE4\xBB\xB6\xE6"
                                   "\x95\xB0\xE9\x87\x8F\xE3\x80\x82"},
                                  {"@param seed the seed", "@return the count"}),
                     "public int countJ(int seed)", body_with_lines(10, "j")));
    // usage warning only
    fail(make_bundle("f14",
                     make_javadoc({"BEWARE: don't call this directly."},
                                  {"@param seed the seed", "@return the count"}),
                     "public int countK(int seed)", body_with_lines(10, "k")));
    // non-void without @return
    fail(make_bundle("f15",
                     make_javadoc({"Counts the widgets currently tracked by the registry."},
                                  {"@param seed the seed"}),
                     "public int countL(int seed)", body_with_lines(10, "l")));
    // parameters without any @param
    fail(make_bundle("f16",
                     make_javadoc({"Counts the widgets currently tracked by the registry."},
                                  {"@return the count"}),
                     "public int countM(int seed)", body_with_lines(10, "m")));
    // test prefix below 20 characters
    fail(make_bundle("f17", doc_ok, "public int countN(int seed)", body_with_lines(10, "n"),
                     "short prefix here;"));
    // empty documentation
    fail(make_bundle("f18", "", "public int countO(int seed)", body_with_lines(10, "o")));
    // duplicates of p01's (mut_body, javadoc)
    {
        ArtifactBundle dup1 = passing_bundle("f19", 1);
        ArtifactBundle dup2 = passing_bundle("f20", 1);
        fail(dup1);
        fail(dup2);
    }
    // one control-flow element, sparse body
    fail(make_bundle("f21", doc_ok, "public int countP(int seed)",
                     "{\n"
                     "    int total = prepare(seed);\n"
                     "    if (total > 0) {\n"
                     "        total = clamp(total);\n"
                     "    }\n"
                     "    log.trace(total);\n"
                     "    touch(total);\n"
                     "    mark(total);\n"
                     "    note(total);\n"
                     "    return total;\n"
                     "}"));
    // five assignments, three calls, no branches
    fail(make_bundle("f22", doc_ok, "public int countQ(int seed)",
                     "{\n"
                     "    int a = seed;\n"
                     "    int b = a;\n"
                     "    int c = b;\n"
                     "    int d = c;\n"
                     "    int e = d;\n"
                     "    log.trace(e);\n"
                     "    audit(e);\n"
                     "    touch(e);\n"
                     "    return e;\n"
                     "}"));
    // empty body
    fail(make_bundle("f23", doc_ok, "public int countR(int seed)", "{}"));
    // warning plus too-short remainder
    fail(make_bundle("f24",
                     make_javadoc({"BEWARE!"},
                                  {"@param seed the seed", "@return the count"}),
                     "public int countS(int seed)", body_with_lines(10, "s")));
    // both documentation tags missing
    fail(make_bundle("f25",
                     make_javadoc({"Counts the widgets currently tracked by the registry."},
                                  {}),
                     "public int countT(int seed)", body_with_lines(10, "t")));
    // Cyrillic description
    fail(make_bundle("f26",
                     make_javadoc({"\xD0\xA1\xD1\x87\xD0\xB8\xD1\x82\xD0\xB0\xD0\xB5\xD1\x82 "
                                   "\xD0\xB2\xD0\xB8\xD0\xB4\xD0\xB6\xD0\xB5\xD1\x82\xD1\x8B "
                                   "\xD1\x80\xD0\xB5\xD0\xB5\xD1\x81\xD1\x82\xD1\x80\xD0\xB0."},
                                  {"@param seed the seed", "@return the count"}),
                     "public int countU(int seed)", body_with_lines(10, "u")));
    // trivial instance accessor
    fail(make_bundle("f27", doc_ok, "public Registry getInstance()",
                     "{ return INSTANCE; }",
                     "Registry registry = Registry.getInstance();"));
    // trivial setter
    fail(make_bundle("f28", doc_ok, "public void setValue(int seed)",
                     "{ this.value = seed; }"));
    // second entry point shape
    fail(make_bundle("f29", doc_ok, "static void main(String[] args)",
                     body_with_lines(12, "w")));
    // second constructor shape
    fail(make_bundle("f30", doc_ok, "protected Registry(String name, int seed)",
                     body_with_lines(12, "x")));
    // oversized and trivial: 61 call-only lines
    {
        std::string big = "{\n";
        for (int k = 0; k < 61; ++k) big += "    probe(seed);\n";
        big += "}";
        fail(make_bundle("f31", doc_ok, "public int countV(int seed)", big));
    }
    // missing documentation and short prefix together
    fail(make_bundle("f32", "", "public int countW(int seed)", body_with_lines(10, "y"),
                     "x.run();"));

    return corpus;
}

// ---- documentation-block corpus (22 blocks) -----------------------------

struct DocFixture {
    std::string name;
    std::string javadoc;
    bool has_return = false;
    bool has_prose = false;
};

inline std::vector<DocFixture> doc_corpus() {
    std::vector<DocFixture> docs;
    auto add = [&](std::string name, std::string doc, bool ret, bool prose) {
        docs.push_back({std::move(name), std::move(doc), ret, prose});
    };

    add("plain", make_javadoc({"Computes the bounded total."},
                              {"@param x the input", "@return the total"}),
        true, true);
    add("multi_prose", make_javadoc({"Computes the bounded total of the series,",
                                     "skipping entries beyond the limit.",
                                     "Negative entries are ignored."},
                                    {"@param x the input", "@return the total"}),
        true, true);
    add("wrapped_return",
        "/**\n * Resolves the active profile.\n * @param name the profile name\n"
        " * @return the resolved profile, or the default profile\n"
        " *         when no profile matches the name\n */",
        true, true);
    add("return_then_throws",
        "/**\n * Opens the channel.\n * @param id the channel id\n"
        " * @return the open channel\n * @throws IllegalStateException when closed\n */",
        true, true);
    add("tags_only", make_javadoc({}, {"@param x the input", "@return the total"}), true,
        false);
    add("prose_only", make_javadoc({"Normalizes the internal buffer in place."}, {}), false,
        true);
    add("no_return", make_javadoc({"Flushes pending writes to the journal."},
                                  {"@param force whether to force a sync"}),
        false, true);
    add("throws_only",
        make_javadoc({"Validates the staged configuration."},
                     {"@param cfg the staged configuration",
                      "@throws ConfigException when a key is unresolved"}),
        false, true);
    add("multi_param",
        make_javadoc({"Merges two windows into one contiguous range."},
                     {"@param lo the lower window", "@param hi the upper window",
                      "@return the merged range"}),
        true, true);
    add("blank_lines",
        "/**\n * Computes the checksum.\n *\n * The checksum is stable across runs.\n *\n"
        " * @param data the payload\n * @return the checksum\n */",
        true, true);
    add("see_tag",
        make_javadoc({"Schedules the task on the shared executor."},
                     {"@param task the task to run", "@see java.util.concurrent.Executor",
                      "@return the ticket"}),
        true, true);
    add("single_line", "/** Rotates the ring buffer by one slot. */", false, true);
    add("return_last",
        make_javadoc({"Counts distinct keys."}, {"@param keys the keys", "@return the count"}),
        true, true);
    add("return_first",
        "/**\n * Reads the header.\n * @return the parsed header\n * @param raw the raw bytes\n */",
        true, true);
    add("long_continuation",
        "/**\n * Applies the retention policy.\n * @param limit the retention limit\n"
        " * @return the number of evicted entries, which is zero when the\n"
        " *         store is already within the configured bound and grows\n"
        " *         with each additional generation beyond it\n */",
        true, true);
    add("inline_code",
        make_javadoc({"Parses the literal using {@code Integer.parseInt}."},
                     {"@param text the literal text", "@return the parsed value"}),
        true, true);
    add("deprecated",
        make_javadoc({"Computes the legacy digest for migration clients."},
                     {"@param data the payload", "@deprecated use digest2",
                      "@return the digest"}),
        true, true);
    add("multi_return_continuation",
        "/**\n * Estimates the cost.\n * @param plan the plan\n"
        " * @return the estimated cost\n *         in abstract units\n"
        " * @throws PlanException when the plan is unresolved\n */",
        true, true);
    add("no_tags_multi",
        make_javadoc({"Compacts the segment file in place and refreshes",
                      "the index pointers afterwards."},
                     {}),
        false, true);
    add("param_only", make_javadoc({"Registers the listener for churn events."},
                                   {"@param listener the listener"}),
        false, true);
    add("three_tags",
        make_javadoc({"Splits the range into shards."},
                     {"@param range the source range", "@param shards the shard count",
                      "@return the shard list"}),
        true, true);
    add("uppercase_prose",
        make_javadoc({"Computes the CRC32 of the frame body."},
                     {"@param frame the frame", "@return the CRC32 value"}),
        true, true);

    return docs;
}

// ---- trace fixture --------------------------------------------------------

// Fully populated valid trace; deterministic content for round-trip tests.
inline ReasoningTrace canonical_trace() {
    ReasoningTrace t;
    t.sample_id = "fixture-001";
    t.variant = Variant::BASE;
    t.model_id = "fixture-model";

    auto entry = [](double score, Label label, const std::string& ev) {
        AssessmentEntry e;
        e.score = score;
        e.label = label;
        e.evidence = ev;
        return e;
    };
    t.assessment.javadoc = entry(0.85, Label::HIGH, "clear and complete");
    t.assessment.signature = entry(0.90, Label::HIGH, "fully typed");
    t.assessment.mut = entry(0.80, Label::HIGH, "coherent logic");
    t.assessment.test_prefix = entry(0.75, Label::HIGH, "exercises the method");
    t.assessment.overall = entry(0.82, Label::HIGH, "bundle is consistent");

    t.prioritization.ranking = {{Artifact::SIGNATURE, 1, 0.9},
                                {Artifact::MUT, 2, 0.8},
                                {Artifact::JAVADOC, 3, 0.7},
                                {Artifact::TEST_PREFIX, 4, 0.6}};

    for (const auto& [a, b] : artifact_pairs())
        t.consistency.pairwise.push_back({a, b, Verdict::CONSISTENT, "aligned"});
    t.consistency.inconsistency = {false, {}, ""};
    t.consistency.anomaly = {false, ""};
    t.consistency.behavioral_hypothesis = "Behavior follows the documented contract.";

    t.metadata.assumptions = "none";
    t.metadata.limitations = "static reading only";
    t.metadata.uncertainty = "low";
    t.overall_confidence = 0.88;
    return t;
}

}  // namespace fixtures
