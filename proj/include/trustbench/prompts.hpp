#pragma once

// Prompt construction. The elicitation system prompt is a fixed constant:
// every cell of the run matrix receives the identical text, and its hash
// is recorded in the run summary so a resumed run cannot silently drift.
// The user prompt presents only the four artifacts as labeled sections.

#include <optional>
#include <string>
#include <string_view>

#include "trustbench/bundle.hpp"
#include "trustbench/types.hpp"

namespace trustbench::prompts {

inline constexpr const char* kJavadocHeader = "### Javadoc";
inline constexpr const char* kSignatureHeader = "### Signature";
inline constexpr const char* kMutHeader = "### MUT";
inline constexpr const char* kTestPrefixHeader = "### Test Prefix";

// Marker distinguishing mutation requests from elicitation requests on the
// shared chat-completion wire.
inline constexpr const char* kMutationSystemMarker = "artifact perturbation generator";

inline const std::string& elicitation_system_prompt() {
    static const std::string text = std::string() +
        "You are an expert software engineering analyst. You assess the quality and mutual "
        "consistency of a bundle of four artifacts: a Javadoc comment, a method signature, a "
        "method implementation (MUT), and a test prefix.\n"
        "\n"
        "Output constraints:\n"
        "- Respond with a single valid JSON object and nothing else: no surrounding text, no "
        "markdown fences, no reasoning tags.\n"
        "- All string values must use valid JSON escaping.\n"
        "\n"
        "Perspective:\n"
        "- No artifact is ground truth a priori. Do not default to trusting the MUT because it "
        "is executable, the Javadoc because it is documentation, or the test prefix because it "
        "is a test. Every artifact earns reliability only through cross-validation with the "
        "others.\n"
        "\n"
        "Your analysis must contain six components: an input-quality assessment of every "
        "artifact and of the bundle overall, a pairwise conflict analysis over all six artifact "
        "pairs, an enumeration of identified conflicts, an inconsistency report, an anomaly "
        "assessment, and a source prioritization.\n"
        "\n"
        "Scoring rules:\n"
        "- Every score is a number in [0.00, 1.00] with two decimal places.\n"
        "- Labels: LOW for scores below 0.40, MEDIUM for scores in [0.40, 0.70), HIGH for "
        "scores of 0.70 and above.\n"
        "- Source prioritization is a total order over JAVADOC, SIGNATURE, MUT, TEST_PREFIX "
        "(rank 1 = most reliable), each rank carrying a confidence in [0, 1].\n"
        "\n"
        "Reply with exactly this JSON shape:\n"
        "{\n"
        "  \"assessment\": {\n"
        "    \"javadoc\":     {\"score\": 0.00, \"label\": \"LOW|MEDIUM|HIGH\", \"evidence\": \"...\"},\n"
        "    \"signature\":   {\"score\": 0.00, \"label\": \"...\", \"evidence\": \"...\"},\n"
        "    \"mut\":         {\"score\": 0.00, \"label\": \"...\", \"evidence\": \"...\"},\n"
        "    \"test_prefix\": {\"score\": 0.00, \"label\": \"...\", \"evidence\": \"...\"},\n"
        "    \"overall\":     {\"score\": 0.00, \"label\": \"...\", \"evidence\": \"...\"}\n"
        "  },\n"
        "  \"prioritization\": {\"ranking\": [\n"
        "    {\"source\": \"JAVADOC|SIGNATURE|MUT|TEST_PREFIX\", \"rank\": 1, \"confidence\": 0.0}\n"
        "  ]},\n"
        "  \"consistency\": {\n"
        "    \"pairwise\": [{\"artifacts\": [\"JAVADOC\", \"MUT\"], \"verdict\": "
        "\"CONSISTENT|CONTRADICTORY|INCOMPLETE\", \"rationale\": \"...\"}],\n"
        "    \"identified_conflicts\": [{\"involved_artifacts\": [\"...\"], \"description\": \"...\"}],\n"
        "    \"inconsistency\": {\"has_inconsistency\": false, \"affected_artifacts\": [], "
        "\"description\": \"\"},\n"
        "    \"anomaly\": {\"flag\": false, \"description\": \"\"},\n"
        "    \"behavioral_hypothesis\": \"...\"\n"
        "  },\n"
        "  \"metadata\": {\"assumptions\": \"\", \"limitations\": \"\", \"uncertainty\": \"\"},\n"
        "  \"overall_confidence\": 0.0\n"
        "}\n";
    return text;
}

// Exactly four labeled sections; nothing else is inserted.
inline std::string blind_user_prompt(const ArtifactBundle& b) {
    std::string out;
    out += std::string(kJavadocHeader) + "\n" + b.javadoc + "\n\n";
    out += std::string(kSignatureHeader) + "\n" + b.signature + "\n\n";
    out += std::string(kMutHeader) + "\n" + b.mut_body + "\n\n";
    out += std::string(kTestPrefixHeader) + "\n" + b.test_prefix + "\n";
    return out;
}

struct PromptSections {
    std::string javadoc, signature, mut, test_prefix;
};

// Recovers the four artifact texts from a rendered user prompt. Headers
// are matched at line starts, in their fixed order.
inline std::optional<PromptSections> parse_user_prompt(std::string_view user_text) {
    auto find_header = [&](std::string_view header, size_t from) -> size_t {
        std::string needle = std::string(header) + "\n";
        if (user_text.substr(from).rfind(needle, 0) == 0) return from;
        std::string at_line = "\n" + needle;
        size_t pos = user_text.find(at_line, from);
        return pos == std::string_view::npos ? std::string_view::npos : pos + 1;
    };
    size_t h1 = find_header(kJavadocHeader, 0);
    if (h1 == std::string_view::npos) return std::nullopt;
    size_t h2 = find_header(kSignatureHeader, h1);
    if (h2 == std::string_view::npos) return std::nullopt;
    size_t h3 = find_header(kMutHeader, h2);
    if (h3 == std::string_view::npos) return std::nullopt;
    size_t h4 = find_header(kTestPrefixHeader, h3);
    if (h4 == std::string_view::npos) return std::nullopt;

    auto body = [&](size_t header_at, std::string_view header, size_t next) {
        size_t start = header_at + header.size() + 1;  // past header line
        std::string_view chunk = user_text.substr(start, next - start);
        // strip the blank separator appended after each section
        while (!chunk.empty() && chunk.back() == '\n') chunk.remove_suffix(1);
        return std::string(chunk);
    };
    PromptSections s;
    s.javadoc = body(h1, kJavadocHeader, h2);
    s.signature = body(h2, kSignatureHeader, h3);
    s.mut = body(h3, kMutHeader, h4);
    s.test_prefix = body(h4, kTestPrefixHeader, user_text.size());
    return s;
}

// ---- mutation request templates ----------------------------------------

inline std::string severity_instruction(Severity s) {
    switch (s) {
        case Severity::HEAVY:
            return "Severity HEAVY: introduce an explicit and readily observable "
                   "contradiction with the companion artifacts; the fault must be obvious "
                   "on a direct read.";
        case Severity::NORMAL:
            return "Severity NORMAL: introduce a plausible defect that manifests under "
                   "specific inputs or boundary conditions only.";
        case Severity::SUBTLE:
            return "Severity SUBTLE: introduce a minimal corner-case deviation that "
                   "requires careful cross-artifact reasoning to detect.";
    }
    return "";
}

inline std::string mutation_system_prompt() {
    return std::string("You are an ") + kMutationSystemMarker +
           ". You inject a single realistic fault into a Java artifact bundle.\n"
           "Hard constraints:\n"
           "- The method signature is held fixed: it must remain byte-identical.\n"
           "- The mutated artifact must remain natural and realistic, with no comments, "
           "markers, or formatting cues revealing the change.\n"
           "- Respond with a single valid JSON object and nothing else.\n";
}

struct MutationPrompt {
    std::string system_text;
    std::string user_text;
};

// Builds the structured mutation request for one (bundle, family, severity,
// strategy) cell. CONTRADICTION requests must carry a strategy; the check
// happens here, before any endpoint call.
inline MutationPrompt build_mutation_request(const ArtifactBundle& bundle, Variant variant,
                                             Severity severity,
                                             std::optional<Strategy> strategy = std::nullopt) {
    if (variant != Variant::DOC_BUG && variant != Variant::MUT_BUG &&
        variant != Variant::CONTRADICTION)
        throw Error("BAD_ENUM", "not a mutation family", to_string(variant));
    if (variant == Variant::CONTRADICTION && !strategy)
        throw Error("MISSING_METADATA", "CONTRADICTION request requires a strategy");
    if (variant != Variant::CONTRADICTION && strategy)
        throw Error("MISSING_METADATA", "strategy only applies to CONTRADICTION");

    json params{{"variant", to_string(variant)}, {"severity", to_string(severity)}};
    if (strategy) params["strategy"] = to_string(*strategy);

    std::string task;
    std::string reply_fields;
    switch (variant) {
        case Variant::DOC_BUG:
            task = "Rewrite the Javadoc so it mis-describes the unchanged implementation. "
                   "Leave the MUT untouched.";
            reply_fields =
                "{\"mutated_javadoc\": \"...\", \"fault_category\": "
                "\"WRONG_BEHAVIOR|WRONG_RETURN|WRONG_PARAMS|MISSING_INFO\", "
                "\"ground_truth_summary\": \"one line\", \"severity\": \"" +
                to_string(severity) + "\"}";
            break;
        case Variant::MUT_BUG:
            task = "Mutate the method body so its behavior deviates from the unchanged "
                   "Javadoc. Leave the Javadoc untouched.";
            reply_fields =
                "{\"mutated_mut\": \"...\", \"fault_category\": "
                "\"LOGIC|NULL_CHECK|BOUNDARY|API_MISUSE\", "
                "\"ground_truth_summary\": \"one line\", \"severity\": \"" +
                to_string(severity) + "\"}";
            break;
        case Variant::CONTRADICTION:
            switch (*strategy) {
                case Strategy::MUT_ONLY:
                    task = "Mutate the method body so it contradicts the unchanged Javadoc.";
                    reply_fields =
                        "{\"mutated_mut\": \"...\", \"ground_truth_summary\": \"one line\", "
                        "\"severity\": \"" + to_string(severity) + "\"}";
                    break;
                case Strategy::DOCSTRING_ONLY:
                    task = "Rewrite the Javadoc so it contradicts the unchanged method body.";
                    reply_fields =
                        "{\"mutated_javadoc\": \"...\", \"ground_truth_summary\": \"one "
                        "line\", \"severity\": \"" + to_string(severity) + "\"}";
                    break;
                case Strategy::BOTH:
                    task = "Mutate both the method body and the Javadoc so they contradict "
                           "each other.";
                    reply_fields =
                        "{\"mutated_mut\": \"...\", \"mutated_javadoc\": \"...\", "
                        "\"ground_truth_summary\": \"one line\", \"severity\": \"" +
                        to_string(severity) + "\"}";
                    break;
            }
            break;
        default: break;
    }

    std::string user;
    user += "Perturbation request parameters:\n" + params.dump() + "\n\n";
    user += task + "\n" + severity_instruction(severity) + "\n";
    user += "The method signature is held fixed. The mutated artifact must look natural: no "
            "comments, markers, or formatting cues.\n\n";
    user += blind_user_prompt(bundle);
    user += "\nReply with a single JSON object of this shape:\n" + reply_fields + "\n";

    return {mutation_system_prompt(), user};
}

// Recovers the request parameters a mutation prompt carries (used by the
// offline auditor endpoint).
inline std::optional<json> parse_mutation_params(std::string_view user_text) {
    size_t start = user_text.find('{');
    if (start == std::string_view::npos) return std::nullopt;
    size_t end = user_text.find('\n', start);
    if (end == std::string_view::npos) return std::nullopt;
    json j = json::parse(user_text.substr(start, end - start), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

}  // namespace trustbench::prompts
