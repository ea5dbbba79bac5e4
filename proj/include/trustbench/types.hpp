#pragma once

// Core enums and small utilities shared across the library.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trustbench {

// Single exception type; `code` is the machine-readable discriminator
// tests and the failure ledger key on.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string message, std::string detail = "")
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          detail_(std::move(detail)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

enum class Variant {
    BASE,
    DOC_DESC_REMOVED,
    DOC_RETURN_REMOVED,
    DOC_DESC_RETURN_REMOVED,
    DOC_BUG,
    MUT_BUG,
    CONTRADICTION
};

enum class Severity { HEAVY, NORMAL, SUBTLE };

enum class Strategy { MUT_ONLY, DOCSTRING_ONLY, BOTH };

enum class FaultCategory {
    // MUT_BUG taxonomy
    LOGIC,
    NULL_CHECK,
    BOUNDARY,
    API_MISUSE,
    // DOC_BUG taxonomy
    WRONG_BEHAVIOR,
    WRONG_RETURN,
    WRONG_PARAMS,
    MISSING_INFO
};

// The four bundle artifacts.
enum class Artifact { JAVADOC, SIGNATURE, MUT, TEST_PREFIX };

// Assessment dimensions: the four artifacts plus the holistic score.
enum class Dimension { JAVADOC, SIGNATURE, MUT, TEST_PREFIX, OVERALL };

enum class Verdict { CONSISTENT, CONTRADICTORY, INCOMPLETE };

enum class Label { LOW, MEDIUM, HIGH };

enum class Signal { PCA, IC, IR, UNION, MAJORITY };

inline const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> v = {
        Variant::BASE,
        Variant::DOC_DESC_REMOVED,
        Variant::DOC_RETURN_REMOVED,
        Variant::DOC_DESC_RETURN_REMOVED,
        Variant::DOC_BUG,
        Variant::MUT_BUG,
        Variant::CONTRADICTION};
    return v;
}

inline const std::vector<Variant>& mutation_variants() {
    static const std::vector<Variant> v = {Variant::DOC_BUG, Variant::MUT_BUG,
                                           Variant::CONTRADICTION};
    return v;
}

inline const std::vector<Artifact>& all_artifacts() {
    static const std::vector<Artifact> v = {Artifact::JAVADOC, Artifact::SIGNATURE,
                                            Artifact::MUT, Artifact::TEST_PREFIX};
    return v;
}

inline const std::vector<Signal>& all_signals() {
    static const std::vector<Signal> v = {Signal::PCA, Signal::IC, Signal::IR,
                                          Signal::UNION, Signal::MAJORITY};
    return v;
}

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::BASE: return "BASE";
        case Variant::DOC_DESC_REMOVED: return "DOC_DESC_REMOVED";
        case Variant::DOC_RETURN_REMOVED: return "DOC_RETURN_REMOVED";
        case Variant::DOC_DESC_RETURN_REMOVED: return "DOC_DESC_RETURN_REMOVED";
        case Variant::DOC_BUG: return "DOC_BUG";
        case Variant::MUT_BUG: return "MUT_BUG";
        case Variant::CONTRADICTION: return "CONTRADICTION";
    }
    return "?";
}

inline std::string to_string(Severity s) {
    switch (s) {
        case Severity::HEAVY: return "HEAVY";
        case Severity::NORMAL: return "NORMAL";
        case Severity::SUBTLE: return "SUBTLE";
    }
    return "?";
}

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::MUT_ONLY: return "MUT_ONLY";
        case Strategy::DOCSTRING_ONLY: return "DOCSTRING_ONLY";
        case Strategy::BOTH: return "BOTH";
    }
    return "?";
}

inline std::string to_string(FaultCategory c) {
    switch (c) {
        case FaultCategory::LOGIC: return "LOGIC";
        case FaultCategory::NULL_CHECK: return "NULL_CHECK";
        case FaultCategory::BOUNDARY: return "BOUNDARY";
        case FaultCategory::API_MISUSE: return "API_MISUSE";
        case FaultCategory::WRONG_BEHAVIOR: return "WRONG_BEHAVIOR";
        case FaultCategory::WRONG_RETURN: return "WRONG_RETURN";
        case FaultCategory::WRONG_PARAMS: return "WRONG_PARAMS";
        case FaultCategory::MISSING_INFO: return "MISSING_INFO";
    }
    return "?";
}

inline std::string to_string(Artifact a) {
    switch (a) {
        case Artifact::JAVADOC: return "JAVADOC";
        case Artifact::SIGNATURE: return "SIGNATURE";
        case Artifact::MUT: return "MUT";
        case Artifact::TEST_PREFIX: return "TEST_PREFIX";
    }
    return "?";
}

inline std::string to_string(Dimension d) {
    switch (d) {
        case Dimension::JAVADOC: return "JAVADOC";
        case Dimension::SIGNATURE: return "SIGNATURE";
        case Dimension::MUT: return "MUT";
        case Dimension::TEST_PREFIX: return "TEST_PREFIX";
        case Dimension::OVERALL: return "OVERALL";
    }
    return "?";
}

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CONSISTENT: return "CONSISTENT";
        case Verdict::CONTRADICTORY: return "CONTRADICTORY";
        case Verdict::INCOMPLETE: return "INCOMPLETE";
    }
    return "?";
}

inline std::string to_string(Label l) {
    switch (l) {
        case Label::LOW: return "LOW";
        case Label::MEDIUM: return "MEDIUM";
        case Label::HIGH: return "HIGH";
    }
    return "?";
}

inline std::string to_string(Signal s) {
    switch (s) {
        case Signal::PCA: return "PCA";
        case Signal::IC: return "IC";
        case Signal::IR: return "IR";
        case Signal::UNION: return "UNION";
        case Signal::MAJORITY: return "MAJORITY";
    }
    return "?";
}

namespace detail {

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

inline std::optional<Variant> variant_from_string(std::string_view s) {
    for (Variant v : all_variants())
        if (to_string(v) == s) return v;
    return std::nullopt;
}

inline std::optional<Severity> severity_from_string(std::string_view s) {
    for (Severity x : {Severity::HEAVY, Severity::NORMAL, Severity::SUBTLE})
        if (to_string(x) == s) return x;
    return std::nullopt;
}

inline std::optional<Strategy> strategy_from_string(std::string_view s) {
    for (Strategy x : {Strategy::MUT_ONLY, Strategy::DOCSTRING_ONLY, Strategy::BOTH})
        if (to_string(x) == s) return x;
    return std::nullopt;
}

inline std::optional<FaultCategory> fault_category_from_string(std::string_view s) {
    for (FaultCategory x :
         {FaultCategory::LOGIC, FaultCategory::NULL_CHECK, FaultCategory::BOUNDARY,
          FaultCategory::API_MISUSE, FaultCategory::WRONG_BEHAVIOR, FaultCategory::WRONG_RETURN,
          FaultCategory::WRONG_PARAMS, FaultCategory::MISSING_INFO})
        if (to_string(x) == s) return x;
    return std::nullopt;
}

inline std::optional<Verdict> verdict_from_string(std::string_view s) {
    for (Verdict x : {Verdict::CONSISTENT, Verdict::CONTRADICTORY, Verdict::INCOMPLETE})
        if (to_string(x) == s) return x;
    return std::nullopt;
}

inline std::optional<Label> label_from_string(std::string_view s) {
    for (Label x : {Label::LOW, Label::MEDIUM, Label::HIGH})
        if (to_string(x) == s) return x;
    return std::nullopt;
}

inline std::optional<Signal> signal_from_string(std::string_view s) {
    for (Signal x : all_signals())
        if (to_string(x) == s) return x;
    return std::nullopt;
}

// Models vary in how they name the artifacts; map the common surface forms
// onto the canonical enum. Case-insensitive.
inline std::optional<Artifact> artifact_from_string(std::string_view raw) {
    std::string s = detail::ascii_lower(detail::trim(raw));
    std::replace(s.begin(), s.end(), ' ', '_');
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "javadoc" || s == "docstring" || s == "doc" || s == "documentation")
        return Artifact::JAVADOC;
    if (s == "signature" || s == "method_signature" || s == "sig")
        return Artifact::SIGNATURE;
    if (s == "mut" || s == "method" || s == "implementation" || s == "code" ||
        s == "focal_method" || s == "method_under_test" || s == "method_body")
        return Artifact::MUT;
    if (s == "test_prefix" || s == "testprefix" || s == "prefix" || s == "test" ||
        s == "test_setup")
        return Artifact::TEST_PREFIX;
    return std::nullopt;
}

inline std::optional<Dimension> dimension_from_string(std::string_view raw) {
    std::string s = detail::ascii_lower(detail::trim(raw));
    if (s == "overall" || s == "overall_quality" || s == "bundle") return Dimension::OVERALL;
    if (auto a = artifact_from_string(raw)) {
        switch (*a) {
            case Artifact::JAVADOC: return Dimension::JAVADOC;
            case Artifact::SIGNATURE: return Dimension::SIGNATURE;
            case Artifact::MUT: return Dimension::MUT;
            case Artifact::TEST_PREFIX: return Dimension::TEST_PREFIX;
        }
    }
    return std::nullopt;
}

// FNV-1a, used wherever a hash must be stable across processes and builds
// (prompt drift detection, seeded assignment, auditor lookup).
inline uint64_t fnv1a(std::string_view data, uint64_t seed = 14695981039346656037ull) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace trustbench
