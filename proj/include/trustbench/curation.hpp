#pragma once

// Base-sample curation: lexical measurements over method bodies and
// documentation rules, composed into the accept/reject filter that
// produces the clean base dataset.
//
// All analysis here is lexical (comment/blank stripping, token scans),
// not AST-based, so it stays reproducible on inputs that do not fully
// parse.

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "trustbench/bundle.hpp"
#include "trustbench/types.hpp"

namespace trustbench {

// Rule identifiers surfaced in CurationVerdict::failed_rules.
namespace rules {
inline constexpr const char* kLineCount = "line-count";
inline constexpr const char* kTrivialBody = "trivial-body";
inline constexpr const char* kConstructor = "constructor";
inline constexpr const char* kEntryPoint = "entry-point";
inline constexpr const char* kAccessor = "accessor";
inline constexpr const char* kInlineComments = "inline-comments";
inline constexpr const char* kEmbeddedDocBlock = "embedded-doc-block";
inline constexpr const char* kShortTestPrefix = "short-test-prefix";
inline constexpr const char* kDuplicate = "duplicate";
// Javadoc rules
inline constexpr const char* kContainsInheritDoc = "contains-inheritDoc";
inline constexpr const char* kShortDescription = "short-description";
inline constexpr const char* kTagOnly = "tag-only";
inline constexpr const char* kNonEnglish = "non-english";
inline constexpr const char* kUsageWarningOnly = "usage-warning-only";
inline constexpr const char* kMissingReturn = "missing-@return";
inline constexpr const char* kMissingParam = "missing-@param";
}  // namespace rules

struct CurationVerdict {
    std::string sample_id;
    bool accepted = false;
    std::vector<std::string> failed_rules;
    int executable_line_count = 0;
    int control_flow_count = 0;
    int assignment_count = 0;
    int call_count = 0;
    int description_length = 0;
};

inline json to_json(const CurationVerdict& v) {
    return json{{"sample_id", v.sample_id},
                {"accepted", v.accepted},
                {"failed_rules", v.failed_rules},
                {"measured",
                 {{"executable_line_count", v.executable_line_count},
                  {"control_flow_count", v.control_flow_count},
                  {"assignment_count", v.assignment_count},
                  {"call_count", v.call_count},
                  {"description_length", v.description_length}}}};
}

struct TrivialityMeasure {
    int control_flow_count = 0;
    int assignment_count = 0;
    int call_count = 0;
    bool nontrivial = false;
};

namespace detail {

// Rewrites source so that comment bodies become spaces and string/char
// literal contents become spaces, preserving line structure. Quote marks
// are kept so later scans still see literal boundaries.
inline std::string blank_comments_and_literals(std::string_view src, bool blank_literals) {
    std::string out;
    out.reserve(src.size());
    enum class St { Code, Line, Block, Str, Chr } st = St::Code;
    for (size_t i = 0; i < src.size(); ++i) {
        char c = src[i];
        char n = i + 1 < src.size() ? src[i + 1] : '\0';
        switch (st) {
            case St::Code:
                if (c == '/' && n == '/') {
                    st = St::Line;
                    out += "  ";
                    ++i;
                } else if (c == '/' && n == '*') {
                    st = St::Block;
                    out += "  ";
                    ++i;
                } else if (c == '"') {
                    st = St::Str;
                    out += c;
                } else if (c == '\'') {
                    st = St::Chr;
                    out += c;
                } else {
                    out += c;
                }
                break;
            case St::Line:
                if (c == '\n') {
                    st = St::Code;
                    out += c;
                } else {
                    out += ' ';
                }
                break;
            case St::Block:
                if (c == '*' && n == '/') {
                    st = St::Code;
                    out += "  ";
                    ++i;
                } else {
                    out += c == '\n' ? '\n' : ' ';
                }
                break;
            case St::Str:
                if (c == '\\' && n != '\0') {
                    out += blank_literals ? "  " : std::string{c, n};
                    ++i;
                } else if (c == '"') {
                    st = St::Code;
                    out += c;
                } else {
                    out += blank_literals ? ' ' : c;
                }
                break;
            case St::Chr:
                if (c == '\\' && n != '\0') {
                    out += blank_literals ? "  " : std::string{c, n};
                    ++i;
                } else if (c == '\'') {
                    st = St::Code;
                    out += c;
                } else {
                    out += blank_literals ? ' ' : c;
                }
                break;
        }
    }
    return out;
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return lines;
}

inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// True when the body contains any comment token outside string literals.
inline bool body_has_comment(std::string_view body, bool* embedded_doc) {
    enum class St { Code, Str, Chr } st = St::Code;
    bool found = false;
    if (embedded_doc) *embedded_doc = false;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        char n = i + 1 < body.size() ? body[i + 1] : '\0';
        switch (st) {
            case St::Code:
                if (c == '/' && (n == '/' || n == '*')) {
                    found = true;
                    if (embedded_doc && n == '*' && i + 2 < body.size() && body[i + 2] == '*')
                        *embedded_doc = true;
                    ++i;
                } else if (c == '"') {
                    st = St::Str;
                } else if (c == '\'') {
                    st = St::Chr;
                }
                break;
            case St::Str:
                if (c == '\\') ++i;
                else if (c == '"') st = St::Code;
                break;
            case St::Chr:
                if (c == '\\') ++i;
                else if (c == '\'') st = St::Code;
                break;
        }
    }
    return found;
}

}  // namespace detail

// Counts non-blank lines that are not purely comments. Lines consisting
// only of braces are structural, not executable.
inline int count_executable_lines(std::string_view mut_body) {
    std::string stripped = detail::blank_comments_and_literals(mut_body, false);
    int count = 0;
    for (const auto& line : detail::split_lines(stripped)) {
        bool executable = false;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}') {
                executable = true;
                break;
            }
        }
        if (executable) ++count;
    }
    return count;
}

// Control-flow constructs counted: if, switch, for, while, do, try, catch.
// Ternaries are excluded. Assignments count both plain/compound operators
// and declarations with initializers; calls are identifier-then-paren
// occurrences excluding keywords.
inline TrivialityMeasure classify_triviality(std::string_view mut_body) {
    static const std::unordered_set<std::string> control_kw = {"if",    "switch", "for",
                                                               "while", "do",     "try",
                                                               "catch"};
    static const std::unordered_set<std::string> non_call_kw = {
        "if",  "switch", "for",    "while",  "do",     "try",          "catch",
        "new", "return", "assert", "else",   "throw",  "synchronized", "finally",
        "case"};

    std::string code = detail::blank_comments_and_literals(mut_body, true);
    TrivialityMeasure m;

    for (size_t i = 0; i < code.size();) {
        char c = code[i];
        if (detail::is_ident_char(c) && !std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < code.size() && detail::is_ident_char(code[j])) ++j;
            std::string word = code.substr(i, j - i);
            if (control_kw.count(word)) ++m.control_flow_count;
            size_t k = j;
            while (k < code.size() && std::isspace(static_cast<unsigned char>(code[k]))) ++k;
            if (k < code.size() && code[k] == '(' && !non_call_kw.count(word)) ++m.call_count;
            i = j;
            continue;
        }
        // operator scan for assignments, longest match first
        auto starts = [&](std::string_view op) {
            return code.compare(i, op.size(), op) == 0;
        };
        if (starts(">>>=")) { ++m.assignment_count; i += 4; continue; }
        if (starts("<<=") || starts(">>=")) { ++m.assignment_count; i += 3; continue; }
        if (starts("==") || starts("!=") || starts("<=") || starts(">=") || starts("->")) {
            i += 2;
            continue;
        }
        if (starts("+=") || starts("-=") || starts("*=") || starts("/=") || starts("%=") ||
            starts("&=") || starts("|=") || starts("^=")) {
            ++m.assignment_count;
            i += 2;
            continue;
        }
        if (c == '=') { ++m.assignment_count; ++i; continue; }
        ++i;
    }

    m.nontrivial = m.control_flow_count >= 2 ||
                   (m.assignment_count >= 4 && m.call_count >= 4);
    return m;
}

// ---- signature helpers -----------------------------------------------

namespace detail {

// Declaration tokens before the parameter list, with generic argument
// blocks and annotations dropped.
inline std::vector<std::string> declaration_tokens(std::string_view signature) {
    size_t paren = signature.find('(');
    std::string head(signature.substr(0, paren == std::string_view::npos ? signature.size()
                                                                         : paren));
    std::string cleaned;
    int angle = 0;
    for (char c : head) {
        if (c == '<') { ++angle; continue; }
        if (c == '>') { if (angle > 0) --angle; continue; }
        if (angle == 0) cleaned += c;
        // generic params collapse; keep a separator so tokens stay split
        else if (c == ',') cleaned += ' ';
    }
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : cleaned) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    std::vector<std::string> out;
    for (auto& t : tokens)
        if (t[0] != '@') out.push_back(t);
    return out;
}

inline const std::unordered_set<std::string>& modifier_tokens() {
    static const std::unordered_set<std::string> m = {
        "public", "protected", "private", "static",   "final", "abstract",
        "native", "synchronized", "strictfp", "default", "transient", "volatile"};
    return m;
}

}  // namespace detail

inline std::string method_name(std::string_view signature) {
    auto tokens = detail::declaration_tokens(signature);
    return tokens.empty() ? std::string{} : tokens.back();
}

// A declaration with no type token between the modifiers and the name.
inline bool is_constructor_signature(std::string_view signature) {
    auto tokens = detail::declaration_tokens(signature);
    if (tokens.empty()) return true;
    size_t type_tokens = 0;
    for (size_t i = 0; i + 1 < tokens.size(); ++i)
        if (!detail::modifier_tokens().count(tokens[i])) ++type_tokens;
    return type_tokens == 0;
}

inline bool is_void_signature(std::string_view signature) {
    auto tokens = detail::declaration_tokens(signature);
    if (tokens.size() < 2) return false;
    // return type is the token immediately before the name
    return tokens[tokens.size() - 2] == "void";
}

inline bool signature_has_params(std::string_view signature) {
    size_t open = signature.find('(');
    if (open == std::string_view::npos) return false;
    size_t close = signature.find(')', open);
    if (close == std::string_view::npos) close = signature.size();
    return !detail::trim(signature.substr(open + 1, close - open - 1)).empty();
}

// ---- javadoc parsing --------------------------------------------------

struct JavadocParts {
    std::string description;              // prose before the first block tag
    std::vector<std::string> tag_lines;   // raw tag + continuation lines
    bool has_return_tag = false;
    bool has_param_tag = false;
    bool has_any_tag = false;
};

namespace detail {

// Strips " * " style decoration from a javadoc body line.
inline std::string undecorate(std::string_view line) {
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i < line.size() && line[i] == '*') {
        ++i;
        if (i < line.size() && line[i] == ' ') ++i;
    }
    return std::string(line.substr(i));
}

inline bool is_tag_line(std::string_view line) {
    std::string content = undecorate(line);
    return !content.empty() && content[0] == '@';
}

}  // namespace detail

inline JavadocParts parse_javadoc(std::string_view javadoc) {
    JavadocParts parts;
    auto lines = detail::split_lines(javadoc);
    bool in_tags = false;
    for (const auto& line : lines) {
        std::string content = detail::undecorate(line);
        // strip delimiters off same-line content
        if (content.rfind("/**", 0) == 0) content = detail::trim(content.substr(3));
        size_t close = content.find("*/");
        if (close != std::string::npos) content = detail::trim(content.substr(0, close));
        if (content.empty()) continue;
        if (content[0] == '@') {
            in_tags = true;
            parts.has_any_tag = true;
            if (content.rfind("@return", 0) == 0) parts.has_return_tag = true;
            if (content.rfind("@param", 0) == 0) parts.has_param_tag = true;
            parts.tag_lines.push_back(content);
        } else if (!in_tags) {
            if (!parts.description.empty()) parts.description += ' ';
            parts.description += content;
        } else {
            parts.tag_lines.push_back(content);  // tag continuation
        }
    }
    parts.description = detail::trim(parts.description);
    return parts;
}

namespace detail {

// Conservative non-Latin-script detection over UTF-8: any decoded
// codepoint beyond Latin Extended-B rejects the description.
inline bool has_non_latin_script(std::string_view text) {
    for (size_t i = 0; i < text.size();) {
        unsigned char c = text[i];
        uint32_t cp = 0;
        size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6 && i + 1 < text.size()) {
            cp = (c & 0x1F) << 6 | (text[i + 1] & 0x3F);
            len = 2;
        } else if ((c >> 4) == 0xE && i + 2 < text.size()) {
            cp = (c & 0x0F) << 12 | (text[i + 1] & 0x3F) << 6 | (text[i + 2] & 0x3F);
            len = 3;
        } else if ((c >> 3) == 0x1E && i + 3 < text.size()) {
            cp = 0x10000;  // astral plane: certainly not Latin
            len = 4;
        } else {
            cp = c;  // invalid byte; treat as Latin-1
        }
        if (cp > 0x024F) return true;
        i += len;
    }
    return false;
}

inline bool starts_with_warning_cue(std::string_view sentence) {
    static const std::array<const char*, 9> cues = {
        "beware",  "warning", "caution", "attention", "do not",
        "don't",   "never",   "avoid",   "internal use"};
    std::string s = ascii_lower(trim(sentence));
    size_t start = 0;
    while (start < s.size() && !std::isalnum(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    for (const char* cue : cues)
        if (s.rfind(cue, 0) == 0) return true;
    return false;
}

// Every sentence of the description is a usage warning.
inline bool is_usage_warning_only(std::string_view description) {
    std::vector<std::string> sentences;
    std::string cur;
    for (char c : description) {
        if (c == '.' || c == '!' || c == '?' || c == ';') {
            if (!trim(cur).empty()) sentences.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) sentences.push_back(cur);
    if (sentences.empty()) return false;
    for (const auto& s : sentences)
        if (!starts_with_warning_cue(s)) return false;
    return true;
}

}  // namespace detail

// Documentation rules. {@inheritDoc} is an absolute disqualifier and
// short-circuits the remaining checks.
inline std::vector<std::string> check_javadoc_rules(std::string_view javadoc,
                                                    std::string_view signature) {
    std::vector<std::string> violations;
    if (javadoc.find("{@inheritDoc}") != std::string_view::npos) {
        violations.emplace_back(rules::kContainsInheritDoc);
        return violations;
    }
    JavadocParts parts = parse_javadoc(javadoc);

    if (parts.description.empty()) {
        violations.emplace_back(parts.has_any_tag ? rules::kTagOnly : rules::kShortDescription);
    } else {
        if (parts.description.size() <= 15) violations.emplace_back(rules::kShortDescription);
        if (detail::has_non_latin_script(parts.description))
            violations.emplace_back(rules::kNonEnglish);
        if (detail::is_usage_warning_only(parts.description))
            violations.emplace_back(rules::kUsageWarningOnly);
    }
    if (!is_void_signature(signature) && !is_constructor_signature(signature) &&
        !parts.has_return_tag)
        violations.emplace_back(rules::kMissingReturn);
    if (signature_has_params(signature) && !parts.has_param_tag)
        violations.emplace_back(rules::kMissingParam);
    return violations;
}

namespace detail {

inline bool has_accessor_prefix(std::string_view name) {
    for (std::string_view prefix : {"get", "is", "has", "set"}) {
        if (name.size() > prefix.size() && name.rfind(prefix, 0) == 0 &&
            std::isupper(static_cast<unsigned char>(name[prefix.size()])))
            return true;
    }
    return false;
}

}  // namespace detail

// Full verdict for one candidate; duplicate detection is handled by curate.
inline CurationVerdict judge_bundle(const ArtifactBundle& b) {
    CurationVerdict v;
    v.sample_id = b.sample_id;

    v.executable_line_count = count_executable_lines(b.mut_body);
    TrivialityMeasure t = classify_triviality(b.mut_body);
    v.control_flow_count = t.control_flow_count;
    v.assignment_count = t.assignment_count;
    v.call_count = t.call_count;

    if (v.executable_line_count < 8 || v.executable_line_count > 60)
        v.failed_rules.emplace_back(rules::kLineCount);
    if (!t.nontrivial) v.failed_rules.emplace_back(rules::kTrivialBody);
    if (is_constructor_signature(b.signature)) v.failed_rules.emplace_back(rules::kConstructor);

    std::string name = method_name(b.signature);
    if (name == "main") v.failed_rules.emplace_back(rules::kEntryPoint);
    if (detail::has_accessor_prefix(name) && !t.nontrivial)
        v.failed_rules.emplace_back(rules::kAccessor);

    bool embedded_doc = false;
    if (detail::body_has_comment(b.mut_body, &embedded_doc))
        v.failed_rules.emplace_back(embedded_doc ? rules::kEmbeddedDocBlock
                                                 : rules::kInlineComments);

    auto doc_violations = check_javadoc_rules(b.javadoc, b.signature);
    v.description_length = static_cast<int>(parse_javadoc(b.javadoc).description.size());
    v.failed_rules.insert(v.failed_rules.end(), doc_violations.begin(), doc_violations.end());

    if (b.test_prefix.size() < 20) v.failed_rules.emplace_back(rules::kShortTestPrefix);

    v.accepted = v.failed_rules.empty();
    return v;
}

struct CurationResult {
    std::vector<ArtifactBundle> accepted;
    std::vector<CurationVerdict> verdicts;
};

// Applies every rule to every candidate, preserving input order, and
// drops (mut_body, javadoc) duplicates keeping the first accepted
// occurrence. Deterministic and idempotent on its own output.
inline CurationResult curate(const std::vector<ArtifactBundle>& candidates) {
    CurationResult result;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& b : candidates) {
        CurationVerdict v = judge_bundle(b);
        if (v.accepted) {
            auto key = std::make_pair(b.mut_body, b.javadoc);
            if (seen.count(key)) {
                v.accepted = false;
                v.failed_rules.emplace_back(rules::kDuplicate);
            } else {
                seen.insert(key);
                result.accepted.push_back(b);
            }
        }
        result.verdicts.push_back(std::move(v));
    }
    return result;
}

}  // namespace trustbench
