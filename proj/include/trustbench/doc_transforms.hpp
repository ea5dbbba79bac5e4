#pragma once

// Deterministic documentation-removal transforms. Operate line-wise so
// that retained content is byte-identical to the input; already-stripped
// inputs pass through unchanged.

#include <string>
#include <string_view>
#include <vector>

#include "trustbench/curation.hpp"

namespace trustbench {

namespace detail {

enum class DocLineKind { Open, Close, Prose, Tag, TagContinuation, Blank };

struct DocLine {
    std::string text;  // verbatim
    DocLineKind kind;
};

// Classifies each physical line. The description is everything before the
// first line whose first non-decoration token starts with '@'.
inline std::vector<DocLine> classify_doc_lines(std::string_view javadoc) {
    auto lines = split_lines(javadoc);
    std::vector<DocLine> out;
    bool tag_seen = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string& raw = lines[i];
        std::string content = undecorate(raw);
        DocLineKind kind;
        bool is_open = content.rfind("/**", 0) == 0 ||
                       (trim(raw).rfind("/**", 0) == 0);
        bool is_close = content.find("*/") != std::string::npos ||
                        raw.find("*/") != std::string::npos;
        if (is_open) {
            kind = DocLineKind::Open;
        } else if (is_close && i + 1 == lines.size()) {
            kind = DocLineKind::Close;
        } else if (content.empty()) {
            kind = DocLineKind::Blank;
        } else if (content[0] == '@') {
            kind = DocLineKind::Tag;
            tag_seen = true;
        } else {
            kind = tag_seen ? DocLineKind::TagContinuation : DocLineKind::Prose;
        }
        out.push_back({raw, kind});
    }
    return out;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size()) out += '\n';
    }
    return out;
}

// Content of a line with doc decoration and delimiters removed.
inline std::string doc_payload(std::string_view raw) {
    std::string content = undecorate(raw);
    if (content.rfind("/**", 0) == 0) content = trim(content.substr(3));
    size_t close = content.find("*/");
    if (close != std::string::npos) content = trim(content.substr(0, close));
    return content;
}

}  // namespace detail

// Removes the prose description, keeping every tag line (and tag
// continuations) verbatim. A doc with no prose is returned unchanged;
// a doc with no tags collapses to the delimiters.
inline std::string strip_description(std::string_view javadoc) {
    auto lines = detail::classify_doc_lines(javadoc);

    bool has_prose = false;
    for (const auto& l : lines) {
        if (l.kind == detail::DocLineKind::Prose) has_prose = true;
        if (l.kind == detail::DocLineKind::Open && !detail::doc_payload(l.text).empty() &&
            detail::doc_payload(l.text)[0] != '@')
            has_prose = true;
    }
    if (!has_prose) return std::string(javadoc);

    // Single-line form: /** ... */
    if (lines.size() == 1) {
        std::string payload = detail::doc_payload(lines[0].text);
        if (!payload.empty() && payload[0] == '@') return std::string(javadoc);
        return "/** */";
    }

    std::vector<std::string> kept;
    bool in_prose_block = true;
    for (const auto& l : lines) {
        switch (l.kind) {
            case detail::DocLineKind::Open: {
                std::string payload = detail::doc_payload(l.text);
                if (payload.empty() || payload[0] == '@') {
                    kept.push_back(l.text);
                } else {
                    // prose started on the delimiter line; keep just the opener
                    size_t pos = l.text.find("/**");
                    kept.push_back(l.text.substr(0, pos + 3));
                }
                break;
            }
            case detail::DocLineKind::Close:
            case detail::DocLineKind::Tag:
            case detail::DocLineKind::TagContinuation:
                kept.push_back(l.text);
                in_prose_block = false;
                break;
            case detail::DocLineKind::Prose:
                break;
            case detail::DocLineKind::Blank:
                // blank lines inside the description go with it; blanks between
                // tags stay
                if (!in_prose_block) kept.push_back(l.text);
                break;
        }
    }
    return detail::join_lines(kept);
}

// Removes every @return clause including wrapped continuation lines, up to
// the next tag or the closing delimiter. All other lines are untouched.
inline std::string strip_return_tag(std::string_view javadoc) {
    auto lines = detail::classify_doc_lines(javadoc);
    bool any = false;
    for (const auto& l : lines)
        if (l.kind == detail::DocLineKind::Tag &&
            detail::doc_payload(l.text).rfind("@return", 0) == 0)
            any = true;
    if (!any) return std::string(javadoc);

    std::vector<std::string> kept;
    bool dropping = false;
    for (const auto& l : lines) {
        if (l.kind == detail::DocLineKind::Tag) {
            dropping = detail::doc_payload(l.text).rfind("@return", 0) == 0;
            if (dropping) continue;
        } else if (l.kind == detail::DocLineKind::TagContinuation && dropping) {
            continue;
        } else if (l.kind != detail::DocLineKind::Blank) {
            dropping = false;
        }
        kept.push_back(l.text);
    }
    return detail::join_lines(kept);
}

inline std::string strip_description_and_return(std::string_view javadoc) {
    return strip_return_tag(strip_description(javadoc));
}

}  // namespace trustbench
