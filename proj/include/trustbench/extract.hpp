#pragma once

// Candidate extraction from a source corpus: either a record-per-line
// archive of pre-extracted bundles, or a directory of .java files scanned
// lexically for documented methods. Directory extraction walks files in
// sorted path order and emits candidates by method start offset, so the
// corpus iteration order (and hence dedup tie-breaking) is deterministic.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "trustbench/bundle.hpp"
#include "trustbench/curation.hpp"
#include "trustbench/jsonl.hpp"

namespace trustbench {

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO_ERROR", "cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

// Matching close brace for the '{' at `open`, comment/string aware; npos
// when unbalanced.
inline size_t find_matching_brace(std::string_view text, size_t open) {
    std::string scrubbed = blank_comments_and_literals(text, true);
    int depth = 0;
    for (size_t i = open; i < scrubbed.size(); ++i) {
        if (scrubbed[i] == '{') ++depth;
        else if (scrubbed[i] == '}') {
            --depth;
            if (depth == 0) return i;
        }
    }
    return std::string_view::npos;
}

struct ExtractedMethod {
    std::string javadoc;
    std::string signature;
    std::string body;
    std::string name;
    size_t offset = 0;
};

// Scans one compilation unit for /** doc */ blocks directly followed by a
// method declaration with a braced body.
inline std::vector<ExtractedMethod> extract_documented_methods(const std::string& source) {
    std::vector<ExtractedMethod> out;
    size_t pos = 0;
    while ((pos = source.find("/**", pos)) != std::string::npos) {
        size_t doc_end = source.find("*/", pos + 3);
        if (doc_end == std::string::npos) break;
        doc_end += 2;
        std::string javadoc = source.substr(pos, doc_end - pos);

        // declaration runs from after the doc block to the body brace
        size_t brace = source.find('{', doc_end);
        size_t semi = source.find(';', doc_end);
        if (brace == std::string::npos || (semi != std::string::npos && semi < brace)) {
            pos = doc_end;  // abstract/interface declaration or field
            continue;
        }
        std::string between = source.substr(doc_end, brace - doc_end);
        // annotations live on their own lines before the declaration
        std::string signature = trim(between);
        if (signature.find('(') == std::string::npos) {
            pos = doc_end;  // class or initializer block
            continue;
        }
        size_t close = find_matching_brace(source, brace);
        if (close == std::string::npos) {
            pos = doc_end;
            continue;
        }
        ExtractedMethod m;
        m.javadoc = javadoc;
        m.signature = signature;
        m.body = source.substr(brace, close - brace + 1);
        m.name = method_name(signature);
        m.offset = pos;
        out.push_back(std::move(m));
        pos = close;
    }
    return out;
}

// Pulls a test prefix for `method_name` out of a test file: the enclosing
// test method's body from its opening brace through the invocation line.
inline std::string find_test_prefix(const std::string& test_source,
                                    const std::string& method_name) {
    size_t call = test_source.find(method_name + "(");
    while (call != std::string::npos) {
        // must be an invocation, not a declaration
        size_t line_start = test_source.rfind('\n', call);
        line_start = line_start == std::string::npos ? 0 : line_start + 1;
        std::string line = test_source.substr(line_start, call - line_start);
        if (line.find("void") == std::string::npos) break;
        call = test_source.find(method_name + "(", call + 1);
    }
    if (call == std::string::npos) return "";

    // backtrack to the opening brace of the enclosing method
    size_t open = test_source.rfind("{", call);
    size_t best_open = std::string::npos;
    while (open != std::string::npos) {
        size_t decl = test_source.rfind("void", open);
        if (decl != std::string::npos && test_source.find('}', decl) > open) {
            best_open = open;
            break;
        }
        if (open == 0) break;
        open = test_source.rfind("{", open - 1);
    }
    if (best_open == std::string::npos) return "";

    size_t end_of_call_line = test_source.find('\n', call);
    if (end_of_call_line == std::string::npos) end_of_call_line = test_source.size();
    return trim(test_source.substr(best_open + 1, end_of_call_line - best_open - 1));
}

}  // namespace detail

// Extracts candidate bundles from a directory tree of .java files. Files
// whose stem contains "Test" contribute test prefixes, not candidates.
inline std::vector<ArtifactBundle> extract_candidates_from_directory(
    const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> sources, tests;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".java") continue;
        std::string stem = entry.path().stem().string();
        (stem.find("Test") != std::string::npos ? tests : sources).push_back(entry.path());
    }
    std::sort(sources.begin(), sources.end());
    std::sort(tests.begin(), tests.end());

    std::vector<std::pair<std::string, std::string>> test_texts;  // (path, text)
    for (const auto& t : tests) test_texts.emplace_back(t.string(), detail::read_text_file(t));

    std::vector<ArtifactBundle> out;
    for (const auto& path : sources) {
        std::string source = detail::read_text_file(path);
        std::string rel = std::filesystem::relative(path, dir).generic_string();
        for (const auto& m : detail::extract_documented_methods(source)) {
            ArtifactBundle b;
            b.origin = {rel, m.name};
            b.sample_id = rel + "#" + m.name + "@" + std::to_string(m.offset);
            b.javadoc = m.javadoc;
            b.signature = m.signature;
            b.mut_body = m.body;
            for (const auto& [tpath, ttext] : test_texts) {
                b.test_prefix = detail::find_test_prefix(ttext, m.name);
                if (!b.test_prefix.empty()) break;
            }
            out.push_back(std::move(b));
        }
    }
    return out;
}

// Loads candidates from either input form.
inline std::vector<ArtifactBundle> load_candidates(const std::filesystem::path& corpus) {
    if (std::filesystem::is_directory(corpus))
        return extract_candidates_from_directory(corpus);
    std::vector<ArtifactBundle> out;
    for (const auto& j : jsonl::read_file(corpus)) out.push_back(bundle_from_json(j));
    return out;
}

}  // namespace trustbench
