#pragma once

// Independent reference implementations used to freeze expected values.
// Nothing here calls into the code paths under test.

#include "textforge/align.hpp"
#include "textforge/ocr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace oracles {

// Exact-fraction quantization: round-half-away-from-zero of 1000*num/den
// using integer arithmetic only.
inline double rational_quantized(std::int64_t num, std::int64_t den) {
    const std::int64_t scaled = (2000 * num + den) / (2 * den); // floor((1000n + d/2) / d)
    return static_cast<double>(scaled) / 1000.0;
}

// Decimal-string quantization: rounds "0.6166" to three decimals by digit
// inspection, no floating point involved.
inline double decimal_quantized(const std::string & decimal) {
    const std::size_t dot = decimal.find('.');
    std::string int_part = dot == std::string::npos ? decimal : decimal.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : decimal.substr(dot + 1);
    frac.resize(4, '0'); // keep one guard digit
    std::int64_t milli = std::stoll(int_part) * 1000 + std::stoll(frac.substr(0, 3));
    if (frac[3] >= '5') ++milli;
    return static_cast<double>(milli) / 1000.0;
}

// Regular-grammar reference for span extraction over ASCII-quoted input.
// Matches quoted spans and bare tuples left to right, non-overlapping, in a
// single alternation, mirroring the documented grammar.
struct regex_span {
    std::string text;
    bool quoted = false;
    double coords[4] = {0, 0, 0, 0};
};

inline std::vector<regex_span> regex_parse(const std::string & input) {
    static const std::regex pattern(
        R"re(("([^"]*)")?\[\s*([0-9.eE+-]+)\s*,\s*([0-9.eE+-]+)\s*,\s*([0-9.eE+-]+)\s*,\s*([0-9.eE+-]+)\s*\])re");
    std::vector<regex_span> out;
    auto begin = std::sregex_iterator(input.begin(), input.end(), pattern);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        regex_span span;
        span.quoted = (*it)[1].matched;
        span.text = (*it)[2].str();
        bool ok = true;
        for (int c = 0; c < 4; ++c) {
            try {
                span.coords[c] = std::stod((*it)[3 + c].str());
            } catch (...) {
                ok = false;
                break;
            }
            if (!(span.coords[c] >= 0.0 && span.coords[c] <= 1.0)) ok = false;
        }
        if (!ok) continue;
        if (span.coords[0] > span.coords[2] || span.coords[1] > span.coords[3]) continue;
        out.push_back(span);
    }
    return out;
}

// Self-contained canonicalization and edit distance so the alignment oracle
// shares no arithmetic with the implementation. ASCII-only on purpose: the
// randomized alignment fixtures are ASCII.
inline std::string simple_canonical(const std::string & s) {
    std::string out;
    std::string word;
    auto flush = [&] {
        std::size_t b = 0, e = word.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(word[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(word[e - 1]))) --e;
        if (b < e) {
            if (!out.empty()) out.push_back(' ');
            for (std::size_t k = b; k < e; ++k) {
                out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(word[k]))));
            }
        }
        word.clear();
    };
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            word.push_back(c);
        }
    }
    flush();
    return out;
}

inline std::size_t simple_levenshtein(const std::string & a, const std::string & b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
        }
    }
    return d[a.size()][b.size()];
}

inline double simple_normalized_distance(const std::string & a, const std::string & b) {
    const std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(simple_levenshtein(a, b)) / static_cast<double>(longest);
}

// Exhaustive reference for align_metadata on small documents: every token
// subset that is contiguous in reading order with at most max_gap interior
// skips, scored by normalized edit distance with the documented tie-breaks
// (distance, fewer tokens, lexicographically earliest index vector). Only
// the reading order itself is taken from the library (it defines the
// candidate space and has its own tests).
inline std::optional<textforge::grounded_span> brute_force_align(
    const textforge::ocr_document & doc, const std::string & reference,
    const textforge::align_params & params = {}) {
    const auto ordered = textforge::reading_order(doc.tokens, params.line_tolerance);
    const std::size_t n = ordered.size();
    if (n == 0 || n > 20) return std::nullopt;

    const std::string ref_canon = simple_canonical(reference);
    double best_dist = 2.0;
    std::vector<std::size_t> best_members;

    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) members.push_back(i);
        }
        const std::size_t window = members.back() - members.front() + 1;
        if (window - members.size() > params.max_gap) continue;

        std::string joined;
        for (std::size_t i : members) {
            const std::string canon = simple_canonical(ordered[i].text);
            if (canon.empty()) continue;
            if (!joined.empty()) joined.push_back(' ');
            joined += canon;
        }
        const double dist = simple_normalized_distance(joined, ref_canon);
        const bool better =
            dist < best_dist ||
            (dist == best_dist && (members.size() < best_members.size() ||
                                   (members.size() == best_members.size() &&
                                    members < best_members)));
        if (better) {
            best_dist = dist;
            best_members = std::move(members);
        }
    }
    if (best_dist > params.max_norm_edit) return std::nullopt;
    textforge::bbox u = ordered[best_members.front()].box;
    for (std::size_t i : best_members) {
        u.x_min = std::min(u.x_min, ordered[i].box.x_min);
        u.y_min = std::min(u.y_min, ordered[i].box.y_min);
        u.x_max = std::max(u.x_max, ordered[i].box.x_max);
        u.y_max = std::max(u.y_max, ordered[i].box.y_max);
    }
    return textforge::grounded_span{reference, u};
}

} // namespace oracles
