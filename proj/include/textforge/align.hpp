#pragma once

#include "textforge/geometry.hpp"
#include "textforge/ocr.hpp"
#include "textforge/span.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

namespace detail {

inline std::vector<std::uint32_t> decode_utf8(std::string_view s) {
    std::vector<std::uint32_t> cps;
    cps.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        std::uint32_t cp = c;
        std::size_t extra = 0;
        if ((c & 0xe0) == 0xc0) { cp = c & 0x1f; extra = 1; }
        else if ((c & 0xf0) == 0xe0) { cp = c & 0x0f; extra = 2; }
        else if ((c & 0xf8) == 0xf0) { cp = c & 0x07; extra = 3; }
        if (i + extra >= s.size() && extra > 0) { cps.push_back(c); ++i; continue; }
        bool ok = true;
        for (std::size_t k = 1; k <= extra; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (cc & 0x3f);
        }
        if (!ok) { cps.push_back(c); ++i; continue; }
        cps.push_back(cp);
        i += extra + 1;
    }
    return cps;
}

} // namespace detail

// Casefold, collapse whitespace, strip leading/trailing punctuation from
// each whitespace-delimited word.
inline std::string canonicalize_text(std::string_view s) {
    std::string out;
    std::size_t i = 0;
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    const auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        std::size_t b = i, e = j;
        while (b < e && is_punct(s[b])) ++b;
        while (e > b && is_punct(s[e - 1])) --e;
        if (b < e) {
            if (!out.empty()) out.push_back(' ');
            for (std::size_t k = b; k < e; ++k) {
                out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[k]))));
            }
        }
        i = j;
    }
    return out;
}

// Unit-cost Levenshtein distance over code points.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::vector<std::uint32_t> ca = detail::decode_utf8(a);
    const std::vector<std::uint32_t> cb = detail::decode_utf8(b);
    const std::size_t n = ca.size(), m = cb.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// levenshtein / max(|a|, |b|) in code points; 0 when both are empty.
inline double normalized_edit_distance(std::string_view a, std::string_view b) {
    const std::size_t la = detail::decode_utf8(a).size();
    const std::size_t lb = detail::decode_utf8(b).size();
    const std::size_t longest = std::max(la, lb);
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

struct align_params {
    std::size_t max_gap = 2;        // tokens that may be skipped inside the window
    double max_norm_edit = 0.3;     // acceptance threshold on normalized distance
    double line_tolerance = 0.5;    // forwarded to reading_order
};

namespace detail {

struct align_candidate {
    double dist = 2.0;
    std::vector<std::size_t> members; // indices into the reading-order sequence
};

// (distance, fewer tokens, earliest start, earliest end, lexicographic).
inline bool better(const align_candidate & a, const align_candidate & b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
}

} // namespace detail

// Find the token run (contiguous in reading order, up to max_gap interior
// skips) whose space-joined canonical text is closest to the canonical
// reference. Returns the reference paired with the union of the matched
// boxes when the best normalized edit distance is within max_norm_edit.
inline std::optional<grounded_span> align_metadata(const ocr_document & doc,
                                                   std::string_view reference,
                                                   const align_params & params = {}) {
    if (is_blank(reference)) return std::nullopt;
    const std::vector<ocr_token> ordered = reading_order(doc.tokens, params.line_tolerance);
    if (ordered.empty()) return std::nullopt;

    const std::string ref_canon = canonicalize_text(reference);
    const std::size_t ref_len = detail::decode_utf8(ref_canon).size();
    std::vector<std::string> canon(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) canon[i] = canonicalize_text(ordered[i].text);

    detail::align_candidate best;
    std::vector<std::size_t> members;

    // Depth-first over "include or skip the next token". Every state whose
    // last action was an include is a candidate. Once the joined text is so
    // long that (len-ref_len)/len exceeds the threshold, no extension can
    // come back under it, so the branch is cut.
    auto extend = [&](auto && self, std::size_t next, std::size_t skipped,
                      const std::string & joined) -> void {
        detail::align_candidate cand{normalized_edit_distance(joined, ref_canon), members};
        if (detail::better(cand, best)) best = std::move(cand);

        const std::size_t joined_len = detail::decode_utf8(joined).size();
        if (joined_len > ref_len &&
            static_cast<double>(joined_len - ref_len) >
                params.max_norm_edit * static_cast<double>(joined_len)) {
            return;
        }
        for (std::size_t j = next; j < ordered.size() && j - next <= params.max_gap - skipped; ++j) {
            std::string grown = joined;
            if (!canon[j].empty()) {
                if (!grown.empty()) grown.push_back(' ');
                grown += canon[j];
            }
            members.push_back(j);
            self(self, j + 1, skipped + (j - next), grown);
            members.pop_back();
        }
    };

    for (std::size_t start = 0; start < ordered.size(); ++start) {
        members.assign(1, start);
        extend(extend, start + 1, 0, canon[start]);
    }

    if (best.dist > params.max_norm_edit) return std::nullopt;
    std::vector<bbox> boxes;
    boxes.reserve(best.members.size());
    for (std::size_t i : best.members) boxes.push_back(ordered[i].box);
    return grounded_span{std::string(reference), union_box(boxes)};
}

} // namespace textforge
