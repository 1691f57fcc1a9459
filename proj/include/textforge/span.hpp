#pragma once

#include "textforge/error.hpp"
#include "textforge/geometry.hpp"

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

// A text string paired with its normalized box: the unit of grounded
// notation in prompts and responses, written `"text"[x_min, y_min, x_max, y_max]`.
struct grounded_span {
    std::string text;
    bbox box;

    friend bool operator==(const grounded_span &, const grounded_span &) = default;
};

// One occurrence found by parse_spans, with its byte range in the input.
struct span_match {
    grounded_span span;
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline std::string serialize_box(const bbox & b) {
    return "[" + format_coord(b.x_min) + ", " + format_coord(b.y_min) + ", " +
           format_coord(b.x_max) + ", " + format_coord(b.y_max) + "]";
}

// Canonical notation: ASCII quotes around the text, box appended with no
// separator. Throws unserializable_text_error when the text contains an
// ASCII double quote (the grammar has no escape syntax).
inline std::string serialize_span(const grounded_span & s) {
    if (s.text.find('"') != std::string::npos) {
        throw unserializable_text_error("span text contains an ASCII double quote: " + s.text);
    }
    return "\"" + s.text + "\"" + serialize_box(s.box);
}

namespace detail {

constexpr std::string_view kLeftTypographic = "\xe2\x80\x9c";  // U+201C
constexpr std::string_view kRightTypographic = "\xe2\x80\x9d"; // U+201D

inline bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) {
    return s.size() - pos >= prefix.size() && s.compare(pos, prefix.size(), prefix) == 0;
}

inline void skip_ws(std::string_view s, std::size_t & pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) {
        ++pos;
    }
}

// Parse `[n, n, n, n]` at pos. Accepts whitespace around commas; a
// candidate is valid only when all four numbers parse, lie in [0,1], and
// describe a non-inverted box. Returns false without advancing on failure.
inline bool parse_tuple(std::string_view s, std::size_t pos, bbox & out, std::size_t & end) {
    if (pos >= s.size() || s[pos] != '[') return false;
    ++pos;
    double coords[4];
    for (int i = 0; i < 4; ++i) {
        skip_ws(s, pos);
        std::size_t tok_end = pos;
        while (tok_end < s.size() && s[tok_end] != ',' && s[tok_end] != ']' && s[tok_end] != ' ' &&
               s[tok_end] != '\t' && s[tok_end] != '\n' && s[tok_end] != '\r') {
            ++tok_end;
        }
        if (tok_end == pos) return false;
        double v = 0.0;
        const char * first = s.data() + pos;
        const char * last = s.data() + tok_end;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) return false;
        if (!(v >= 0.0 && v <= 1.0)) return false;
        coords[i] = v;
        pos = tok_end;
        skip_ws(s, pos);
        const char expected = i < 3 ? ',' : ']';
        if (pos >= s.size() || s[pos] != expected) return false;
        ++pos;
    }
    if (coords[0] > coords[2] || coords[1] > coords[3]) return false;
    out = bbox{coords[0], coords[1], coords[2], coords[3]};
    end = pos;
    return true;
}

// Quoted text followed immediately by a tuple. Quotes pair by kind: ASCII
// closes ASCII, U+201C closes with U+201D.
inline bool parse_quoted(std::string_view s, std::size_t pos, span_match & out) {
    std::string_view closer;
    std::size_t text_start = 0;
    if (s[pos] == '"') {
        closer = "\"";
        text_start = pos + 1;
    } else if (starts_with_at(s, pos, kLeftTypographic)) {
        closer = kRightTypographic;
        text_start = pos + kLeftTypographic.size();
    } else {
        return false;
    }
    const std::size_t close = s.find(closer, text_start);
    if (close == std::string_view::npos) return false;
    bbox box;
    std::size_t end = 0;
    if (!parse_tuple(s, close + closer.size(), box, end)) return false;
    out.span = grounded_span{std::string(s.substr(text_start, close - text_start)), box};
    out.begin = pos;
    out.end = end;
    return true;
}

} // namespace detail

// Extract every grounded span from model-generated text: left-to-right,
// non-overlapping. Quoted spans take `"text"[x, y, x, y]` (ASCII or
// typographic quotes); a bracketed 4-tuple with no preceding quote yields a
// span with empty text. Malformed fragments are skipped, never an error.
inline std::vector<span_match> parse_spans(std::string_view response) {
    std::vector<span_match> matches;
    std::size_t i = 0;
    while (i < response.size()) {
        const char c = response[i];
        if (c == '"' || detail::starts_with_at(response, i, detail::kLeftTypographic)) {
            span_match m;
            if (detail::parse_quoted(response, i, m)) {
                matches.push_back(std::move(m));
                i = matches.back().end;
                continue;
            }
        } else if (c == '[') {
            bbox box;
            std::size_t end = 0;
            if (detail::parse_tuple(response, i, box, end)) {
                matches.push_back(span_match{grounded_span{"", box}, i, end});
                i = end;
                continue;
            }
        }
        ++i;
    }
    return matches;
}

} // namespace textforge
