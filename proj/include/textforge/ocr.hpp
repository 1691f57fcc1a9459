#pragma once

#include "textforge/error.hpp"
#include "textforge/geometry.hpp"
#include "textforge/jsonl.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace textforge {

struct ocr_token {
    std::string text;
    bbox box;
    std::optional<double> confidence;
};

// One image's OCR output. Token boxes are always stored normalized and
// quantized, whatever the ingestion format carried.
struct ocr_document {
    std::string id;
    std::string image_ref;
    int width = 0;
    int height = 0;
    std::string engine;
    std::vector<ocr_token> tokens;
};

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

// Ingestion format, line-delimited records:
//   {"id", "image", "image_width", "image_height", "engine",
//    "pixel_coords", "tokens": [{"text", "box": [4 numbers], "confidence"?}]}
inline std::vector<ocr_document> load_ocr(std::istream & in) {
    std::vector<ocr_document> docs;
    std::set<std::string> seen_ids;
    jsonl::for_each_record(in, [&docs, &seen_ids](std::size_t line_no, const json & record) {
        const std::string prefix = "line " + std::to_string(line_no) + ": ";
        ocr_document doc;
        doc.id = jsonl::require_field(record, line_no, "id").get<std::string>();
        if (!seen_ids.insert(doc.id).second) {
            throw input_error(prefix + "duplicate document id " + doc.id);
        }
        doc.image_ref = jsonl::require_field(record, line_no, "image").get<std::string>();
        doc.width = jsonl::require_field(record, line_no, "image_width").get<int>();
        doc.height = jsonl::require_field(record, line_no, "image_height").get<int>();
        doc.engine = jsonl::require_field(record, line_no, "engine").get<std::string>();
        const bool pixel_coords = jsonl::require_field(record, line_no, "pixel_coords").get<bool>();
        if (doc.width <= 0 || doc.height <= 0) {
            throw input_error(prefix + "invalid image dimensions");
        }
        const json & tokens = jsonl::require_field(record, line_no, "tokens");
        std::size_t index = 0;
        for (const json & tok : tokens) {
            const std::string tok_prefix = prefix + "token " + std::to_string(index) + ": ";
            ocr_token t;
            t.text = jsonl::require_field(tok, line_no, "text").get<std::string>();
            if (is_blank(t.text)) throw input_error(tok_prefix + "empty text");
            const json & box = jsonl::require_field(tok, line_no, "box");
            if (!box.is_array() || box.size() != 4) {
                throw input_error(tok_prefix + "box must be a 4-number list");
            }
            const double c0 = box[0].get<double>(), c1 = box[1].get<double>(),
                         c2 = box[2].get<double>(), c3 = box[3].get<double>();
            try {
                if (pixel_coords) {
                    t.box = normalize(pixel_box{c0, c1, c2, c3}, doc.width, doc.height);
                } else {
                    const bbox b{c0, c1, c2, c3};
                    if (!is_valid(b)) throw invalid_geometry_error("inverted or out-of-range box");
                    t.box = quantize(b);
                }
            } catch (const invalid_geometry_error & e) {
                throw input_error(tok_prefix + e.what());
            }
            if (tok.contains("confidence")) {
                const double conf = tok["confidence"].get<double>();
                if (conf < 0.0 || conf > 1.0) throw input_error(tok_prefix + "confidence out of range");
                t.confidence = conf;
            }
            doc.tokens.push_back(std::move(t));
            ++index;
        }
        docs.push_back(std::move(doc));
    });
    return docs;
}

inline json to_json(const ocr_document & doc) {
    json tokens = json::array();
    for (const ocr_token & t : doc.tokens) {
        json tok{{"text", t.text}, {"box", {t.box.x_min, t.box.y_min, t.box.x_max, t.box.y_max}}};
        if (t.confidence) tok["confidence"] = *t.confidence;
        tokens.push_back(std::move(tok));
    }
    return json{{"id", doc.id},         {"image", doc.image_ref},
                {"image_width", doc.width}, {"image_height", doc.height},
                {"engine", doc.engine}, {"pixel_coords", false},
                {"tokens", std::move(tokens)}};
}

inline void save_ocr(std::ostream & out, const std::vector<ocr_document> & docs) {
    for (const ocr_document & doc : docs) out << to_json(doc).dump() << '\n';
}

// True iff some single token covers at least `threshold` of the image area
// (inclusive). A document with no tokens never passes.
inline bool passes_area_filter(const ocr_document & doc, double threshold = 0.05) {
    for (const ocr_token & t : doc.tokens) {
        if (area(t.box) >= threshold) return true;
    }
    return false;
}

namespace detail {

inline double y_center(const bbox & b) { return (b.y_min + b.y_max) / 2.0; }
inline double box_height(const bbox & b) { return b.y_max - b.y_min; }

inline double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

} // namespace detail

// Deterministic top-to-bottom, left-to-right order. Tokens are swept by
// vertical center and grouped greedily: a token joins the line being built
// iff its center is within line_tolerance x the line's median height of the
// line's running center (mean of member centers). Lines are then ordered by
// top edge and tokens within a line by x_min; ties fall back to y_min, then
// the original index.
inline std::vector<ocr_token> reading_order(const std::vector<ocr_token> & tokens,
                                            double line_tolerance = 0.5) {
    std::vector<std::size_t> order(tokens.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ca = detail::y_center(tokens[a].box), cb = detail::y_center(tokens[b].box);
        if (ca != cb) return ca < cb;
        if (tokens[a].box.y_min != tokens[b].box.y_min) return tokens[a].box.y_min < tokens[b].box.y_min;
        if (tokens[a].box.x_min != tokens[b].box.x_min) return tokens[a].box.x_min < tokens[b].box.x_min;
        return a < b;
    });

    struct line {
        std::vector<std::size_t> members;
        double center_sum = 0.0;
        std::vector<double> heights;
    };
    std::vector<line> lines;
    for (std::size_t idx : order) {
        const double c = detail::y_center(tokens[idx].box);
        bool joined = false;
        if (!lines.empty()) {
            line & current = lines.back();
            const double running_center = current.center_sum / current.members.size();
            const double med_h = detail::median(current.heights);
            if (std::abs(c - running_center) <= line_tolerance * med_h) {
                current.members.push_back(idx);
                current.center_sum += c;
                current.heights.push_back(detail::box_height(tokens[idx].box));
                joined = true;
            }
        }
        if (!joined) {
            lines.push_back(line{{idx}, c, {detail::box_height(tokens[idx].box)}});
        }
    }

    for (line & l : lines) {
        std::sort(l.members.begin(), l.members.end(), [&](std::size_t a, std::size_t b) {
            if (tokens[a].box.x_min != tokens[b].box.x_min) return tokens[a].box.x_min < tokens[b].box.x_min;
            if (tokens[a].box.y_min != tokens[b].box.y_min) return tokens[a].box.y_min < tokens[b].box.y_min;
            return a < b;
        });
    }
    std::sort(lines.begin(), lines.end(), [&](const line & a, const line & b) {
        double top_a = 1.0, top_b = 1.0, left_a = 1.0, left_b = 1.0;
        for (std::size_t i : a.members) {
            top_a = std::min(top_a, tokens[i].box.y_min);
            left_a = std::min(left_a, tokens[i].box.x_min);
        }
        for (std::size_t i : b.members) {
            top_b = std::min(top_b, tokens[i].box.y_min);
            left_b = std::min(left_b, tokens[i].box.x_min);
        }
        if (top_a != top_b) return top_a < top_b;
        if (left_a != left_b) return left_a < left_b;
        return a.members.front() < b.members.front();
    });

    std::vector<ocr_token> result;
    result.reserve(tokens.size());
    for (const line & l : lines) {
        for (std::size_t i : l.members) result.push_back(tokens[i]);
    }
    return result;
}

} // namespace textforge
