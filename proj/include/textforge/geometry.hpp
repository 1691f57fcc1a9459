#pragma once

#include "textforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace textforge {

// Axis-aligned rectangle in normalized image coordinates: each value is a
// fraction of the image width/height in [0,1], origin at the top-left
// corner, x rightward, y downward.
struct bbox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    friend bool operator==(const bbox &, const bbox &) = default;
};

inline bool is_valid(const bbox & b) {
    return 0.0 <= b.x_min && b.x_min <= b.x_max && b.x_max <= 1.0 &&
           0.0 <= b.y_min && b.y_min <= b.y_max && b.y_max <= 1.0;
}

namespace detail {

// Round to 3 decimals, half away from zero.
inline double quantize_coord(double v) {
    return std::round(v * 1000.0) / 1000.0;
}

} // namespace detail

// Snap every coordinate to the 3-decimal grid (round half away from zero).
inline bbox quantize(const bbox & b) {
    bbox q{detail::quantize_coord(b.x_min), detail::quantize_coord(b.y_min),
           detail::quantize_coord(b.x_max), detail::quantize_coord(b.y_max)};
    if (q.x_min > q.x_max) std::swap(q.x_min, q.x_max);
    if (q.y_min > q.y_max) std::swap(q.y_min, q.y_max);
    return q;
}

inline bool is_quantized(const bbox & b) {
    return quantize(b) == b;
}

// Pixel-space rectangle as produced by OCR engines.
struct pixel_box {
    double left = 0.0;
    double top = 0.0;
    double right = 0.0;
    double bottom = 0.0;
};

// Map a pixel rectangle into normalized, quantized coordinates.
inline bbox normalize(const pixel_box & px, double width, double height) {
    if (width <= 0.0 || height <= 0.0) {
        throw invalid_geometry_error("degenerate image dimensions " + std::to_string(width) +
                                     "x" + std::to_string(height));
    }
    if (px.left > px.right || px.top > px.bottom) {
        throw invalid_geometry_error("inverted rectangle");
    }
    if (px.left < 0.0 || px.top < 0.0 || px.right > width || px.bottom > height) {
        throw invalid_geometry_error("rectangle outside image bounds");
    }
    bbox b = quantize(bbox{px.left / width, px.top / height, px.right / width, px.bottom / height});
    b.x_min = std::clamp(b.x_min, 0.0, 1.0);
    b.y_min = std::clamp(b.y_min, 0.0, 1.0);
    b.x_max = std::clamp(b.x_max, 0.0, 1.0);
    b.y_max = std::clamp(b.y_max, 0.0, 1.0);
    return b;
}

inline double area(const bbox & b) {
    return (b.x_max - b.x_min) * (b.y_max - b.y_min);
}

// Intersection over union; 0 when disjoint or when both boxes are degenerate.
inline double iou(const bbox & a, const bbox & b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = area(a) + area(b) - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

// Componentwise hull: min of mins, max of maxes.
inline bbox union_box(const std::vector<bbox> & boxes) {
    if (boxes.empty()) throw error("union_box: empty input");
    bbox u = boxes.front();
    for (const bbox & b : boxes) {
        u.x_min = std::min(u.x_min, b.x_min);
        u.y_min = std::min(u.y_min, b.y_min);
        u.x_max = std::max(u.x_max, b.x_max);
        u.y_max = std::max(u.y_max, b.y_max);
    }
    return u;
}

// Print a coordinate with minimal decimals on the 3-decimal grid: trailing
// zeros trimmed, at least one integer digit, no exponent ("0.9", "0", "1").
inline std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

} // namespace textforge
