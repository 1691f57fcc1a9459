#pragma once

#include "textforge/error.hpp"
#include "textforge/span.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string format_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

} // namespace detail

// SVG overlay: the image by reference, one rectangle per predicted span
// (with its text as a label) and dashed rectangles for ground-truth boxes.
inline std::string emit_overlay(std::string_view image_ref, int width, int height,
                                const std::vector<grounded_span> & spans,
                                const std::vector<bbox> & gt_boxes = {}) {
    if (width <= 0 || height <= 0) {
        throw invalid_geometry_error("overlay dimensions must be positive");
    }
    const double w = width, h = height;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "  <style>\n"
           "    .pred { fill: none; stroke: #e5484d; stroke-width: 2; }\n"
           "    .gt { fill: none; stroke: #30a46c; stroke-width: 2; stroke-dasharray: 6 3; }\n"
           "    .label { fill: #e5484d; font-family: sans-serif; font-size: 14px; }\n"
           "  </style>\n";
    svg += "  <image href=\"" + detail::xml_escape(image_ref) + "\" x=\"0\" y=\"0\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\"/>\n";
    for (const bbox & b : gt_boxes) {
        svg += "  <rect class=\"gt\" x=\"" + detail::format_px(b.x_min * w) + "\" y=\"" +
               detail::format_px(b.y_min * h) + "\" width=\"" +
               detail::format_px((b.x_max - b.x_min) * w) + "\" height=\"" +
               detail::format_px((b.y_max - b.y_min) * h) + "\"/>\n";
    }
    for (const grounded_span & s : spans) {
        const bbox & b = s.box;
        svg += "  <rect class=\"pred\" x=\"" + detail::format_px(b.x_min * w) + "\" y=\"" +
               detail::format_px(b.y_min * h) + "\" width=\"" +
               detail::format_px((b.x_max - b.x_min) * w) + "\" height=\"" +
               detail::format_px((b.y_max - b.y_min) * h) + "\"/>\n";
        if (!s.text.empty()) {
            const double label_y = std::max(14.0, b.y_min * h - 4.0);
            svg += "  <text class=\"label\" x=\"" + detail::format_px(b.x_min * w) + "\" y=\"" +
                   detail::format_px(label_y) + "\">" + detail::xml_escape(s.text) + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace textforge
