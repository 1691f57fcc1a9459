#pragma once

#include "textforge/dedup.hpp"
#include "textforge/error.hpp"
#include "textforge/templates.hpp"

#include <cstdint>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace textforge {

// Effective settings of a pipeline run. Defaults trace to the corpus rules
// (5% area floor, IoU 0.3 sanitization floor, caps of 10 per document).
struct forge_config {
    std::uint64_t seed = 0;
    double min_area = 0.05;
    std::set<task> tasks{task::detection, task::recognition, task::spotting};
    std::size_t detection_cap = 10;
    std::size_t recognition_cap = 10;
    double iou_floor = 0.3;
    double line_tolerance = 0.5;
    std::vector<std::string> banned_phrases{"based on the paddleocr", "according to the ocr"};
    std::string llm_model = "gpt-4";
    double llm_temperature = 0.7;
    std::size_t llm_attempts = 3;
    std::size_t llm_max_in_flight = 4;
    std::size_t workers = 1;
};

namespace detail {

inline std::string join(const std::vector<std::string> & parts, char sep) {
    std::string out;
    for (const std::string & p : parts) {
        if (!out.empty()) out.push_back(sep);
        out += p;
    }
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

} // namespace detail

inline std::string tasks_to_string(const std::set<task> & tasks) {
    std::vector<std::string> names;
    for (task t : all_tasks) {
        if (tasks.count(t)) names.emplace_back(task_name(t));
    }
    return detail::join(names, ',');
}

inline std::set<task> tasks_from_string(std::string_view s) {
    std::set<task> tasks;
    for (const std::string & name : detail::split(s, ',')) {
        if (!name.empty()) tasks.insert(task_from_name(name));
    }
    if (tasks.empty()) throw config_error("task list must not be empty");
    return tasks;
}

// Flat key=value config file; '#' starts a comment line.
inline void apply_config_line(forge_config & config, std::string_view key, std::string_view value) {
    const std::string v(value);
    try {
        if (key == "seed") config.seed = std::stoull(v);
        else if (key == "min_area") config.min_area = std::stod(v);
        else if (key == "tasks") config.tasks = tasks_from_string(v);
        else if (key == "detection_cap") config.detection_cap = std::stoull(v);
        else if (key == "recognition_cap") config.recognition_cap = std::stoull(v);
        else if (key == "iou_floor") config.iou_floor = std::stod(v);
        else if (key == "line_tolerance") config.line_tolerance = std::stod(v);
        else if (key == "banned_phrases") config.banned_phrases = detail::split(v, '|');
        else if (key == "llm_model") config.llm_model = v;
        else if (key == "llm_temperature") config.llm_temperature = std::stod(v);
        else if (key == "llm_attempts") config.llm_attempts = std::stoull(v);
        else if (key == "llm_max_in_flight") config.llm_max_in_flight = std::stoull(v);
        else if (key == "workers") config.workers = std::stoull(v);
        else throw config_error("unknown config key: " + std::string(key));
    } catch (const std::invalid_argument &) {
        throw config_error("invalid value for " + std::string(key) + ": " + v);
    } catch (const std::out_of_range &) {
        throw config_error("invalid value for " + std::string(key) + ": " + v);
    }
}

inline void load_config(std::istream & in, forge_config & config) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(line_no) + ": expected key=value");
        }
        auto strip = [](std::string_view s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string_view::npos ? std::string_view{} : s.substr(b, e - b + 1);
        };
        apply_config_line(config, strip(std::string_view(line).substr(0, eq)),
                          strip(std::string_view(line).substr(eq + 1)));
    }
}

inline void validate(const forge_config & config) {
    if (config.min_area < 0.0 || config.min_area > 1.0) {
        throw config_error("min_area must be in [0,1]");
    }
    if (config.iou_floor < 0.0 || config.iou_floor > 1.0) {
        throw config_error("iou_floor must be in [0,1]");
    }
    if (config.tasks.empty()) throw config_error("tasks must not be empty");
    if (config.workers == 0) throw config_error("workers must be >= 1");
}

// Canonical serialization of the effective config; its MD5 is the digest
// printed in every run's reproducibility header.
inline std::string canonical_config(const forge_config & c) {
    std::ostringstream out;
    out << "banned_phrases=" << detail::join(c.banned_phrases, '|') << '\n'
        << "detection_cap=" << c.detection_cap << '\n'
        << "iou_floor=" << c.iou_floor << '\n'
        << "line_tolerance=" << c.line_tolerance << '\n'
        << "llm_attempts=" << c.llm_attempts << '\n'
        << "llm_max_in_flight=" << c.llm_max_in_flight << '\n'
        << "llm_model=" << c.llm_model << '\n'
        << "llm_temperature=" << c.llm_temperature << '\n'
        << "min_area=" << c.min_area << '\n'
        << "recognition_cap=" << c.recognition_cap << '\n'
        << "seed=" << c.seed << '\n'
        << "tasks=" << tasks_to_string(c.tasks) << '\n'
        << "workers=" << c.workers << '\n';
    return out.str();
}

inline std::string config_digest(const forge_config & c) {
    return content_hash(canonical_config(c));
}

} // namespace textforge
