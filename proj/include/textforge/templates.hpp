#pragma once

#include "textforge/error.hpp"
#include "textforge/jsonl.hpp"

#include <array>
#include <cctype>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

// The three pre-training tasks: text -> box, box -> text, and
// all-text-with-boxes.
enum class task { detection, recognition, spotting };

constexpr std::array<task, 3> all_tasks{task::detection, task::recognition, task::spotting};

inline std::string_view task_name(task t) {
    switch (t) {
        case task::detection: return "detection";
        case task::recognition: return "recognition";
        case task::spotting: return "spotting";
    }
    return "";
}

inline task task_from_name(std::string_view name) {
    for (task t : all_tasks) {
        if (task_name(t) == name) return t;
    }
    throw config_error("unknown task: " + std::string(name));
}

// Placeholder markers as they appear in the instruction templates. The
// coordinate marker doubles as literal answer-format guidance in detection
// instructions, so it is only replaced when a binding supplies it.
constexpr std::string_view kTextPlaceholder = "<text>";
constexpr std::string_view kBoxPlaceholder = "[xmin, ymin, xmax, ymax]";

class template_set {
  public:
    const std::vector<std::string> & for_task(task t) const { return templates_.at(t); }

    void add(task t, std::string tmpl) { templates_[t].push_back(std::move(tmpl)); }

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto & [t, v] : templates_) n += v.size();
        return n;
    }

    // Extension file: line-delimited records {"task": ..., "template": ...}.
    void load_extension(std::istream & in) {
        jsonl::for_each_record(in, [this](std::size_t line_no, const json & record) {
            const task t =
                task_from_name(jsonl::require_field(record, line_no, "task").get<std::string>());
            add(t, jsonl::require_field(record, line_no, "template").get<std::string>());
        });
    }

  private:
    std::map<task, std::vector<std::string>> templates_;
};

// The 30 builtin instruction templates, 10 per task, in table order.
inline const template_set & builtin_templates() {
    static const template_set set = [] {
        template_set s;
        static constexpr const char * detection[] = {
            "Can you furnish the bounding box coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image?",
            "Please supply the coordinates [xmin, ymin, xmax, ymax] for the text <text> within the image.",
            "Could you kindly provide the bounding box or coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image?",
            "I would like to know the coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image, please.",
            "Please identify the bounding box coordinates [xmin, ymin, xmax, ymax] for the text <text> within the image.",
            "Can you please give me the coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image?",
            "Kindly provide the bounding box coordinates [xmin, ymin, xmax, ymax] for the text <text> within the image.",
            "Please retrieve the coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image.",
            "I'm looking for the bounding box coordinates [xmin, ymin, xmax, ymax] for the text <text> in the image, could you provide them?",
            "Please locate and share the bounding box coordinates [xmin, ymin, xmax, ymax] for the text <text> within the image.",
        };
        static constexpr const char * recognition[] = {
            "Please recognize and supply the text enclosed within the given bounding box [xmin, ymin, xmax, ymax].",
            "Can you identify and provide the text that falls within the specified coordinates [xmin, ymin, xmax, ymax]?",
            "I'd like you to detect and furnish the text contained within the provided bounding box [xmin, ymin, xmax, ymax].",
            "Could you please extract and share the text within the defined coordinates [xmin, ymin, xmax, ymax]?",
            "Please locate and provide the text that is encompassed by the given bounding box [xmin, ymin, xmax, ymax].",
            "Can you recognize and output the text enclosed within the specified coordinates [xmin, ymin, xmax, ymax]?",
            "I'm looking for you to identify and deliver the text found within the provided bounding box [xmin, ymin, xmax, ymax].",
            "Could you extract and share the text within the defined coordinates [xmin, ymin, xmax, ymax], if available?",
            "Please recognize and provide the text contained within the specified bounding box [xmin, ymin, xmax, ymax].",
            "Can you identify and furnish the text that falls within the provided coordinates [xmin, ymin, xmax, ymax]?",
        };
        static constexpr const char * spotting[] = {
            "Could you locate the text in the image and furnish the coordinates [xmin, ymin, xmax, ymax] for each text block?",
            "Please recognize all the text within the image and supply the coordinates [xmin, ymin, xmax, ymax] for each text element.",
            "Can you identify and extract all the text from the image, and include the coordinates [xmin, ymin, xmax, ymax] for each text block?",
            "I would like you to recognize the text within the image and provide the bounding box [xmin, ymin, xmax, ymax] for each piece of text.",
            "Kindly identify and extract text from the image, and supply the coordinates [xmin, ymin, xmax, ymax] for each text portion.",
            "Can you recognize all the text present in the image and provide the corresponding bounding boxes or coordinates [xmin, ymin, xmax, ymax]?",
            "I'm looking for you to detect and list all text within the image, accompanied by their bounding box coordinates [xmin, ymin, xmax, ymax].",
            "Please analyze the image for text, and for each text segment, provide the bounding box coordinates [xmin, ymin, xmax, ymax].",
            "I'd appreciate it if you could identify and provide the coordinates [xmin, ymin, xmax, ymax] for all text found in the image.",
            "Kindly pinpoint the text in the image and provide the coordinates [xmin, ymin, xmax, ymax] for each text block.",
        };
        for (const char * t : detection) s.add(task::detection, t);
        for (const char * t : recognition) s.add(task::recognition, t);
        for (const char * t : spotting) s.add(task::spotting, t);
        return s;
    }();
    return set;
}

inline void replace_all(std::string & s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

// Substitute placeholders. An angle marker like `<text>` left unbound is an
// error; bindings that match nothing are reported through `unused` (warning,
// not error).
inline std::string instantiate(std::string_view tmpl,
                               const std::map<std::string, std::string> & bindings,
                               std::vector<std::string> * unused = nullptr) {
    std::size_t open = tmpl.find('<');
    while (open != std::string_view::npos) {
        std::size_t close = open + 1;
        while (close < tmpl.size() &&
               (std::isalnum(static_cast<unsigned char>(tmpl[close])) || tmpl[close] == '_')) {
            ++close;
        }
        if (close > open + 1 && close < tmpl.size() && tmpl[close] == '>') {
            const std::string marker(tmpl.substr(open, close - open + 1));
            if (!bindings.count(marker)) throw error("unresolved placeholder " + marker);
        }
        open = tmpl.find('<', open + 1);
    }
    std::string out(tmpl);
    for (const auto & [placeholder, value] : bindings) {
        if (out.find(placeholder) == std::string::npos) {
            if (unused) unused->push_back(placeholder);
            continue;
        }
        replace_all(out, placeholder, value);
    }
    return out;
}

// Deterministic generator for reproducible dataset builds. mt19937_64 has a
// standard-specified sequence, so the same seed yields the same picks on
// every platform.
using seeded_rng = std::mt19937_64;

inline std::size_t uniform_index(seeded_rng & rng, std::size_t n) {
    // Modulo of a 64-bit draw; bias is < 2^-50 for any realistic n.
    return static_cast<std::size_t>(rng() % n);
}

// Uniform choice over the task's templates; advancing the generator is the
// only side effect.
inline const std::string & pick(const template_set & set, task t, seeded_rng & rng) {
    const auto & pool = set.for_task(t);
    if (pool.empty()) throw error("no templates loaded for task " + std::string(task_name(t)));
    return pool[uniform_index(rng, pool.size())];
}

} // namespace textforge
