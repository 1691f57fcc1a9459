#pragma once

#include "textforge/error.hpp"
#include "textforge/jsonl.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace textforge {

enum class speaker { user, assistant };

inline std::string_view speaker_name(speaker s) {
    return s == speaker::user ? "user" : "assistant";
}

struct conversation_turn {
    speaker role = speaker::user;
    std::string text;

    friend bool operator==(const conversation_turn &, const conversation_turn &) = default;
};

// One training example: an image reference, a task kind ("detection",
// "recognition", "spotting", or "conversation"), and ordered turns.
struct instruction_sample {
    std::string id;
    std::string image_ref;
    std::string task;
    std::vector<conversation_turn> turns;

    friend bool operator==(const instruction_sample &, const instruction_sample &) = default;
};

// Roles must strictly alternate starting with user.
inline void validate_alternation(const std::vector<conversation_turn> & turns) {
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const speaker expected = i % 2 == 0 ? speaker::user : speaker::assistant;
        if (turns[i].role != expected) {
            throw input_error("turn " + std::to_string(i) + ": expected role " +
                              std::string(speaker_name(expected)));
        }
    }
}

inline json to_json(const instruction_sample & sample) {
    json turns = json::array();
    for (const conversation_turn & t : sample.turns) {
        turns.push_back(json{{"role", speaker_name(t.role)}, {"text", t.text}});
    }
    return json{{"id", sample.id},
                {"image", sample.image_ref},
                {"task", sample.task},
                {"conversations", std::move(turns)}};
}

inline void save_samples(std::ostream & out, const std::vector<instruction_sample> & samples) {
    for (const instruction_sample & s : samples) out << to_json(s).dump() << '\n';
}

inline std::vector<instruction_sample> load_samples(std::istream & in) {
    std::vector<instruction_sample> samples;
    jsonl::for_each_record(in, [&samples](std::size_t line_no, const json & record) {
        instruction_sample s;
        s.id = jsonl::require_field(record, line_no, "id").get<std::string>();
        s.image_ref = jsonl::require_field(record, line_no, "image").get<std::string>();
        s.task = jsonl::require_field(record, line_no, "task").get<std::string>();
        for (const json & t : jsonl::require_field(record, line_no, "conversations")) {
            const std::string role = jsonl::require_field(t, line_no, "role").get<std::string>();
            if (role != "user" && role != "assistant") {
                throw input_error("line " + std::to_string(line_no) + ": unknown role " + role);
            }
            s.turns.push_back(conversation_turn{
                role == "user" ? speaker::user : speaker::assistant,
                jsonl::require_field(t, line_no, "text").get<std::string>()});
        }
        if (s.turns.empty()) {
            throw input_error("line " + std::to_string(line_no) + ": empty conversation");
        }
        samples.push_back(std::move(s));
    });
    return samples;
}

} // namespace textforge
