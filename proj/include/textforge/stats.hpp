#pragma once

#include "textforge/jsonl.hpp"
#include "textforge/samples.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace textforge {

inline std::size_t whitespace_token_count(std::string_view s) {
    std::size_t count = 0;
    bool in_token = false;
    for (char c : s) {
        const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

// Corpus statistics. Lengths are whitespace tokens, deliberately not subword
// tokens: subword counts depend on a model-specific tokenizer and are not
// comparable across setups.
struct stats_report {
    std::size_t samples = 0;
    std::size_t user_turns = 0;
    std::size_t assistant_turns = 0;
    std::size_t user_tokens = 0;
    std::size_t assistant_tokens = 0;
    std::map<std::string, std::size_t> per_task;

    void add(const instruction_sample & sample) {
        ++samples;
        ++per_task[sample.task];
        for (const conversation_turn & t : sample.turns) {
            if (t.role == speaker::user) {
                ++user_turns;
                user_tokens += whitespace_token_count(t.text);
            } else {
                ++assistant_turns;
                assistant_tokens += whitespace_token_count(t.text);
            }
        }
    }

    std::optional<double> mean_user_tokens() const {
        if (user_turns == 0) return std::nullopt;
        return static_cast<double>(user_tokens) / static_cast<double>(user_turns);
    }

    std::optional<double> mean_assistant_tokens() const {
        if (assistant_turns == 0) return std::nullopt;
        return static_cast<double>(assistant_tokens) / static_cast<double>(assistant_turns);
    }
};

inline json to_json(const stats_report & report) {
    json per_task = json::object();
    for (const auto & [task_name, count] : report.per_task) per_task[task_name] = count;
    const auto user_mean = report.mean_user_tokens();
    const auto assistant_mean = report.mean_assistant_tokens();
    return json{{"samples", report.samples},
                {"user_turns", report.user_turns},
                {"assistant_turns", report.assistant_turns},
                {"mean_user_tokens", user_mean ? json(*user_mean) : json()},
                {"mean_assistant_tokens", assistant_mean ? json(*assistant_mean) : json()},
                {"per_task", std::move(per_task)},
                {"tokenizer", "whitespace"}};
}

} // namespace textforge
