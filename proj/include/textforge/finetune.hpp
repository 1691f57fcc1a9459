#pragma once

#include "textforge/align.hpp"
#include "textforge/ocr.hpp"
#include "textforge/samples.hpp"
#include "textforge/span.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace textforge {

// Inputs combined into one generation prompt: captions from an image
// captioner plus the serialized OCR results of each engine.
struct prompt_payload {
    std::string image_id;
    std::vector<std::string> captions;
    std::vector<std::pair<std::string, std::vector<std::string>>> ocr_blocks;
};

inline constexpr std::string_view kDefaultGenerationInstructions =
    "Design a multi-turn conversation between a curious user and an assistant about the "
    "textual content of this image. Ask varied questions about the text shown in the image "
    "and have the assistant answer them. Whenever an answer cites text from the image, the "
    "answer must include that text together with its bounding box in the form "
    "\"text\"[x_min, y_min, x_max, y_max]. Write each question on a line starting with "
    "\"Q<n>:\" and each answer on a line starting with \"A<n>:\". Do not mention the OCR "
    "engines or the captions as sources.";

inline prompt_payload build_payload(const std::string & image_id,
                                    std::vector<std::string> captions,
                                    const std::vector<ocr_document> & docs,
                                    double line_tolerance = 0.5) {
    prompt_payload payload;
    payload.image_id = image_id;
    payload.captions = std::move(captions);
    for (const ocr_document & doc : docs) {
        std::vector<std::string> lines;
        for (const ocr_token & t : reading_order(doc.tokens, line_tolerance)) {
            if (t.text.find('"') != std::string::npos) continue;
            lines.push_back(serialize_span(grounded_span{t.text, t.box}));
        }
        payload.ocr_blocks.emplace_back(doc.engine, std::move(lines));
    }
    return payload;
}

// Renders the generation prompt: captions section, one "<engine> Results"
// block per OCR source with one serialized span per line, then the
// generation instructions.
inline std::string build_finetune_prompt(
    const prompt_payload & payload,
    std::string_view instructions = kDefaultGenerationInstructions) {
    if (payload.captions.empty()) {
        throw error("prompt payload for " + payload.image_id + " has no captions");
    }
    if (payload.ocr_blocks.empty()) {
        throw error("prompt payload for " + payload.image_id + " has no OCR blocks");
    }
    std::string out = "Captions generated by BLIP-2\n";
    for (const std::string & caption : payload.captions) {
        out += caption;
        out.push_back('\n');
    }
    for (const auto & [engine, lines] : payload.ocr_blocks) {
        out += engine + " Results\n";
        for (const std::string & line : lines) {
            out += line;
            out.push_back('\n');
        }
    }
    out.push_back('\n');
    out += instructions;
    return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Marker prefixes like "Q1:", "A:", "Question 2:", "USER:". Returns the
// role and the offset where content starts, or nullopt.
inline std::optional<std::pair<speaker, std::size_t>> turn_marker(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    static constexpr std::pair<std::string_view, speaker> kWords[] = {
        {"QUESTION", speaker::user}, {"ANSWER", speaker::assistant},
        {"USER", speaker::user},     {"ASSISTANT", speaker::assistant},
        {"Q", speaker::user},        {"A", speaker::assistant},
    };
    for (const auto & [word, role] : kWords) {
        if (line.size() - i < word.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < word.size(); ++k) {
            if (std::toupper(static_cast<unsigned char>(line[i + k])) != word[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::size_t j = i + word.size();
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        if (j < line.size() && (line[j] == ':' || line[j] == '.')) {
            ++j;
            if (j < line.size() && line[j] == ' ') ++j;
            return std::make_pair(role, j);
        }
    }
    return std::nullopt;
}

} // namespace detail

// Split a raw completion into turns. Lines starting with a Q/A-style marker
// open a turn; marker-free lines continue the current turn. Text before the
// first marker is discarded.
inline std::vector<conversation_turn> parse_conversation_text(std::string_view raw) {
    std::vector<conversation_turn> turns;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        const std::size_t nl = raw.find('\n', pos);
        const std::string_view line =
            raw.substr(pos, nl == std::string_view::npos ? raw.size() - pos : nl - pos);
        if (auto marker = detail::turn_marker(line)) {
            turns.push_back(conversation_turn{marker->first, detail::trim(line.substr(marker->second))});
        } else if (!turns.empty() && !detail::trim(line).empty()) {
            turns.back().text += "\n" + detail::trim(line);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return turns;
}

struct sanitize_params {
    std::vector<std::string> banned_phrases{"based on the paddleocr", "according to the ocr"};
    double iou_floor = 0.3;
    std::size_t max_union_window = 4; // consecutive reading-order tokens merged per candidate
    double line_tolerance = 0.5;
};

struct sanitize_report {
    std::size_t removed_phrases = 0;
    std::size_t dropped_turn_pairs = 0;
    std::size_t invalid_boxes = 0;
    bool kept = false;
};

namespace detail {

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::size_t remove_phrases(std::string & text, const std::vector<std::string> & phrases) {
    std::size_t removed = 0;
    for (const std::string & phrase : phrases) {
        if (phrase.empty()) continue;
        const std::string needle = to_lower(phrase);
        for (;;) {
            const std::size_t pos = to_lower(text).find(needle);
            if (pos == std::string::npos) break;
            text.erase(pos, needle.size());
            ++removed;
            // tidy the seam: an orphaned separator after the phrase, or a
            // dangling space before closing punctuation
            if (pos < text.size() && (text[pos] == ',' || text[pos] == ';' || text[pos] == ':') &&
                (pos == 0 || text[pos - 1] == ' ' || text[pos - 1] == '\n')) {
                text.erase(pos, 1);
            } else if (pos < text.size() && pos > 0 &&
                       (text[pos] == '.' || text[pos] == '!' || text[pos] == '?') &&
                       text[pos - 1] == ' ') {
                text.erase(pos - 1, 1);
            }
        }
    }
    if (removed > 0) {
        std::size_t pos = 0;
        while ((pos = text.find("  ", pos)) != std::string::npos) text.erase(pos, 1);
        text = trim(text);
    }
    return removed;
}

// Every token box plus every union of up to `window` consecutive
// reading-order tokens, across all reference documents.
inline std::vector<bbox> candidate_boxes(const std::vector<ocr_document> & docs,
                                         std::size_t window, double line_tolerance) {
    std::vector<bbox> candidates;
    for (const ocr_document & doc : docs) {
        const std::vector<ocr_token> ordered = reading_order(doc.tokens, line_tolerance);
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            bbox u = ordered[i].box;
            candidates.push_back(u);
            for (std::size_t w = 1; w < window && i + w < ordered.size(); ++w) {
                u = union_box({u, ordered[i + w].box});
                candidates.push_back(u);
            }
        }
    }
    return candidates;
}

} // namespace detail

// Automated stand-in for the paper's manual review: strips banned phrasing
// and drops turn pairs whose cited boxes match nothing in the OCR evidence.
inline std::pair<instruction_sample, sanitize_report> sanitize_conversation(
    instruction_sample conv, const std::vector<ocr_document> & ocr,
    const sanitize_params & params = {}) {
    validate_alternation(conv.turns);
    sanitize_report report;

    for (conversation_turn & turn : conv.turns) {
        report.removed_phrases += detail::remove_phrases(turn.text, params.banned_phrases);
    }

    const std::vector<bbox> candidates =
        detail::candidate_boxes(ocr, params.max_union_window, params.line_tolerance);
    std::vector<conversation_turn> kept_turns;
    for (std::size_t i = 0; i + 1 < conv.turns.size(); i += 2) {
        const conversation_turn & question = conv.turns[i];
        const conversation_turn & answer = conv.turns[i + 1];
        std::size_t offending = 0;
        for (const span_match & m : parse_spans(answer.text)) {
            double best = 0.0;
            for (const bbox & c : candidates) best = std::max(best, iou(m.span.box, c));
            if (best < params.iou_floor) ++offending;
        }
        if (offending > 0) {
            report.invalid_boxes += offending;
            ++report.dropped_turn_pairs;
            continue;
        }
        kept_turns.push_back(question);
        kept_turns.push_back(answer);
    }
    conv.turns = std::move(kept_turns);
    report.kept = !conv.turns.empty();
    return {std::move(conv), report};
}

// Appendix-style training string rendering.
inline constexpr std::string_view kSystemMessage =
    "A chat between a curious user and an artificial intelligence assistant. The assistant "
    "gives helpful, detailed, and polite answers to the user's questions.";

inline constexpr std::string_view kImageMarker = "<image><Image Embedding></image> ";

inline std::string render_training_string(const instruction_sample & conv) {
    validate_alternation(conv.turns);
    std::string out(kSystemMessage);
    for (std::size_t i = 0; i < conv.turns.size(); i += 2) {
        out += " USER: ";
        if (i == 0) out += kImageMarker;
        out += conv.turns[i].text;
        out += " ASSISTANT: ";
        if (i + 1 < conv.turns.size()) out += conv.turns[i + 1].text;
    }
    return out;
}

} // namespace textforge
