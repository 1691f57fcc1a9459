#pragma once

#include "textforge/ocr.hpp"
#include "textforge/samples.hpp"
#include "textforge/span.hpp"
#include "textforge/templates.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace textforge {

struct pretrain_config {
    std::set<task> tasks{task::detection, task::recognition, task::spotting};
    std::size_t detection_cap = 10;   // distinct texts per document, 0 = unlimited
    std::size_t recognition_cap = 10; // tokens per document, 0 = unlimited
    double line_tolerance = 0.5;
};

namespace detail {

inline bool serializable_text(const std::string & text) {
    return text.find('"') == std::string::npos;
}

inline std::string spans_block(const std::vector<ocr_token> & ordered, const std::string & only) {
    std::string out;
    for (const ocr_token & t : ordered) {
        if (!only.empty() && t.text != only) continue;
        if (!serializable_text(t.text)) continue;
        if (!out.empty()) out.push_back('\n');
        out += serialize_span(grounded_span{t.text, t.box});
    }
    return out;
}

} // namespace detail

// One sample per distinct token text: the instruction asks for the text's
// box, the answer lists every matching token as a grounded span in reading
// order.
inline std::vector<instruction_sample> build_detection(const ocr_document & doc,
                                                       const template_set & templates,
                                                       seeded_rng & rng,
                                                       const pretrain_config & config = {}) {
    const std::vector<ocr_token> ordered = reading_order(doc.tokens, config.line_tolerance);
    std::vector<std::string> targets;
    for (const ocr_token & t : ordered) {
        if (!detail::serializable_text(t.text)) continue;
        if (std::find(targets.begin(), targets.end(), t.text) == targets.end()) {
            targets.push_back(t.text);
        }
        if (config.detection_cap && targets.size() == config.detection_cap) break;
    }
    std::vector<instruction_sample> samples;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::string & tmpl = pick(templates, task::detection, rng);
        instruction_sample s;
        s.id = doc.id + "#det" + std::to_string(i);
        s.image_ref = doc.image_ref;
        s.task = std::string(task_name(task::detection));
        s.turns.push_back(conversation_turn{
            speaker::user, instantiate(tmpl, {{std::string(kTextPlaceholder), targets[i]}})});
        s.turns.push_back(conversation_turn{speaker::assistant,
                                            detail::spans_block(ordered, targets[i])});
        samples.push_back(std::move(s));
    }
    return samples;
}

// One sample per token: the instruction carries the serialized box, the
// answer is the token text verbatim.
inline std::vector<instruction_sample> build_recognition(const ocr_document & doc,
                                                         const template_set & templates,
                                                         seeded_rng & rng,
                                                         const pretrain_config & config = {}) {
    const std::vector<ocr_token> ordered = reading_order(doc.tokens, config.line_tolerance);
    std::vector<instruction_sample> samples;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (config.recognition_cap && i == config.recognition_cap) break;
        const std::string & tmpl = pick(templates, task::recognition, rng);
        instruction_sample s;
        s.id = doc.id + "#rec" + std::to_string(i);
        s.image_ref = doc.image_ref;
        s.task = std::string(task_name(task::recognition));
        s.turns.push_back(conversation_turn{
            speaker::user,
            instantiate(tmpl, {{std::string(kBoxPlaceholder), serialize_box(ordered[i].box)}})});
        s.turns.push_back(conversation_turn{speaker::assistant, ordered[i].text});
        samples.push_back(std::move(s));
    }
    return samples;
}

// A single sample listing every token as a grounded span, one per line, in
// reading order.
inline instruction_sample build_spotting(const ocr_document & doc,
                                         const template_set & templates,
                                         seeded_rng & rng,
                                         const pretrain_config & config = {}) {
    const std::vector<ocr_token> ordered = reading_order(doc.tokens, config.line_tolerance);
    const std::string block = detail::spans_block(ordered, "");
    if (block.empty()) {
        throw input_error("document " + doc.id + " has no tokens usable for spotting");
    }
    instruction_sample s;
    s.id = doc.id + "#spot";
    s.image_ref = doc.image_ref;
    s.task = std::string(task_name(task::spotting));
    s.turns.push_back(conversation_turn{speaker::user,
                                        instantiate(pick(templates, task::spotting, rng), {})});
    s.turns.push_back(conversation_turn{speaker::assistant, block});
    return s;
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Per-document generator seed: documents can be processed on any worker in
// any order and still produce identical samples for a given run seed.
inline std::uint64_t derive_doc_seed(std::uint64_t run_seed, std::string_view doc_id) {
    std::uint64_t h = fnv1a64(doc_id);
    for (int i = 0; i < 8; ++i) {
        h ^= (run_seed >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::vector<instruction_sample> build_document_samples(const ocr_document & doc,
                                                              const template_set & templates,
                                                              std::uint64_t run_seed,
                                                              const pretrain_config & config) {
    seeded_rng rng(derive_doc_seed(run_seed, doc.id));
    std::vector<instruction_sample> samples;
    if (config.tasks.count(task::detection)) {
        auto det = build_detection(doc, templates, rng, config);
        samples.insert(samples.end(), det.begin(), det.end());
    }
    if (config.tasks.count(task::recognition)) {
        auto rec = build_recognition(doc, templates, rng, config);
        samples.insert(samples.end(), rec.begin(), rec.end());
    }
    if (config.tasks.count(task::spotting)) {
        samples.push_back(build_spotting(doc, templates, rng, config));
    }
    return samples;
}

// Streaming pipeline over a corpus that is already deduped and filtered.
// Per-document failures are reported through on_skip and do not stop the run.
inline void build_pretrain(const std::vector<ocr_document> & corpus,
                           const template_set & templates,
                           std::uint64_t run_seed,
                           const pretrain_config & config,
                           const std::function<void(const instruction_sample &)> & on_sample,
                           const std::function<void(const std::string &, const std::string &)> &
                               on_skip = nullptr) {
    for (const ocr_document & doc : corpus) {
        std::vector<instruction_sample> samples;
        try {
            samples = build_document_samples(doc, templates, run_seed, config);
        } catch (const error & e) {
            if (on_skip) on_skip(doc.id, e.what());
            continue;
        }
        for (const instruction_sample & s : samples) on_sample(s);
    }
}

} // namespace textforge
