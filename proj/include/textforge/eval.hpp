#pragma once

#include "textforge/geometry.hpp"
#include "textforge/jsonl.hpp"
#include "textforge/ocr.hpp"
#include "textforge/span.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace textforge {

struct benchmark_record {
    std::string qid;
    std::string image_ref;
    std::string question;
    std::vector<std::string> answers;
    std::vector<bbox> gt_boxes; // answer-evidence regions, may be empty
};

struct model_response {
    std::string qid;
    std::string text;
};

inline std::vector<benchmark_record> load_benchmark(std::istream & in) {
    std::vector<benchmark_record> records;
    std::set<std::string> seen;
    jsonl::for_each_record(in, [&](std::size_t line_no, const json & j) {
        benchmark_record r;
        r.qid = jsonl::require_field(j, line_no, "qid").get<std::string>();
        r.image_ref = jsonl::require_field(j, line_no, "image").get<std::string>();
        r.question = jsonl::require_field(j, line_no, "question").get<std::string>();
        for (const json & a : jsonl::require_field(j, line_no, "answers")) {
            r.answers.push_back(a.get<std::string>());
        }
        if (r.answers.empty()) {
            throw input_error("line " + std::to_string(line_no) + ": answers must be non-empty");
        }
        if (j.contains("gt_boxes")) {
            for (const json & b : j["gt_boxes"]) {
                if (!b.is_array() || b.size() != 4) {
                    throw input_error("line " + std::to_string(line_no) +
                                      ": gt_boxes entries must be 4-number lists");
                }
                const bbox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                               b[3].get<double>()};
                if (!is_valid(box)) {
                    throw input_error("line " + std::to_string(line_no) + ": invalid gt box");
                }
                r.gt_boxes.push_back(box);
            }
        }
        if (!seen.insert(r.qid).second) {
            throw input_error("line " + std::to_string(line_no) + ": duplicate qid " + r.qid);
        }
        records.push_back(std::move(r));
    });
    return records;
}

inline std::vector<model_response> load_responses(std::istream & in) {
    std::vector<model_response> responses;
    jsonl::for_each_record(in, [&](std::size_t line_no, const json & j) {
        responses.push_back(
            model_response{jsonl::require_field(j, line_no, "qid").get<std::string>(),
                           jsonl::require_field(j, line_no, "response").get<std::string>()});
    });
    return responses;
}

inline constexpr std::string_view kGroundingSuffix =
    "Support your reasoning with the coordinates [x_min, y_min, x_max, y_max]";

// Append the grounding instruction to a benchmark question. Idempotent.
inline std::string append_grounding_suffix(std::string_view question) {
    if (is_blank(question)) throw error("cannot append grounding suffix to an empty question");
    if (question.size() >= kGroundingSuffix.size() &&
        question.substr(question.size() - kGroundingSuffix.size()) == kGroundingSuffix) {
        return std::string(question);
    }
    return std::string(question) + " " + std::string(kGroundingSuffix);
}

// Containment canonicalization: casefold, collapse whitespace runs, strip
// .,;:!?"'()[] at word edges only (characters inside a word, e.g. the dot in
// "3.5", survive).
inline std::string canonicalize_for_containment(std::string_view s) {
    static constexpr std::string_view kStrip = ".,;:!?\"'()[]";
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        std::size_t b = i, e = j;
        while (b < e && kStrip.find(s[b]) != std::string_view::npos) ++b;
        while (e > b && kStrip.find(s[e - 1]) != std::string_view::npos) --e;
        if (b < e) {
            if (!out.empty()) out.push_back(' ');
            for (std::size_t k = b; k < e; ++k) {
                out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[k]))));
            }
        }
        i = j;
    }
    return out;
}

// A response is correct iff some canonicalized answer appears as a substring
// of the canonicalized response.
inline bool contains_answer(std::string_view response, const std::vector<std::string> & answers) {
    if (answers.empty()) throw error("contains_answer requires at least one answer");
    const std::string canon_response = canonicalize_for_containment(response);
    for (const std::string & answer : answers) {
        const std::string canon_answer = canonicalize_for_containment(answer);
        if (canon_answer.empty()) continue;
        if (canon_response.find(canon_answer) != std::string::npos) return true;
    }
    return false;
}

// Best IoU over all (span, ground-truth) pairs; absent when either side is
// empty. Max, not mean: one correct evidence region is enough.
inline std::optional<double> grounding_quality(const std::vector<grounded_span> & spans,
                                               const std::vector<bbox> & gt_boxes) {
    if (spans.empty() || gt_boxes.empty()) return std::nullopt;
    double best = 0.0;
    for (const grounded_span & s : spans) {
        for (const bbox & gt : gt_boxes) best = std::max(best, iou(s.box, gt));
    }
    return best;
}

struct question_result {
    std::string qid;
    bool correct = false;
    bool answered = false;
    std::vector<grounded_span> spans;
    std::optional<double> best_iou;
};

struct eval_report {
    std::vector<question_result> per_question; // ordered by qid
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    double span_emission_rate = 0.0;
    std::optional<double> mean_best_iou; // over questions where best_iou exists
};

// Containment accuracy over a benchmark. Missing responses score incorrect;
// duplicate or unknown response qids are errors.
inline eval_report evaluate(const std::vector<benchmark_record> & benchmark,
                            const std::vector<model_response> & responses) {
    std::map<std::string, const model_response *> by_qid;
    std::set<std::string> known;
    for (const benchmark_record & r : benchmark) known.insert(r.qid);
    std::vector<std::string> unknown;
    for (const model_response & r : responses) {
        if (!by_qid.emplace(r.qid, &r).second) {
            throw input_error("duplicate response qid " + r.qid);
        }
        if (!known.count(r.qid)) unknown.push_back(r.qid);
    }
    if (!unknown.empty()) {
        std::string msg = "responses reference unknown qids:";
        for (const std::string & q : unknown) msg += " " + q;
        throw input_error(msg);
    }

    eval_report report;
    report.total = benchmark.size();
    std::size_t with_spans = 0;
    double iou_sum = 0.0;
    std::size_t iou_count = 0;
    for (const benchmark_record & record : benchmark) {
        question_result qr;
        qr.qid = record.qid;
        const auto it = by_qid.find(record.qid);
        if (it != by_qid.end()) {
            qr.answered = true;
            qr.correct = contains_answer(it->second->text, record.answers);
            for (const span_match & m : parse_spans(it->second->text)) {
                qr.spans.push_back(m.span);
            }
        }
        qr.best_iou = grounding_quality(qr.spans, record.gt_boxes);
        if (qr.correct) ++report.correct;
        if (!qr.spans.empty()) ++with_spans;
        if (qr.best_iou) {
            iou_sum += *qr.best_iou;
            ++iou_count;
        }
        report.per_question.push_back(std::move(qr));
    }
    std::sort(report.per_question.begin(), report.per_question.end(),
              [](const question_result & a, const question_result & b) { return a.qid < b.qid; });
    if (report.total > 0) {
        report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
        report.span_emission_rate =
            static_cast<double>(with_spans) / static_cast<double>(report.total);
    }
    if (iou_count > 0) report.mean_best_iou = iou_sum / static_cast<double>(iou_count);
    return report;
}

inline json to_json(const eval_report & report) {
    json aggregate{{"total", report.total},
                   {"correct", report.correct},
                   {"accuracy", report.accuracy},
                   {"span_emission_rate", report.span_emission_rate},
                   {"mean_best_iou", report.mean_best_iou ? json(*report.mean_best_iou) : json()}};
    json per_question = json::array();
    for (const question_result & q : report.per_question) {
        json spans = json::array();
        for (const grounded_span & s : q.spans) {
            spans.push_back(json{{"text", s.text},
                                 {"box", {s.box.x_min, s.box.y_min, s.box.x_max, s.box.y_max}}});
        }
        json jq{{"qid", q.qid},
                {"correct", q.correct},
                {"answered", q.answered},
                {"spans", std::move(spans)}};
        jq["best_iou"] = q.best_iou ? json(*q.best_iou) : json();
        per_question.push_back(std::move(jq));
    }
    return json{{"aggregate", std::move(aggregate)}, {"per_question", std::move(per_question)}};
}

} // namespace textforge
