// textforge: build grounded instruction data from OCR output and score
// grounded model responses. See README.md for the file formats.

#include "textforge/chat_http.hpp"
#include "textforge/textforge.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace tf = textforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitService = 3;

std::ifstream open_input(const std::string & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tf::input_error("cannot open " + path);
    return in;
}

void print_header(const std::string & command, const tf::forge_config & config) {
    std::cerr << "textforge " << command << " seed=" << config.seed
              << " config=" << tf::config_digest(config) << "\n";
}

void write_provenance_sidecar(const std::string & out_path, const tf::forge_config & config,
                              std::size_t records) {
    tf::atomic_file_writer writer(out_path + ".provenance.json");
    writer.stream() << tf::json{{"seed", config.seed},
                                {"config_digest", tf::config_digest(config)},
                                {"records", records}}
                           .dump(2)
                    << "\n";
    writer.commit();
}

tf::json provenance_json(const tf::forge_config & config) {
    return tf::json{{"seed", config.seed}, {"config_digest", tf::config_digest(config)}};
}

// Shared --config / --seed handling: file first, then explicit flags win.
struct config_source {
    std::string config_path;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App * cmd) {
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--seed", seed, "run seed (default 0; overrides the config file)");
    }

    tf::forge_config resolve() const {
        tf::forge_config config;
        if (!config_path.empty()) {
            std::ifstream in = open_input(config_path);
            tf::load_config(in, config);
        }
        if (seed) config.seed = *seed;
        return config;
    }
};

tf::template_set load_templates(const std::string & extension_path) {
    tf::template_set templates = tf::builtin_templates();
    if (!extension_path.empty()) {
        std::ifstream in = open_input(extension_path);
        templates.load_extension(in);
    }
    return templates;
}

// ---- pretrain ----------------------------------------------------------

struct pretrain_args {
    std::string ocr_path, out_path, templates_path;
    config_source config;
    std::optional<std::string> tasks;
    std::optional<double> min_area;
    std::optional<std::size_t> detection_cap, recognition_cap, workers;
};

int run_pretrain(const pretrain_args & args) {
    tf::forge_config config = args.config.resolve();
    if (args.tasks) config.tasks = tf::tasks_from_string(*args.tasks);
    if (args.min_area) config.min_area = *args.min_area;
    if (args.detection_cap) config.detection_cap = *args.detection_cap;
    if (args.recognition_cap) config.recognition_cap = *args.recognition_cap;
    if (args.workers) config.workers = *args.workers;
    tf::validate(config);
    print_header("pretrain", config);

    const tf::template_set templates = load_templates(args.templates_path);
    std::ifstream in = open_input(args.ocr_path);
    const std::vector<tf::ocr_document> all_docs = tf::load_ocr(in);

    std::vector<tf::ocr_document> docs;
    for (const tf::ocr_document & doc : all_docs) {
        if (tf::passes_area_filter(doc, config.min_area)) docs.push_back(doc);
    }
    std::cerr << "area filter kept " << docs.size() << " of " << all_docs.size()
              << " documents (min_area=" << config.min_area << ")\n";

    tf::pretrain_config pcfg;
    pcfg.tasks = config.tasks;
    pcfg.detection_cap = config.detection_cap;
    pcfg.recognition_cap = config.recognition_cap;
    pcfg.line_tolerance = config.line_tolerance;

    std::vector<std::vector<tf::instruction_sample>> results(docs.size());
    std::vector<std::string> skips(docs.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= docs.size()) return;
            try {
                results[i] = tf::build_document_samples(docs[i], templates, config.seed, pcfg);
            } catch (const tf::error & e) {
                skips[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::max<std::size_t>(1, config.workers); ++w) {
        pool.emplace_back(worker);
    }
    for (std::thread & t : pool) t.join();

    tf::atomic_file_writer writer(args.out_path);
    std::size_t written = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!skips[i].empty()) {
            std::cerr << "skip " << docs[i].id << ": " << skips[i] << "\n";
            continue;
        }
        for (const tf::instruction_sample & s : results[i]) {
            writer.write_record(tf::to_json(s));
            ++written;
        }
    }
    writer.commit();
    write_provenance_sidecar(args.out_path, config, written);
    std::cerr << "wrote " << written << " samples to " << args.out_path << "\n";
    return kExitOk;
}

// ---- dedup -------------------------------------------------------------

struct dedup_args {
    std::string dir_path, list_path, out_path;
    config_source config;
};

int run_dedup(const dedup_args & args) {
    const tf::forge_config config = args.config.resolve();
    print_header("dedup", config);
    if (args.dir_path.empty() == args.list_path.empty()) {
        throw tf::config_error("dedup needs exactly one of --dir or --list");
    }

    std::vector<std::pair<std::string, std::filesystem::path>> files;
    if (!args.dir_path.empty()) {
        if (!std::filesystem::is_directory(args.dir_path)) {
            throw tf::input_error(args.dir_path + " is not a directory");
        }
        files = tf::walk_files(args.dir_path);
    } else {
        std::ifstream in = open_input(args.list_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            files.emplace_back(line, line);
        }
    }

    const tf::hash_result hashed = tf::hash_files(files);
    for (const tf::hash_failure & f : hashed.failures) {
        std::cerr << "unreadable: " << f.id << " (" << f.message << ")\n";
    }
    const tf::dedup_manifest manifest = tf::dedup(hashed.entries);

    tf::atomic_file_writer writer(args.out_path);
    for (const tf::manifest_row & row : manifest.rows) writer.write_record(tf::to_json(row));
    writer.commit();
    write_provenance_sidecar(args.out_path, config, manifest.rows.size());
    std::cerr << "hashed " << hashed.entries.size() << " files, kept " << manifest.kept_count()
              << ", dropped " << manifest.rows.size() - manifest.kept_count() << ", "
              << hashed.failures.size() << " unreadable\n";
    return kExitOk;
}

// ---- fine-tuning -------------------------------------------------------

struct image_group {
    std::string image;
    std::vector<tf::ocr_document> docs;
};

// Groups OCR documents by image reference, in order of first appearance.
std::vector<image_group> group_by_image(const std::vector<tf::ocr_document> & docs) {
    std::vector<image_group> groups;
    std::map<std::string, std::size_t> index;
    for (const tf::ocr_document & doc : docs) {
        auto [it, inserted] = index.emplace(doc.image_ref, groups.size());
        if (inserted) groups.push_back(image_group{doc.image_ref, {}});
        groups[it->second].docs.push_back(doc);
    }
    return groups;
}

std::map<std::string, std::vector<std::string>> load_captions(const std::string & path) {
    std::map<std::string, std::vector<std::string>> captions;
    std::ifstream in = open_input(path);
    tf::jsonl::for_each_record(in, [&](std::size_t line_no, const tf::json & j) {
        const std::string image = tf::jsonl::require_field(j, line_no, "image").get<std::string>();
        std::vector<std::string> list;
        for (const tf::json & c : tf::jsonl::require_field(j, line_no, "captions")) {
            list.push_back(c.get<std::string>());
        }
        captions[image] = std::move(list);
    });
    return captions;
}

std::string load_instructions(const std::string & path) {
    if (path.empty()) return std::string(tf::kDefaultGenerationInstructions);
    std::ifstream in = open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

std::vector<tf::prompt_payload> build_payloads(const std::string & ocr_path,
                                               const std::string & captions_path,
                                               double line_tolerance) {
    std::ifstream in = open_input(ocr_path);
    const std::vector<image_group> groups = group_by_image(tf::load_ocr(in));
    const auto captions = load_captions(captions_path);
    std::vector<tf::prompt_payload> payloads;
    for (const image_group & group : groups) {
        const auto it = captions.find(group.image);
        if (it == captions.end()) {
            throw tf::input_error("no captions for image " + group.image);
        }
        payloads.push_back(tf::build_payload(group.image, it->second, group.docs, line_tolerance));
    }
    return payloads;
}

struct finetune_prompts_args {
    std::string ocr_path, captions_path, out_path, instructions_path;
    config_source config;
};

int run_finetune_prompts(const finetune_prompts_args & args) {
    const tf::forge_config config = args.config.resolve();
    print_header("finetune-prompts", config);
    const std::string instructions = load_instructions(args.instructions_path);
    const auto payloads = build_payloads(args.ocr_path, args.captions_path, config.line_tolerance);

    tf::atomic_file_writer writer(args.out_path);
    for (const tf::prompt_payload & p : payloads) {
        writer.write_record(tf::json{{"image_id", p.image_id},
                                     {"prompt", tf::build_finetune_prompt(p, instructions)}});
    }
    writer.commit();
    write_provenance_sidecar(args.out_path, config, payloads.size());
    std::cerr << "wrote " << payloads.size() << " prompts to " << args.out_path << "\n";
    return kExitOk;
}

struct finetune_build_args {
    std::string ocr_path, out_path, raw_path, captions_path, stub_path, save_raw_path,
        report_path, instructions_path;
    config_source config;
    std::optional<double> iou_floor;
    std::optional<std::string> banned;
};

int run_finetune_build(const finetune_build_args & args) {
    tf::forge_config config = args.config.resolve();
    if (args.iou_floor) config.iou_floor = *args.iou_floor;
    if (args.banned) config.banned_phrases = tf::detail::split(*args.banned, '|');
    tf::validate(config);
    print_header("finetune-build", config);
    if (args.raw_path.empty() == args.captions_path.empty()) {
        throw tf::config_error("finetune-build needs exactly one of --raw or --captions");
    }

    std::ifstream ocr_in = open_input(args.ocr_path);
    const std::vector<image_group> groups = group_by_image(tf::load_ocr(ocr_in));
    std::map<std::string, const image_group *> groups_by_image;
    for (const image_group & g : groups) groups_by_image[g.image] = &g;

    // (image_id, raw completion) pairs, either replayed from --raw or
    // requested from the chat-completion service.
    std::vector<std::pair<std::string, std::string>> completions;
    if (!args.raw_path.empty()) {
        std::ifstream in = open_input(args.raw_path);
        tf::jsonl::for_each_record(in, [&](std::size_t line_no, const tf::json & j) {
            completions.emplace_back(
                tf::jsonl::require_field(j, line_no, "image_id").get<std::string>(),
                tf::jsonl::require_field(j, line_no, "completion").get<std::string>());
        });
    } else {
        const auto payloads =
            build_payloads(args.ocr_path, args.captions_path, config.line_tolerance);
        tf::generation_options options;
        options.model = config.llm_model;
        options.temperature = config.llm_temperature;
        options.retry.attempts = config.llm_attempts;
        options.instructions = load_instructions(args.instructions_path);

        std::unique_ptr<tf::chat_client> client;
        std::size_t in_flight = config.llm_max_in_flight;
        if (!args.stub_path.empty()) {
            client = tf::stub_chat_client::from_file(args.stub_path);
            in_flight = 1; // canned completions are positional
        } else {
            client = std::make_unique<tf::http_chat_client>(tf::http_chat_client::from_env());
        }
        const std::vector<std::string> raw =
            tf::request_conversations_batch(payloads, *client, options, in_flight);
        for (std::size_t i = 0; i < payloads.size(); ++i) {
            completions.emplace_back(payloads[i].image_id, raw[i]);
        }
        if (!args.save_raw_path.empty()) {
            tf::atomic_file_writer raw_writer(args.save_raw_path);
            for (const auto & [image_id, completion] : completions) {
                raw_writer.write_record(
                    tf::json{{"image_id", image_id}, {"completion", completion}});
            }
            raw_writer.commit();
        }
    }

    tf::sanitize_params params;
    params.banned_phrases = config.banned_phrases;
    params.iou_floor = config.iou_floor;
    params.line_tolerance = config.line_tolerance;

    tf::atomic_file_writer writer(args.out_path);
    std::unique_ptr<tf::atomic_file_writer> report_writer;
    if (!args.report_path.empty()) {
        report_writer = std::make_unique<tf::atomic_file_writer>(args.report_path);
    }
    std::size_t written = 0;
    for (const auto & [image_id, completion] : completions) {
        const auto it = groups_by_image.find(image_id);
        if (it == groups_by_image.end()) {
            throw tf::input_error("no OCR documents for image " + image_id);
        }
        tf::instruction_sample sample;
        sample.id = image_id + "#conv";
        sample.image_ref = image_id;
        sample.task = "conversation";
        sample.turns = tf::parse_conversation_text(completion);
        if (sample.turns.empty()) {
            std::cerr << "skip " << image_id << ": no conversation turns found\n";
            if (report_writer) {
                report_writer->write_record(tf::json{{"image_id", image_id}, {"kept", false},
                                                     {"error", "no conversation turns found"}});
            }
            continue;
        }
        tf::instruction_sample sanitized;
        tf::sanitize_report report;
        try {
            std::tie(sanitized, report) =
                tf::sanitize_conversation(std::move(sample), it->second->docs, params);
        } catch (const tf::input_error & e) {
            std::cerr << "skip " << image_id << ": " << e.what() << "\n";
            if (report_writer) {
                report_writer->write_record(
                    tf::json{{"image_id", image_id}, {"kept", false}, {"error", e.what()}});
            }
            continue;
        }
        if (report_writer) {
            report_writer->write_record(tf::json{{"image_id", image_id},
                                                 {"removed_phrases", report.removed_phrases},
                                                 {"dropped_turn_pairs", report.dropped_turn_pairs},
                                                 {"invalid_boxes", report.invalid_boxes},
                                                 {"kept", report.kept}});
        }
        if (!report.kept) {
            std::cerr << "skip " << image_id << ": no turn pairs survived sanitization\n";
            continue;
        }
        writer.write_record(tf::to_json(sanitized));
        ++written;
    }
    writer.commit();
    if (report_writer) report_writer->commit();
    write_provenance_sidecar(args.out_path, config, written);
    std::cerr << "wrote " << written << " conversations to " << args.out_path << "\n";
    return kExitOk;
}

// ---- eval --------------------------------------------------------------

struct eval_args {
    std::string benchmark_path, responses_path, report_path, questions_out_path;
    config_source config;
};

int run_eval(const eval_args & args) {
    const tf::forge_config config = args.config.resolve();
    print_header("eval", config);
    if (args.responses_path.empty() && args.questions_out_path.empty()) {
        throw tf::config_error("eval needs --responses (with --report) or --questions-out");
    }
    if (!args.responses_path.empty() && args.report_path.empty()) {
        throw tf::config_error("eval --responses requires --report");
    }
    std::ifstream bench_in = open_input(args.benchmark_path);
    const std::vector<tf::benchmark_record> benchmark = tf::load_benchmark(bench_in);

    if (!args.questions_out_path.empty()) {
        tf::atomic_file_writer writer(args.questions_out_path);
        for (const tf::benchmark_record & r : benchmark) {
            writer.write_record(tf::json{{"qid", r.qid},
                                         {"question", tf::append_grounding_suffix(r.question)}});
        }
        writer.commit();
        std::cerr << "wrote " << benchmark.size() << " suffixed questions to "
                  << args.questions_out_path << "\n";
    }
    if (args.responses_path.empty()) return kExitOk;

    std::ifstream resp_in = open_input(args.responses_path);
    const tf::eval_report report = tf::evaluate(benchmark, tf::load_responses(resp_in));

    tf::json out = tf::to_json(report);
    out["provenance"] = provenance_json(config);
    tf::atomic_file_writer writer(args.report_path);
    writer.stream() << out.dump(2) << "\n";
    writer.commit();
    std::cerr << "accuracy " << report.correct << "/" << report.total << " = " << report.accuracy
              << ", span emission rate " << report.span_emission_rate << "\n";
    return kExitOk;
}

// ---- render ------------------------------------------------------------

struct render_args {
    std::string image_ref, out_path, text, responses_path, qid;
    int width = 0, height = 0;
    std::vector<std::string> gt;
    config_source config;
};

tf::bbox parse_box_flag(const std::string & value) {
    const std::vector<std::string> parts = tf::detail::split(value, ',');
    if (parts.size() != 4) throw tf::config_error("--gt expects x_min,y_min,x_max,y_max");
    try {
        const tf::bbox box{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                           std::stod(parts[3])};
        if (!tf::is_valid(box)) throw tf::config_error("--gt box is not a valid normalized box");
        return box;
    } catch (const std::invalid_argument &) {
        throw tf::config_error("--gt expects four numbers: " + value);
    }
}

int run_render(const render_args & args) {
    const tf::forge_config config = args.config.resolve();
    print_header("render", config);
    std::string text = args.text;
    if (!args.responses_path.empty()) {
        if (args.qid.empty()) throw tf::config_error("--responses requires --qid");
        std::ifstream in = open_input(args.responses_path);
        bool found = false;
        for (const tf::model_response & r : tf::load_responses(in)) {
            if (r.qid == args.qid) {
                text = r.text;
                found = true;
                break;
            }
        }
        if (!found) throw tf::input_error("qid " + args.qid + " not found in " + args.responses_path);
    }

    std::vector<tf::grounded_span> spans;
    for (const tf::span_match & m : tf::parse_spans(text)) spans.push_back(m.span);
    std::vector<tf::bbox> gt_boxes;
    for (const std::string & g : args.gt) gt_boxes.push_back(parse_box_flag(g));

    tf::atomic_file_writer writer(args.out_path);
    writer.stream() << tf::emit_overlay(args.image_ref, args.width, args.height, spans, gt_boxes);
    writer.commit();
    std::cerr << "rendered " << spans.size() << " spans and " << gt_boxes.size()
              << " ground-truth boxes to " << args.out_path << "\n";
    return kExitOk;
}

// ---- stats -------------------------------------------------------------

struct stats_args {
    std::string data_path, out_path;
    config_source config;
};

int run_stats(const stats_args & args) {
    const tf::forge_config config = args.config.resolve();
    print_header("stats", config);
    std::ifstream in = open_input(args.data_path);
    tf::stats_report report;
    for (const tf::instruction_sample & s : tf::load_samples(in)) report.add(s);

    tf::json out = tf::to_json(report);
    out["provenance"] = provenance_json(config);
    tf::atomic_file_writer writer(args.out_path);
    writer.stream() << out.dump(2) << "\n";
    writer.commit();
    std::cerr << "counted " << report.samples << " samples\n";
    return kExitOk;
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"grounded instruction data toolkit for text-rich document images"};
    app.require_subcommand(1);

    pretrain_args pretrain;
    CLI::App * pretrain_cmd =
        app.add_subcommand("pretrain", "ingest OCR, filter, and emit detection/recognition/"
                                       "spotting samples");
    pretrain_cmd->add_option("--ocr", pretrain.ocr_path, "OCR documents (JSONL)")->required();
    pretrain_cmd->add_option("--out", pretrain.out_path, "output samples file (JSONL)")->required();
    pretrain_cmd->add_option("--tasks", pretrain.tasks,
                             "comma list of detection,recognition,spotting (default: all)");
    pretrain_cmd->add_option("--min-area", pretrain.min_area,
                             "single-token area floor in image fractions (default 0.05)");
    pretrain_cmd->add_option("--detection-cap", pretrain.detection_cap,
                             "distinct texts per document, 0 = unlimited (default 10)");
    pretrain_cmd->add_option("--recognition-cap", pretrain.recognition_cap,
                             "tokens per document, 0 = unlimited (default 10)");
    pretrain_cmd->add_option("--workers", pretrain.workers,
                             "parallel document workers (default 1)");
    pretrain_cmd->add_option("--templates", pretrain.templates_path,
                             "extension templates (JSONL {task, template})");
    pretrain.config.attach(pretrain_cmd);

    dedup_args dedup;
    CLI::App * dedup_cmd =
        app.add_subcommand("dedup", "hash files and emit a first-wins dedup manifest");
    dedup_cmd->add_option("--dir", dedup.dir_path, "directory to walk recursively");
    dedup_cmd->add_option("--list", dedup.list_path, "text file with one path per line");
    dedup_cmd->add_option("--out", dedup.out_path, "manifest output (JSONL)")->required();
    dedup.config.attach(dedup_cmd);

    finetune_prompts_args prompts;
    CLI::App * prompts_cmd = app.add_subcommand(
        "finetune-prompts", "assemble caption + dual-OCR generation prompts per image");
    prompts_cmd->add_option("--ocr", prompts.ocr_path, "OCR documents (JSONL)")->required();
    prompts_cmd->add_option("--captions", prompts.captions_path,
                            "captions (JSONL {image, captions})")
        ->required();
    prompts_cmd->add_option("--out", prompts.out_path, "prompts output (JSONL)")->required();
    prompts_cmd->add_option("--instructions", prompts.instructions_path,
                            "file overriding the generation instructions");
    prompts.config.attach(prompts_cmd);

    finetune_build_args build;
    CLI::App * build_cmd = app.add_subcommand(
        "finetune-build", "turn raw completions into sanitized conversation samples");
    build_cmd->add_option("--ocr", build.ocr_path, "OCR documents (JSONL)")->required();
    build_cmd->add_option("--out", build.out_path, "conversation samples output (JSONL)")
        ->required();
    build_cmd->add_option("--raw", build.raw_path,
                          "raw completions (JSONL {image_id, completion}); offline mode");
    build_cmd->add_option("--captions", build.captions_path,
                          "captions file; requests completions from the chat service");
    build_cmd->add_option("--stub", build.stub_path,
                          "canned completions file used instead of the live service");
    build_cmd->add_option("--save-raw", build.save_raw_path,
                          "also write the raw completions (JSONL)");
    build_cmd->add_option("--report", build.report_path, "sanitization reports (JSONL)");
    build_cmd->add_option("--instructions", build.instructions_path,
                          "file overriding the generation instructions");
    build_cmd->add_option("--iou-floor", build.iou_floor,
                          "minimum IoU against OCR evidence (default 0.3)");
    build_cmd->add_option("--banned", build.banned,
                          "pipe-separated banned phrases (default \"based on the paddleocr|"
                          "according to the ocr\")");
    build.config.attach(build_cmd);

    eval_args eval;
    CLI::App * eval_cmd =
        app.add_subcommand("eval", "score responses with containment accuracy and IoU diagnostics");
    eval_cmd->add_option("--benchmark", eval.benchmark_path, "benchmark records (JSONL)")
        ->required();
    eval_cmd->add_option("--responses", eval.responses_path, "model responses (JSONL)");
    eval_cmd->add_option("--report", eval.report_path, "report output (JSON)");
    eval_cmd->add_option("--questions-out", eval.questions_out_path,
                         "emit questions with the grounding suffix appended (JSONL)");
    eval.config.attach(eval_cmd);

    render_args render;
    CLI::App * render_cmd =
        app.add_subcommand("render", "render an SVG overlay of spans parsed from a response");
    render_cmd->add_option("--image", render.image_ref, "image reference embedded in the SVG")
        ->required();
    render_cmd->add_option("--width", render.width, "image width in pixels")->required();
    render_cmd->add_option("--height", render.height, "image height in pixels")->required();
    render_cmd->add_option("--text", render.text, "response text to parse spans from");
    render_cmd->add_option("--responses", render.responses_path,
                           "responses file to pull the text from (with --qid)");
    render_cmd->add_option("--qid", render.qid, "question id to select from --responses");
    render_cmd->add_option("--gt", render.gt, "ground-truth box x_min,y_min,x_max,y_max "
                                              "(repeatable)");
    render_cmd->add_option("--out", render.out_path, "SVG output path")->required();
    render.config.attach(render_cmd);

    stats_args stats;
    CLI::App * stats_cmd =
        app.add_subcommand("stats", "whitespace-token statistics over a samples file");
    stats_cmd->add_option("--data", stats.data_path, "samples file (JSONL)")->required();
    stats_cmd->add_option("--out", stats.out_path, "report output (JSON)")->required();
    stats.config.attach(stats_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    } catch (const CLI::ParseError & e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (pretrain_cmd->parsed()) return run_pretrain(pretrain);
        if (dedup_cmd->parsed()) return run_dedup(dedup);
        if (prompts_cmd->parsed()) return run_finetune_prompts(prompts);
        if (build_cmd->parsed()) return run_finetune_build(build);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (render_cmd->parsed()) return run_render(render);
        if (stats_cmd->parsed()) return run_stats(stats);
    } catch (const tf::config_error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tf::transport_error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitService;
    } catch (const tf::empty_response_error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitService;
    } catch (const tf::error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
