#pragma once

#include "textforge/error.hpp"
#include "textforge/finetune.hpp"
#include "textforge/jsonl.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace textforge {

// Service returned nothing usable.
class empty_response_error : public error {
  public:
    explicit empty_response_error(const std::string & what) : error(what) {}
};

struct chat_message {
    std::string role;
    std::string content;
};

// Minimal chat schema: model name, message list, temperature.
struct chat_request {
    std::string model = "gpt-4";
    std::vector<chat_message> messages;
    double temperature = 0.7;
};

inline json to_json(const chat_request & req) {
    json messages = json::array();
    for (const chat_message & m : req.messages) {
        messages.push_back(json{{"role", m.role}, {"content", m.content}});
    }
    return json{{"model", req.model}, {"messages", std::move(messages)},
                {"temperature", req.temperature}};
}

// Transport boundary for conversation generation. complete() returns the raw
// completion text; transient failures throw transport_error (retried by
// request_conversations), anything else propagates.
class chat_client {
  public:
    virtual ~chat_client() = default;
    virtual std::string complete(const chat_request & request) = 0;
};

// Offline client replaying canned completions from a JSONL file of
// {"completion": ...} records, in order.
class stub_chat_client final : public chat_client {
  public:
    explicit stub_chat_client(std::vector<std::string> completions)
        : completions_(std::move(completions)) {}

    static std::unique_ptr<stub_chat_client> from_file(const std::string & path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open stub completions file " + path);
        std::vector<std::string> completions;
        jsonl::for_each_record(in, [&completions](std::size_t line_no, const json & record) {
            completions.push_back(
                jsonl::require_field(record, line_no, "completion").get<std::string>());
        });
        return std::make_unique<stub_chat_client>(std::move(completions));
    }

    std::string complete(const chat_request &) override {
        std::lock_guard lock(mutex_);
        if (next_ >= completions_.size()) {
            throw transport_error("stub completions exhausted after " +
                                  std::to_string(completions_.size()) + " requests");
        }
        return completions_[next_++];
    }

  private:
    std::mutex mutex_;
    std::vector<std::string> completions_;
    std::size_t next_ = 0;
};

struct retry_policy {
    std::size_t attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
    // Injectable so tests do not sleep.
    std::function<void(std::chrono::milliseconds)> sleep =
        [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
};

struct generation_options {
    std::string model = "gpt-4";
    double temperature = 0.7;
    std::string instructions{kDefaultGenerationInstructions};
    retry_policy retry;
};

// Send one payload's prompt and return the raw completion. Transient
// failures are retried with exponential backoff; an empty completion is an
// error in its own right.
inline std::string request_conversations(const prompt_payload & payload, chat_client & client,
                                         const generation_options & options = {}) {
    chat_request request;
    request.model = options.model;
    request.temperature = options.temperature;
    request.messages.push_back(chat_message{"user", build_finetune_prompt(payload, options.instructions)});

    std::chrono::milliseconds backoff = options.retry.initial_backoff;
    for (std::size_t attempt = 1;; ++attempt) {
        try {
            std::string completion = client.complete(request);
            if (is_blank(completion)) {
                throw empty_response_error("empty completion for " + payload.image_id);
            }
            return completion;
        } catch (const transport_error & e) {
            if (!e.retryable() || attempt >= options.retry.attempts) throw;
            options.retry.sleep(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long>(static_cast<double>(backoff.count()) * options.retry.multiplier));
        }
    }
}

// Batch form with bounded in-flight requests; results keep payload order.
inline std::vector<std::string> request_conversations_batch(
    const std::vector<prompt_payload> & payloads, chat_client & client,
    const generation_options & options = {}, std::size_t max_in_flight = 4) {
    std::vector<std::string> results(payloads.size());
    std::vector<std::string> failures(payloads.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    const std::size_t workers = std::max<std::size_t>(1, std::min(max_in_flight, payloads.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= payloads.size() || failed.load()) return;
                try {
                    results[i] = request_conversations(payloads[i], client, options);
                } catch (const error & e) {
                    failures[i] = e.what();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (std::thread & t : pool) t.join();
    if (failed.load()) {
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (!failures[i].empty()) {
                throw transport_error("request for " + payloads[i].image_id + " failed: " +
                                      failures[i]);
            }
        }
    }
    return results;
}

} // namespace textforge
