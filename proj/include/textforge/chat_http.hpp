#pragma once

// HTTP transport for the chat client. Kept out of chat_client.hpp so only
// translation units that actually talk to a service compile cpp-httplib.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "textforge/chat_client.hpp"
#include "textforge/error.hpp"

#include <cstdlib>
#include <memory>
#include <string>

namespace textforge {

inline constexpr const char * kEndpointEnvVar = "FORGE_LLM_ENDPOINT";
inline constexpr const char * kCredentialEnvVar = "FORGE_LLM_KEY";

struct endpoint_parts {
    std::string base;  // scheme://host[:port]
    std::string path;  // request path, defaults to /v1/chat/completions
};

inline endpoint_parts split_endpoint(const std::string & url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw config_error("endpoint must start with http:// or https://: " + url);
    }
    const std::size_t slash = url.find('/', scheme + 3);
    endpoint_parts parts;
    if (slash == std::string::npos) {
        parts.base = url;
        parts.path = "/v1/chat/completions";
    } else {
        parts.base = url.substr(0, slash);
        parts.path = url.substr(slash);
    }
    return parts;
}

// POSTs the minimal chat schema and expects {"choices":[{"message":
// {"content": ...}}]} back. 429 and 5xx are transient; auth failures are
// configuration problems.
class http_chat_client final : public chat_client {
  public:
    http_chat_client(const std::string & endpoint, std::string api_key)
        : parts_(split_endpoint(endpoint)), api_key_(std::move(api_key)),
          client_(std::make_unique<httplib::Client>(parts_.base)) {
        client_->set_connection_timeout(30);
        client_->set_read_timeout(120);
    }

    // Reads FORGE_LLM_ENDPOINT / FORGE_LLM_KEY; fails before any network
    // activity when either is missing.
    static http_chat_client from_env() {
        const char * endpoint = std::getenv(kEndpointEnvVar);
        const char * key = std::getenv(kCredentialEnvVar);
        if (!endpoint || !*endpoint) {
            throw config_error(std::string(kEndpointEnvVar) + " is not set");
        }
        if (!key || !*key) {
            throw config_error(std::string(kCredentialEnvVar) + " is not set");
        }
        return http_chat_client(endpoint, key);
    }

    std::string complete(const chat_request & request) override {
        httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
        const std::string body = to_json(request).dump();
        httplib::Result res = client_->Post(parts_.path, headers, body, "application/json");
        if (!res) {
            throw transport_error("request to " + parts_.base + " failed: " +
                                  httplib::to_string(res.error()));
        }
        if (res->status == 401 || res->status == 403) {
            throw config_error("service rejected the credential (HTTP " +
                               std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status >= 500) {
            throw transport_error("service returned HTTP " + std::to_string(res->status));
        }
        if (res->status != 200) {
            throw transport_error("unexpected HTTP " + std::to_string(res->status) + ": " +
                                      res->body,
                                  /*retryable=*/false);
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty() ||
            !reply["choices"][0].contains("message")) {
            throw transport_error("malformed completion response: " + res->body);
        }
        return reply["choices"][0]["message"].value("content", "");
    }

  private:
    endpoint_parts parts_;
    std::string api_key_;
    std::unique_ptr<httplib::Client> client_;
};

} // namespace textforge
