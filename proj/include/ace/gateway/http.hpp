#pragma once

#include <string>

#include "ace/gateway/gateway.hpp"

namespace ace::gateway {

// Chat-completions-style HTTP JSON endpoint. Field names and the response
// text location are configurable so one wire protocol covers the OpenAI-
// and Gemini-compatible proxies without per-vendor code.
struct HttpBackendConfig {
    std::string base_url;                 // e.g. "https://api.example.com"
    std::string path = "/v1/chat/completions";
    std::string api_key_env;              // env var holding the key; empty = no auth
    std::string auth_header = "Authorization";
    std::string auth_prefix = "Bearer ";
    std::string model_field = "model";
    std::string messages_field = "messages";
    std::string role_field = "role";
    std::string content_field = "content";
    std::string temperature_field = "temperature";
    std::string max_tokens_field = "max_tokens";
    std::string response_text_pointer = "/choices/0/message/content"; // JSON pointer
    std::string model_name;               // wire-level model name; empty = model_id
    int timeout_seconds = 120;
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    LlmResponse complete(const LlmRequest& request) override;
    std::string id() const override { return "http:" + config_.base_url; }

private:
    HttpBackendConfig config_;
    std::string api_key_;
};

} // namespace ace::gateway
