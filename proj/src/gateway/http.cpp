#include "ace/gateway/http.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace ace::gateway {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty())
        throw ConfigError("http backend requires a base_url");
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key) api_key_ = key;
    }
}

LlmResponse HttpBackend::complete(const LlmRequest& request) {
    json body;
    body[config_.model_field] =
        config_.model_name.empty() ? request.model_id : config_.model_name;
    json messages = json::array();
    if (!request.system_instruction.empty())
        messages.push_back({{config_.role_field, "system"},
                            {config_.content_field, request.system_instruction}});
    messages.push_back(
        {{config_.role_field, "user"}, {config_.content_field, request.user_message}});
    body[config_.messages_field] = messages;
    body[config_.temperature_field] = request.temperature;
    body[config_.max_tokens_field] = request.max_output_tokens;

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!api_key_.empty())
        headers.emplace(config_.auth_header, config_.auth_prefix + api_key_);

    auto result = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!result)
        throw TransportError("http request failed: " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300)
        throw TransportError("http status " + std::to_string(result->status) + ": " +
                             result->body.substr(0, 200));

    json parsed;
    try {
        parsed = json::parse(result->body);
    } catch (const json::exception& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
    const json* node;
    try {
        node = &parsed.at(json::json_pointer(config_.response_text_pointer));
    } catch (const json::exception&) {
        throw MalformedResponse("response missing text at '" +
                                config_.response_text_pointer + "'");
    }
    if (!node->is_string() || node->get<std::string>().empty())
        throw MalformedResponse("model returned empty text");
    std::string text = node->get<std::string>();
    return {text, static_cast<int>(text.size() / 4), id()};
}

} // namespace ace::gateway
