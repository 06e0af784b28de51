#include "ace/gateway/mock.hpp"

namespace ace::gateway {

LlmResponse MockBackend::complete(const LlmRequest& request) {
    const std::string haystack = request.request_tag + "\n" + request.user_message;
    for (const auto& rule : script_.rules) {
        if (haystack.find(rule.match) == std::string::npos) continue;
        std::string text = rule.generate ? rule.generate(request, seed_) : rule.response;
        if (text.empty())
            throw MalformedResponse("mock rule produced empty text for tag '" +
                                    request.request_tag + "'");
        return {text, static_cast<int>(text.size() / 4), id_};
    }
    if (script_.default_response.empty())
        throw MalformedResponse("no mock rule matched tag '" + request.request_tag + "'");
    return {script_.default_response,
            static_cast<int>(script_.default_response.size() / 4), id_};
}

LlmResponse FlakyBackend::complete(const LlmRequest& request) {
    if (failures_left_.fetch_sub(1) > 0)
        throw TransportError("injected transient failure");
    return inner_->complete(request);
}

} // namespace ace::gateway
