#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ace/gateway/gateway.hpp"

namespace ace::gateway {

// One scripted response rule. `match` is a plain substring tested against
// request_tag + "\n" + user_message; first matching rule wins. A rule either
// carries a fixed response or a generator, which must be a pure function of
// (request, seed) so replays are byte-identical.
struct MockRule {
    std::string match;
    std::string response;
    std::function<std::string(const LlmRequest&, std::uint64_t seed)> generate;
};

struct MockScript {
    std::vector<MockRule> rules;
    std::string default_response;
};

class MockBackend : public Backend {
public:
    MockBackend(MockScript script, std::uint64_t seed, std::string id = "mock")
        : script_(std::move(script)), seed_(seed), id_(std::move(id)) {}

    LlmResponse complete(const LlmRequest& request) override;
    std::string id() const override { return id_; }

    std::uint64_t seed() const { return seed_; }

private:
    MockScript script_;
    std::uint64_t seed_;
    std::string id_;
};

// Fails with TransportError for the first `failures` calls, then delegates.
// Exercises the retry path without a network.
class FlakyBackend : public Backend {
public:
    FlakyBackend(std::shared_ptr<Backend> inner, int failures)
        : inner_(std::move(inner)), failures_left_(failures) {}

    LlmResponse complete(const LlmRequest& request) override;
    std::string id() const override { return inner_->id() + "+flaky"; }

private:
    std::shared_ptr<Backend> inner_;
    std::atomic<int> failures_left_;
};

} // namespace ace::gateway
