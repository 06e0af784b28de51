#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ace/gateway/gateway.hpp"
#include "ace/gateway/http.hpp"
#include "ace/gateway/mock.hpp"
#include "ace/util/rng.hpp"

using namespace ace;
using namespace ace::gateway;

namespace {

LlmRequest make_request(const std::string& tag, const std::string& message,
                        const std::string& model = "mock") {
    LlmRequest r;
    r.model_id = model;
    r.user_message = message;
    r.request_tag = tag;
    return r;
}

MockScript echo_script() {
    MockScript s;
    s.rules.push_back({"wordcount", "42 words of text follow here", nullptr});
    s.default_response = "default reply";
    return s;
}

} // namespace

TEST_CASE("mock script: first matching rule wins, tag-based routing") {
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    auto resp = gw.complete(make_request("wordcount", "anything"));
    CHECK(resp.text == "42 words of text follow here");
    CHECK(resp.backend_id == "mock");
    CHECK(gw.complete(make_request("other", "anything")).text == "default reply");
}

TEST_CASE("unregistered model raises BackendUnknown") {
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    CHECK_THROWS_AS(gw.complete(make_request("t", "m", "nope")), BackendUnknown);
}

TEST_CASE("mock replay: 1000 identical requests, 1000 identical responses") {
    MockScript s;
    s.rules.push_back({"gen", "", [](const LlmRequest& r, std::uint64_t seed) {
                           return "reply-" + std::to_string(
                                                 ace::util::hash64(r.user_message, seed));
                       }});
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(s, 42));
    std::string first = gw.complete(make_request("gen", "fixed message")).text;
    for (int i = 0; i < 999; ++i)
        CHECK(gw.complete(make_request("gen", "fixed message")).text == first);

    // a second backend with the same script and seed replays identically
    Gateway gw2;
    gw2.register_backend("mock", std::make_shared<MockBackend>(s, 42));
    CHECK(gw2.complete(make_request("gen", "fixed message")).text == first);
}

TEST_CASE("budget: ceiling 2 fails the third call") {
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    gw.with_budget(2);
    CHECK_NOTHROW(gw.complete(make_request("a", "x")));
    CHECK_NOTHROW(gw.complete(make_request("b", "x")));
    CHECK_THROWS_AS(gw.complete(make_request("c", "x")), BudgetExceeded);
    CHECK(gw.budget_remaining() == 0);
}

TEST_CASE("budget: non-positive ceiling rejected at construction") {
    Gateway gw;
    CHECK_THROWS_AS(gw.with_budget(0), std::invalid_argument);
    CHECK_THROWS_AS(gw.with_budget(-5), std::invalid_argument);
}

TEST_CASE("budget: 64 concurrent callers never overshoot the ceiling") {
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    gw.with_fan_out(64).with_budget(40);

    std::atomic<int> successes{0}, rejected{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 64; ++t) {
        threads.emplace_back([&] {
            try {
                gw.complete(make_request("stress", "x"));
                successes.fetch_add(1);
            } catch (const BudgetExceeded&) {
                rejected.fetch_add(1);
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(successes.load() == 40);
    CHECK(rejected.load() == 24);
    CHECK(gw.budget_remaining() >= 0);
}

TEST_CASE("fan-out bounds in-flight calls without deadlocking") {
    // a backend that records its own concurrency level
    struct CountingBackend : Backend {
        std::atomic<int> in_flight{0};
        std::atomic<int> peak{0};
        LlmResponse complete(const LlmRequest&) override {
            int now = in_flight.fetch_add(1) + 1;
            int prev = peak.load();
            while (now > prev && !peak.compare_exchange_weak(prev, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            in_flight.fetch_sub(1);
            return {"ok", 1, "counting"};
        }
        std::string id() const override { return "counting"; }
    };
    auto backend = std::make_shared<CountingBackend>();
    Gateway gw;
    gw.register_backend("mock", backend);
    gw.with_fan_out(2);

    std::vector<std::thread> threads;
    std::atomic<int> done{0};
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&] {
            gw.complete(make_request("fanout", "x"));
            done.fetch_add(1);
        });
    for (auto& th : threads) th.join();
    CHECK(done.load() == 8);
    CHECK(backend->peak.load() <= 2);
}

TEST_CASE("requests carry well-formed parameters") {
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    LlmRequest empty = make_request("t", "");
    CHECK_THROWS_AS(gw.complete(empty), PreconditionError);
    LlmRequest hot = make_request("t", "x");
    hot.temperature = 9.0;
    CHECK_THROWS_AS(gw.complete(hot), PreconditionError);
}

TEST_CASE("transient transport failures are retried with backoff") {
    auto inner = std::make_shared<MockBackend>(echo_script(), 1);
    Gateway gw;
    gw.register_backend("mock", std::make_shared<FlakyBackend>(inner, 2));
    gw.with_retry(3, std::chrono::milliseconds(0));
    CHECK(gw.complete(make_request("wordcount", "x")).text ==
          "42 words of text follow here");

    // more failures than retries -> the error surfaces
    Gateway gw2;
    gw2.register_backend("mock", std::make_shared<FlakyBackend>(inner, 10));
    gw2.with_retry(2, std::chrono::milliseconds(0));
    CHECK_THROWS_AS(gw2.complete(make_request("wordcount", "x")), TransportError);
}

TEST_CASE("request log records calls as line-delimited json") {
    std::string log_path =
        (std::filesystem::temp_directory_path() / "ace_gw_log_test.jsonl").string();
    std::filesystem::remove(log_path);
    Gateway gw;
    gw.register_backend("mock", std::make_shared<MockBackend>(echo_script(), 1));
    gw.with_request_log(log_path);
    gw.complete(make_request("wordcount", "hello"));
    CHECK_THROWS_AS(gw.complete(make_request("t", "m", "nope")), BackendUnknown);

    std::ifstream in(log_path);
    REQUIRE(in.good());
    std::string line;
    int lines = 0, with_response = 0, with_error = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        ++lines;
        if (j.contains("response")) ++with_response;
        if (j.contains("error")) ++with_error;
    }
    CHECK(lines == 2);
    CHECK(with_response == 1);
    CHECK(with_error == 1);
    std::filesystem::remove(log_path);
}

TEST_CASE("http backend round-trips against a loopback server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions",
                [&](const httplib::Request& req, httplib::Response& res) {
                    int n = hits.fetch_add(1);
                    auto body = nlohmann::json::parse(req.body);
                    CHECK(body.contains("messages"));
                    if (n < 2) { // two transient failures, then success
                        res.status = 500;
                        res.set_content("overloaded", "text/plain");
                        return;
                    }
                    nlohmann::json reply = {
                        {"choices",
                         {{{"message",
                            {{"content", "pong:" + body["model"].get<std::string>()}}}}}}};
                    res.set_content(reply.dump(), "application/json");
                });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    Gateway gw;
    gw.register_backend("remote", std::make_shared<HttpBackend>(cfg));
    gw.with_retry(3, std::chrono::milliseconds(1));
    auto resp = gw.complete(make_request("t", "ping", "remote"));
    CHECK(resp.text == "pong:remote");
    CHECK(hits.load() == 3);

    server.stop();
    server_thread.join();
}

TEST_CASE("http backend surfaces empty model text as a typed error") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        nlohmann::json reply = {{"choices", {{{"message", {{"content", ""}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    Gateway gw;
    gw.register_backend("remote", std::make_shared<HttpBackend>(cfg));
    CHECK_THROWS_AS(gw.complete(make_request("t", "ping", "remote")), MalformedResponse);

    server.stop();
    server_thread.join();
}
