#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ace/errors.hpp"

namespace ace::gateway {

struct LlmRequest {
    std::string model_id;
    std::string system_instruction;
    std::string user_message;
    double temperature = 0.7;        // [0, 2]
    int max_output_tokens = 2048;
    std::string request_tag;         // pipeline stage that issued the call
};

struct LlmResponse {
    std::string text;
    int token_estimate = 0;
    std::string backend_id;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual LlmResponse complete(const LlmRequest& request) = 0;
    virtual std::string id() const = 0;
};

// Uniform front door for chat completions: retry with exponential backoff on
// transport failures, an optional global call budget, bounded in-flight
// fan-out, and a line-delimited request log for audit.
class Gateway {
public:
    Gateway() = default;

    void register_backend(const std::string& model_id, std::shared_ptr<Backend> backend);
    bool has_backend(const std::string& model_id) const;

    // Global call-count ceiling shared by all users of this gateway.
    // Each logical complete() counts once, retries included.
    Gateway& with_budget(long ceiling);

    Gateway& with_retry(int max_retries, std::chrono::milliseconds base_delay);
    Gateway& with_fan_out(int max_in_flight);
    Gateway& with_request_log(const std::string& path);

    LlmResponse complete(const LlmRequest& request);

    long calls_made() const { return calls_made_.load(); }
    long budget_remaining() const;

    static constexpr int kDefaultRetries = 3;
    static constexpr int kDefaultFanOut = 8;

private:
    void log_line(const LlmRequest& req, const LlmResponse* resp, const std::string& error);

    std::map<std::string, std::shared_ptr<Backend>> backends_;
    mutable std::mutex mutex_; // guards backends_, fan-out count, log stream
    std::condition_variable slot_free_;
    int in_flight_ = 0;
    std::optional<long> budget_;
    std::atomic<long> budget_left_{0};
    std::atomic<long> calls_made_{0};
    int max_retries_ = kDefaultRetries;
    std::chrono::milliseconds base_delay_{200};
    int fan_out_ = kDefaultFanOut;
    std::string log_path_;
    std::atomic<long> log_seq_{0};
};

} // namespace ace::gateway
