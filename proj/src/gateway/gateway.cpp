#include "ace/gateway/gateway.hpp"

#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace ace::gateway {

void Gateway::register_backend(const std::string& model_id, std::shared_ptr<Backend> backend) {
    std::lock_guard lock(mutex_);
    backends_[model_id] = std::move(backend);
}

bool Gateway::has_backend(const std::string& model_id) const {
    std::lock_guard lock(mutex_);
    return backends_.count(model_id) > 0;
}

Gateway& Gateway::with_budget(long ceiling) {
    if (ceiling <= 0) throw std::invalid_argument("budget ceiling must be positive");
    budget_ = ceiling;
    budget_left_.store(ceiling);
    return *this;
}

Gateway& Gateway::with_retry(int max_retries, std::chrono::milliseconds base_delay) {
    if (max_retries < 0) throw std::invalid_argument("retries must be >= 0");
    max_retries_ = max_retries;
    base_delay_ = base_delay;
    return *this;
}

Gateway& Gateway::with_fan_out(int max_in_flight) {
    if (max_in_flight < 1) throw std::invalid_argument("fan-out must be >= 1");
    fan_out_ = max_in_flight;
    return *this;
}

Gateway& Gateway::with_request_log(const std::string& path) {
    std::lock_guard lock(mutex_);
    log_path_ = path;
    return *this;
}

long Gateway::budget_remaining() const {
    return budget_ ? budget_left_.load() : -1;
}

LlmResponse Gateway::complete(const LlmRequest& request) {
    if (request.user_message.empty())
        throw PreconditionError("request has no user message");
    if (!std::isfinite(request.temperature) || request.temperature < 0.0 ||
        request.temperature > 2.0)
        throw PreconditionError("temperature must be finite and within [0, 2]");
    if (request.max_output_tokens < 1)
        throw PreconditionError("max_output_tokens must be positive");

    std::shared_ptr<Backend> backend;
    {
        std::lock_guard lock(mutex_);
        auto it = backends_.find(request.model_id);
        if (it == backends_.end()) backend = nullptr;
        else backend = it->second;
    }
    if (!backend) {
        BackendUnknown err("no backend registered for model '" + request.model_id + "'");
        log_line(request, nullptr, err.what());
        throw err;
    }

    if (budget_) {
        // fetch_sub so concurrent callers can never overshoot the ceiling
        if (budget_left_.fetch_sub(1) <= 0) {
            budget_left_.fetch_add(1);
            BudgetExceeded err("gateway call budget of " + std::to_string(*budget_) +
                               " exhausted");
            log_line(request, nullptr, err.what());
            throw err;
        }
    }
    calls_made_.fetch_add(1);

    {
        std::unique_lock lock(mutex_);
        slot_free_.wait(lock, [&] { return in_flight_ < fan_out_; });
        ++in_flight_;
    }
    struct SlotGuard {
        Gateway* g;
        ~SlotGuard() {
            {
                std::lock_guard lock(g->mutex_);
                --g->in_flight_;
            }
            g->slot_free_.notify_one();
        }
    } guard{this};

    for (int attempt = 0;; ++attempt) {
        try {
            LlmResponse resp = backend->complete(request);
            log_line(request, &resp, "");
            return resp;
        } catch (const TransportError& e) {
            if (attempt >= max_retries_) {
                log_line(request, nullptr, e.what());
                throw;
            }
            auto delay = base_delay_ * (1L << attempt);
            if (delay.count() > 0) std::this_thread::sleep_for(delay);
        } catch (const Error& e) {
            log_line(request, nullptr, e.what());
            throw;
        }
    }
}

void Gateway::log_line(const LlmRequest& req, const LlmResponse* resp,
                       const std::string& error) {
    if (log_path_.empty()) return;
    nlohmann::json j{{"seq", log_seq_.fetch_add(1)},
                     {"tag", req.request_tag},
                     {"model", req.model_id},
                     {"system", req.system_instruction},
                     {"user", req.user_message},
                     {"temperature", req.temperature}};
    if (resp) {
        j["response"] = resp->text;
        j["backend"] = resp->backend_id;
    }
    if (!error.empty()) j["error"] = error;
    std::lock_guard lock(mutex_);
    std::ofstream out(log_path_, std::ios::app);
    out << j.dump() << "\n";
}

} // namespace ace::gateway
