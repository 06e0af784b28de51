#pragma once

#include <cstdio>
#include <string>

namespace ace::core {

// Identifiers are "<task_id>/<seed>/<counter>" with a zero-padded counter so
// lexicographic order equals allocation order. Rollout hands each root a
// disjoint counter block, which keeps ids reproducible under concurrency.
class IdGen {
public:
    IdGen(std::string task_id, long seed, std::uint64_t start = 0)
        : task_id_(std::move(task_id)), seed_(seed), next_(start) {}

    std::string next() { return format(next_++); }

    std::string format(std::uint64_t counter) const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%09llu",
                      static_cast<unsigned long long>(counter));
        return task_id_ + "/" + std::to_string(seed_) + "/" + buf;
    }

    std::uint64_t position() const { return next_; }

private:
    std::string task_id_;
    long seed_;
    std::uint64_t next_;
};

} // namespace ace::core
