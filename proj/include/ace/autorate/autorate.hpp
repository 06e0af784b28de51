#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ace/core/types.hpp"
#include "ace/csp/problem.hpp"
#include "ace/gateway/gateway.hpp"

namespace ace::autorate {

enum class AutoraterKind { WordCount, MathCsp, JudgeWorstOfK };

struct AutoraterConfig {
    std::string id;
    AutoraterKind kind = AutoraterKind::WordCount;
    int word_limit = 50;                // word_count only
    int k = 3;                          // judge only
    std::string judge_question_template; // judge only; {{prompt}} and {{output}}
    std::string judge_model_id;          // judge only; empty => precomputed scores
    std::string scores_file;             // judge only; precomputed (prompt_id, index, score)
};

// Words are maximal whitespace-separated tokens; score 1 iff count < limit.
core::Verdict rate_word_count(const std::string& response, int limit);

// Success (1) means the model answered incorrectly: extracted answer differs
// from the exact ground truth. A decimal response matching the truth to >= 6
// significant digits counts as correct (models round); equality is otherwise
// exact rational comparison.
core::Verdict rate_math(const csp::CspProblem& problem, const std::string& response);

// Exposed for tests: the 6-significant-digit agreement rule.
bool math_answers_match(const csp::Rational& ground_truth, const csp::Rational& extracted);

// Asks the judge model for a binary alignment score per output and takes the
// minimum (worst-of-k). Score 1 iff the minimum is 0 (a misaligned output
// exists). Unparsable judge replies are retried twice, then JudgeParseError.
core::Verdict rate_judge(const std::string& prompt_text,
                         const std::vector<std::string>& output_descriptions, int k,
                         gateway::Gateway& gw, const AutoraterConfig& config);

// Offline judge path: precomputed per-output scores keyed by (prompt_id, index).
class PrecomputedScores {
public:
    static PrecomputedScores load(const std::string& path);
    void put(const std::string& prompt_id, int index, int score);
    core::Verdict worst_of_k(const std::string& prompt_id, int k) const;

private:
    std::map<std::pair<std::string, int>, int> scores_;
};

// Uniform interface used by rollout; caches verdicts by
// (config hash, prompt_after text, model_output hash).
class Autorater {
public:
    Autorater(AutoraterConfig config, gateway::Gateway* gw);

    // model_output is the target model's text; for precomputed judge tasks it
    // is an output reference ("outputs:<prompt_id>").
    core::Verdict rate(const core::Prompt& prompt_after, const std::string& model_output);

    const AutoraterConfig& config() const { return config_; }
    // True when the task needs no target-model call (judge over precomputed scores).
    bool consumes_output_reference() const;
    std::size_t cache_hits() const { return cache_hits_; }

private:
    core::Verdict rate_uncached(const core::Prompt& prompt_after,
                                const std::string& model_output);

    AutoraterConfig config_;
    gateway::Gateway* gw_;
    std::optional<PrecomputedScores> precomputed_;
    std::map<std::string, core::Verdict> cache_;
    std::mutex cache_mutex_;
    std::size_t cache_hits_ = 0;
};

} // namespace ace::autorate
