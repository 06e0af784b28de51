#pragma once

#include <string>

#include "ace/gateway/mock.hpp"

namespace ace::sim {

// Deterministic simulated worlds behind the mock backend. Every generator is
// a pure function of (request, seed): fixed script + fixed seed replays
// byte-identically. The worlds understand the pipeline's prompt templates
// (their sentinel lines) and answer like a cooperative model would.

// Word-count world: the target model answers short (success) or long with a
// per-prompt probability; prompts containing `token` use p_token instead of
// p_base. Extraction, proposal, rewrite, surrogate and constitution
// generators are all included, so full pipelines run offline.
struct WordWorldParams {
    double p_base = 0.3;
    double p_token = -1.0;  // < 0: the token grants no advantage
    std::string token = "concise";
    // when set, the extractor offers the token as an implicit concept, so
    // unguided exploration can discover it and datasets become learnable
    bool offer_token = true;
    int short_words = 10;
    int long_words = 80;
};
gateway::MockScript word_world(const WordWorldParams& params);

// Math world: structural edits on CSP problems (exponent, distractor
// variable, offset, constant replacement). The target model solves the
// problem and answers wrongly with p_wrong_exp when an exponent is present,
// p_wrong_base otherwise. p_break damages a fraction of rewrites so the
// Correct/drop path gets real traffic.
struct MathWorldParams {
    double p_wrong_base = 0.15;
    double p_wrong_exp = 0.85;
    double p_break = 0.0;
};
gateway::MockScript math_world(const MathWorldParams& params);

// The mock surrogate applies constitution text literally: it predicts 1 iff
// a Good-strategy body shares a content word with the edit verbalization.
// The mock optimizer reads the misclassified feedback, finds the token that
// separates true-1 from true-0 examples, and writes it into one strategy.
// Both are part of every world; exposed for targeted tests.
int literal_surrogate_predict(const std::string& user_message);
std::string optimize_constitution_reply(const std::string& user_message);
std::string initial_constitution_reply(const std::string& user_message);

} // namespace ace::sim
