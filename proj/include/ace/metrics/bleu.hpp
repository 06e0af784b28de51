#pragma once

#include <string>
#include <vector>

#include "ace/errors.hpp"

namespace ace::metrics {

// BLEU tokenization, fixed so scores replay bit-exactly: lowercase,
// whitespace split, ASCII punctuation stripped at token edges, empty
// tokens dropped.
std::vector<std::string> bleu_tokens(const std::string& text);

// Sentence BLEU: modified n-gram precision for n = 1..max_n clipped against
// reference counts, geometric mean, brevity penalty min(1, e^(1 - r/c)) with
// r the closest reference length (ties -> shorter). When any precision of
// order >= 2 is zero, add-one smoothing applies to numerator and denominator
// of every order >= 2 term. Zero unigram overlap or an empty candidate is 0.
double bleu(const std::string& candidate, const std::vector<std::string>& references,
            int max_n = 4);

// Mean over i of bleu(prompt_i, all others). The per-prompt scores are
// summed in sorted order, which makes the result exactly permutation
// invariant. Throws on fewer than two prompts.
double self_bleu(const std::vector<std::string>& prompts, int max_n = 4);

} // namespace ace::metrics
