#include "ace/metrics/bleu.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace ace::metrics {

std::vector<std::string> bleu_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t b = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == b) continue;
        std::size_t tb = b, te = i;
        while (tb < te && std::ispunct(static_cast<unsigned char>(text[tb]))) ++tb;
        while (te > tb && std::ispunct(static_cast<unsigned char>(text[te - 1]))) --te;
        if (te == tb) continue;
        std::string tok = text.substr(tb, te - tb);
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out.push_back(std::move(tok));
    }
    return out;
}

namespace {

using Counts = std::map<std::vector<std::string>, long>;

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
    Counts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

} // namespace

double bleu(const std::string& candidate, const std::vector<std::string>& references,
            int max_n) {
    if (references.empty())
        throw PreconditionError("bleu requires at least one reference");
    const auto cand = bleu_tokens(candidate);
    if (cand.empty()) return 0.0;

    std::vector<std::vector<std::string>> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(bleu_tokens(r));

    // clipped matches and totals per order
    std::vector<long> matched(max_n + 1, 0), total(max_n + 1, 0);
    for (int n = 1; n <= max_n; ++n) {
        Counts cand_counts = ngram_counts(cand, n);
        Counts clip;
        for (const auto& ref : refs) {
            Counts rc = ngram_counts(ref, n);
            for (const auto& [gram, count] : rc) {
                auto it = clip.find(gram);
                if (it == clip.end()) clip[gram] = count;
                else it->second = std::max(it->second, count);
            }
        }
        for (const auto& [gram, count] : cand_counts) {
            total[n] += count;
            auto it = clip.find(gram);
            if (it != clip.end()) matched[n] += std::min(count, it->second);
        }
    }

    if (matched[1] == 0) return 0.0;

    bool smooth = false;
    for (int n = 2; n <= max_n; ++n)
        if (matched[n] == 0) smooth = true;

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        double num = matched[n], den = total[n];
        if (n >= 2 && smooth) {
            num += 1.0;
            den += 1.0;
        }
        if (den == 0.0) return 0.0; // unreachable once smoothing applies, kept as a guard
        log_sum += std::log(num / den);
    }
    double geo_mean = std::exp(log_sum / max_n);

    // closest reference length; ties broken toward the shorter reference
    const long c = static_cast<long>(cand.size());
    long r = static_cast<long>(refs[0].size());
    for (const auto& ref : refs) {
        long len = static_cast<long>(ref.size());
        if (std::labs(len - c) < std::labs(r - c) ||
            (std::labs(len - c) == std::labs(r - c) && len < r))
            r = len;
    }
    double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
    return bp * geo_mean;
}

double self_bleu(const std::vector<std::string>& prompts, int max_n) {
    if (prompts.size() < 2)
        throw PreconditionError("self_bleu is undefined for fewer than two prompts");
    std::vector<double> scores;
    scores.reserve(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        std::vector<std::string> others;
        others.reserve(prompts.size() - 1);
        for (std::size_t j = 0; j < prompts.size(); ++j)
            if (j != i) others.push_back(prompts[j]);
        scores.push_back(bleu(prompts[i], others, max_n));
    }
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

} // namespace ace::metrics
