#include "ace/sim/worlds.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "ace/csp/parse.hpp"
#include "ace/csp/solve.hpp"
#include "ace/evolve/constitution_io.hpp"
#include "ace/util/rng.hpp"
#include "ace/util/strings.hpp"

namespace ace::sim {

using gateway::LlmRequest;
using gateway::MockRule;
using gateway::MockScript;

namespace {

// ---- message scanning helpers -------------------------------------------

std::string line_value(const std::string& message, const std::string& sentinel) {
    for (const auto& raw : util::split(message, '\n')) {
        std::string line = util::trim(raw);
        if (util::starts_with_ci(line, sentinel))
            return util::trim(line.substr(sentinel.size()));
    }
    return "";
}

// Text between the line starting with `begin` and the line starting with `end`.
std::string section_between(const std::string& message, const std::string& begin,
                            const std::string& end) {
    auto lines = util::split(message, '\n');
    std::string out;
    bool inside = false;
    for (const auto& raw : lines) {
        std::string t = util::trim(raw);
        if (!inside && util::starts_with_ci(t, begin)) {
            inside = true;
            continue;
        }
        if (inside && util::starts_with_ci(t, end)) break;
        if (inside) out += raw + "\n";
    }
    return out;
}

std::string ireplace_all(const std::string& text, const std::string& from,
                         const std::string& to) {
    if (from.empty()) return text;
    std::string out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t hit = util::ifind(std::string_view(text).substr(pos), from);
        if (hit == std::string_view::npos) {
            out += text.substr(pos);
            return out;
        }
        out += text.substr(pos, hit);
        out += to;
        pos += hit + from.size();
    }
}

std::string squeeze_spaces(const std::string& text) {
    std::string out;
    bool prev_space = false;
    for (char c : text) {
        bool space = c == ' ';
        if (space && prev_space) continue;
        prev_space = space;
        out += c;
    }
    // tidy artifacts left by token removal
    std::string t = util::replace_all(out, " ,", ",");
    t = util::replace_all(t, " .", ".");
    return util::trim(t);
}

const std::set<std::string>& stopwords() {
    static const std::set<std::string> kStop = {
        "edit",    "edits",    "adding",   "remove",  "removes", "removing",
        "replace", "replaces", "replacing", "with",    "that",    "this",
        "tend",    "tends",    "flip",     "flips",   "outcome", "token",
        "tokens",  "strategy", "strategies", "concept", "concepts", "prompt",
        "prompts", "word",     "words",    "goal",    "task",    "autorater",
        "true",    "predicted", "before",  "after",   "label"};
    return kStop;
}

// lowercase alphabetic tokens of length >= 4, stopwords dropped
std::vector<std::string> content_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 4 && !stopwords().count(cur)) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else flush();
    }
    flush();
    return out;
}

std::string filler_words(int n) {
    static const char* kWords[] = {"the", "quick",  "brown", "fox",  "jumps",
                                   "over", "a",     "lazy",  "dog",  "near",
                                   "some", "quiet", "green", "hills", "today"};
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += kWords[i % 15];
    }
    return out;
}

// good strategies scraped leniently from anywhere in a message
std::vector<std::pair<std::string, std::string>> scrape_good_strategies(
    const std::string& message) {
    std::vector<std::pair<std::string, std::string>> out;
    bool in_good = false;
    for (const auto& raw : util::split(message, '\n')) {
        std::string t = util::trim(raw);
        if (util::starts_with_ci(t, "## Good")) {
            in_good = true;
            continue;
        }
        if (util::starts_with_ci(t, "##")) {
            in_good = false;
            continue;
        }
        if (!in_good || t.empty() || t[0] != '-') continue;
        std::string item = util::trim(t.substr(1));
        std::size_t colon = item.find(':');
        if (colon == std::string::npos) continue;
        out.emplace_back(util::trim(item.substr(0, colon)), util::trim(item.substr(colon + 1)));
    }
    return out;
}

// ---- shared constitution machinery ---------------------------------------

struct FeedbackLine {
    std::string edit;
    std::string after;
    int true_label = 0;
    bool misclassified = false;
};

std::vector<FeedbackLine> parse_feedback(const std::string& message) {
    std::vector<FeedbackLine> out;
    for (const auto& raw : util::split(message, '\n')) {
        std::string t = util::trim(raw);
        bool miss = util::starts_with_ci(t, "MISCLASSIFIED:");
        bool corr = util::starts_with_ci(t, "CORRECT:");
        if (!miss && !corr) continue;
        FeedbackLine fl;
        fl.misclassified = miss;
        std::string rest = t.substr(t.find(':') + 1);
        for (const auto& field : util::split(rest, '|')) {
            std::string f = util::trim(field);
            if (util::starts_with_ci(f, "edit=")) fl.edit = util::trim(f.substr(5));
            else if (util::starts_with_ci(f, "true=")) fl.true_label = f[5] == '1';
            else if (util::starts_with_ci(f, "after=")) fl.after = util::trim(f.substr(6));
        }
        out.push_back(std::move(fl));
    }
    return out;
}

// one credit per example for every content word in the verbalization or the
// mutated text (labels follow the text, so inherited tokens count too)
std::set<std::string> example_tokens(const std::string& edit, const std::string& after) {
    std::set<std::string> out;
    for (const auto& tok : content_tokens(edit)) out.insert(tok);
    for (const auto& tok : content_tokens(after)) out.insert(tok);
    return out;
}

// the content word that best separates true-1 from true-0 examples:
// presence among misclassified positives minus twice the presence among
// negatives, accepted only with a clear margin
std::string infer_trigger(const std::vector<FeedbackLine>& feedback) {
    std::map<std::string, int> pos_count, neg_count;
    for (const auto& fl : feedback) {
        for (const auto& tok : example_tokens(fl.edit, fl.after)) {
            if (fl.true_label == 1 && fl.misclassified) ++pos_count[tok];
            if (fl.true_label == 0) ++neg_count[tok];
        }
    }
    std::string best;
    int best_score = 1; // require net evidence of at least 2
    for (const auto& [tok, count] : pos_count) {
        int score = count - 2 * (neg_count.count(tok) ? neg_count[tok] : 0);
        if (score > best_score || (score == best_score && !best.empty() && tok < best)) {
            best = tok;
            best_score = score;
        }
    }
    return best;
}

} // namespace

std::string initial_constitution_reply(const std::string& user_message) {
    int k = 10;
    std::string ts = line_value(user_message, "TARGET_SIZE:");
    if (!ts.empty()) k = std::max(1, std::stoi(ts));
    int good_n = (k + 1) / 2;

    core::Constitution c;
    for (int i = 1; i <= good_n; ++i)
        c.strategies.push_back({core::Polarity::Good, "Guiding note " + std::to_string(i),
                                "Maintain clarity around aspect " + std::to_string(i) +
                                    " and stay close to the original intent."});
    for (int i = 1; i <= k - good_n; ++i)
        c.strategies.push_back({core::Polarity::Bad, "Cautionary note " + std::to_string(i),
                                "Avoid churn of kind " + std::to_string(i) +
                                    " without a clear purpose."});
    return evolve::constitution_to_text(c);
}

std::string optimize_constitution_reply(const std::string& user_message) {
    std::string incumbent_text =
        section_between(user_message, "CONSTITUTION:", "FEEDBACK:");
    core::Constitution c = evolve::parse_constitution_text(incumbent_text);

    int target = static_cast<int>(c.strategies.size());
    std::string ts = line_value(user_message, "TARGET_SIZE:");
    if (!ts.empty()) target = std::max(1, std::stoi(ts));
    int max_changes = 1;
    std::string mc = line_value(user_message, "MAX_CHANGES:");
    if (!mc.empty()) max_changes = std::max(1, std::stoi(mc));

    int changes = 0;
    std::string trigger = infer_trigger(parse_feedback(user_message));
    bool already_known = false;
    for (const auto& s : c.strategies)
        if (!trigger.empty() && util::icontains(s.body, trigger)) already_known = true;

    if (!trigger.empty() && !already_known && changes < max_changes) {
        core::Strategy learned{core::Polarity::Good, "Token emphasis " + trigger,
                               "Edits that add the token " + trigger +
                                   " flip the autorater outcome."};
        if (static_cast<int>(c.strategies.size()) < target) {
            c.strategies.insert(c.strategies.begin(), learned);
        } else {
            // replace the last bad strategy, else the last strategy
            std::size_t victim = c.strategies.size() - 1;
            for (std::size_t i = c.strategies.size(); i-- > 0;)
                if (c.strategies[i].polarity == core::Polarity::Bad) {
                    victim = i;
                    break;
                }
            c.strategies[victim] = learned;
        }
        ++changes;
    }

    // pad or trim toward the target size within the change budget
    auto titles_taken = [&](const std::string& t) {
        for (const auto& s : c.strategies)
            if (util::iequals(s.title, t)) return true;
        return false;
    };
    int pad_index = 1;
    while (static_cast<int>(c.strategies.size()) < target && changes < max_changes) {
        std::string title = "Neutral padding " + std::to_string(pad_index++);
        if (titles_taken(title)) continue;
        c.strategies.push_back({core::Polarity::Bad, title,
                                "Keep the remaining guidance unchanged and steady."});
        ++changes;
    }
    while (static_cast<int>(c.strategies.size()) > target && changes < max_changes) {
        c.strategies.pop_back();
        ++changes;
    }
    return evolve::constitution_to_text(c);
}

int literal_surrogate_predict(const std::string& user_message) {
    std::string constitution_text =
        section_between(user_message, "CONSTITUTION:", "EXAMPLE_BEFORE:");
    std::string edit = line_value(user_message, "EXAMPLE_EDIT:");
    std::string after = line_value(user_message, "EXAMPLE_AFTER:");

    std::set<std::string> guide_tokens;
    for (const auto& [title, body] : scrape_good_strategies(constitution_text)) {
        for (const auto& tok : content_tokens(body)) guide_tokens.insert(tok);
    }
    for (const auto& tok : example_tokens(edit, after))
        if (guide_tokens.count(tok)) return 1;
    return 0;
}

// ---- word-count world -----------------------------------------------------

namespace {

std::string word_extract_reply(const LlmRequest& req, const WordWorldParams& params) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    std::string out;
    std::set<std::string> seen;
    int emitted = 0;
    for (const auto& tok : util::whitespace_tokens(prompt)) {
        std::string clean;
        for (char ch : tok)
            if (std::isalpha(static_cast<unsigned char>(ch)))
                clean += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (clean.size() < 4 || !seen.insert(clean).second) continue;
        out += "CONCEPT: explicit | " + clean + " |\n";
        if (++emitted >= 4) break;
    }
    if (emitted == 0) {
        auto toks = util::whitespace_tokens(prompt);
        out += "CONCEPT: explicit | " + (toks.empty() ? std::string("thing") : toks[0]) +
               " |\n";
    }
    // the world's lever is offered like any other implicit concept, so
    // unguided exploration can stumble on it and the dataset is learnable
    if (params.offer_token && !params.token.empty() &&
        !util::icontains(prompt, params.token))
        out += "CONCEPT: implicit | " + params.token + " |\n";
    out += "CONCEPT: implicit | time of day |\n";
    out += "CONCEPT: implicit | camera angle |\n";
    out += "CONCEPT: implicit | audience focus |\n";
    out += "CONCEPT: implicit | weather mood |\n";
    return out;
}

std::string word_propose_reply(const LlmRequest& req, std::uint64_t seed,
                               const WordWorldParams& params) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    auto explicit_concepts = util::split(line_value(req.user_message, "EXPLICIT_CONCEPTS:"), '|');
    auto implicit_concepts = util::split(line_value(req.user_message, "IMPLICIT_CONCEPTS:"), '|');
    for (auto& c : explicit_concepts) c = util::trim(c);
    for (auto& c : implicit_concepts) c = util::trim(c);
    int k = 2;
    std::string ks = line_value(req.user_message, "PROPOSE_COUNT:");
    if (!ks.empty()) k = std::max(1, std::stoi(ks));

    auto goods = scrape_good_strategies(req.user_message);
    bool guided = false;
    std::string guiding_title;
    for (const auto& [title, body] : goods) {
        if (!params.token.empty() &&
            (util::icontains(body, params.token) || util::icontains(title, params.token))) {
            guided = true;
            guiding_title = title;
            break;
        }
    }

    std::string out;
    std::set<std::string> used;
    int emitted = 0;
    if (guided && !util::icontains(prompt, params.token)) {
        out += "ACE: add | " + params.token + " | | constitution says the token helps | " +
               guiding_title + "\n";
        used.insert("add|" + params.token);
        ++emitted;
    }
    std::uint64_t h = util::hash64("propose|" + prompt, seed);
    for (int i = 0; emitted < k && i < 24; ++i) {
        std::uint64_t pick = (h >> (i % 32)) + static_cast<std::uint64_t>(i);
        std::string line, key;
        if (pick % 4 == 0 && !explicit_concepts.empty()) {
            const auto& c = explicit_concepts[pick % explicit_concepts.size()];
            key = "remove|" + c;
            line = "ACE: remove | " + c + " | | trim a concept |\n";
        } else if (pick % 4 == 1 && !explicit_concepts.empty() && !implicit_concepts.empty()) {
            const auto& c = explicit_concepts[pick % explicit_concepts.size()];
            const auto& r = implicit_concepts[pick % implicit_concepts.size()];
            key = "replace|" + c;
            line = "ACE: replace | " + c + " | " + r + " | swap a concept |\n";
        } else if (!implicit_concepts.empty()) {
            // slot 3 leans on the first implicit concept, which is the
            // world's lever when one is configured; keeps datasets learnable
            const auto& c = pick % 4 == 3
                                ? implicit_concepts.front()
                                : implicit_concepts[pick % implicit_concepts.size()];
            if (util::icontains(prompt, c)) continue;
            key = "add|" + c;
            line = "ACE: add | " + c + " | | introduce context |\n";
        } else {
            continue;
        }
        if (!used.insert(key).second) continue;
        out += line;
        ++emitted;
    }
    return out.empty() ? "ACE: add | gentle framing | | fallback |\n" : out;
}

std::string word_apply_reply(const LlmRequest& req) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    auto fields = util::split(line_value(req.user_message, "EDIT:"), '|');
    std::string kind = fields.size() > 0 ? util::trim(fields[0]) : "";
    std::string label = fields.size() > 1 ? util::trim(fields[1]) : "";
    std::string replacement = fields.size() > 2 ? util::trim(fields[2]) : "";

    std::string mutated;
    if (kind == "remove") {
        mutated = squeeze_spaces(ireplace_all(prompt, label, ""));
        if (util::iequals(mutated, prompt)) {
            // full label absent; drop its head token instead
            auto toks = util::whitespace_tokens(label);
            mutated = squeeze_spaces(ireplace_all(prompt, toks.back(), ""));
        }
        if (mutated.empty()) mutated = "something plain";
    } else if (kind == "add") {
        mutated = prompt + ", " + label;
    } else { // replace
        mutated = ireplace_all(prompt, label, replacement);
        if (util::iequals(mutated, prompt)) {
            auto toks = util::whitespace_tokens(label);
            mutated = ireplace_all(prompt, toks.back(), replacement);
        }
    }
    return "MUTATED: " + mutated;
}

std::string word_target_reply(const LlmRequest& req, std::uint64_t seed,
                              const WordWorldParams& params) {
    double p = params.p_base;
    if (params.p_token >= 0.0 && !params.token.empty() &&
        util::icontains(req.user_message, params.token))
        p = params.p_token;
    // the tag joins the draw so multi-sample requests (target#i) vary
    double u = util::hash_uniform(req.request_tag + "|" + req.user_message, seed);
    return filler_words(u < p ? params.short_words : params.long_words);
}

} // namespace

MockScript word_world(const WordWorldParams& params) {
    MockScript script;
    script.rules.push_back(
        {"constitution_update#", "",
         [](const LlmRequest& r, std::uint64_t) { return optimize_constitution_reply(r.user_message); }});
    script.rules.push_back(
        {"constitution_init#", "",
         [](const LlmRequest& r, std::uint64_t) { return initial_constitution_reply(r.user_message); }});
    script.rules.push_back({"surrogate#", "", [](const LlmRequest& r, std::uint64_t) {
                                return "LABEL: " +
                                       std::to_string(literal_surrogate_predict(r.user_message));
                            }});
    script.rules.push_back({"extract#", "", [params](const LlmRequest& r, std::uint64_t) {
                                return word_extract_reply(r, params);
                            }});
    script.rules.push_back({"propose#", "", [params](const LlmRequest& r, std::uint64_t seed) {
                                return word_propose_reply(r, seed, params);
                            }});
    script.rules.push_back({"apply#", "", [](const LlmRequest& r, std::uint64_t) {
                                return word_apply_reply(r);
                            }});
    script.rules.push_back({"target", "", [params](const LlmRequest& r, std::uint64_t seed) {
                                return word_target_reply(r, seed, params);
                            }});
    script.rules.push_back({"judge#", "", [params](const LlmRequest& r, std::uint64_t seed) {
                                // prompts carrying the world token misalign far more often
                                double p_aligned = 0.6;
                                if (!params.token.empty())
                                    p_aligned = util::icontains(r.user_message, params.token)
                                                    ? 0.15
                                                    : 0.75;
                                bool aligned =
                                    util::hash_uniform("judge|" + r.user_message, seed) <
                                    p_aligned;
                                return std::string("ALIGNED: ") + (aligned ? "1" : "0");
                            }});
    return script;
}

// ---- math world -----------------------------------------------------------

namespace {

std::string math_extract_reply(const LlmRequest& req) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    std::string out;
    try {
        csp::CspProblem p = csp::parse_csp(prompt);
        for (const auto& a : p.assignments)
            out += "CONCEPT: explicit | variable " + a.variable + " |\n";
    } catch (const Error&) {
        out += "CONCEPT: explicit | variable x |\n";
    }
    out += "CONCEPT: implicit | exponent 2 |\n";
    out += "CONCEPT: implicit | offset 1 |\n";
    out += "CONCEPT: implicit | distractor z9 |\n";
    return out;
}

std::string math_propose_reply(const LlmRequest& req, std::uint64_t seed) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    int k = 2;
    std::string ks = line_value(req.user_message, "PROPOSE_COUNT:");
    if (!ks.empty()) k = std::max(1, std::stoi(ks));

    auto goods = scrape_good_strategies(req.user_message);
    std::string guiding_title;
    for (const auto& [title, body] : goods)
        if (util::icontains(body, "exponent") || util::icontains(title, "exponent")) {
            guiding_title = title;
            break;
        }

    // candidates keyed by concept so the dedupe downstream never starves a node
    std::vector<std::pair<std::string, std::string>> candidates;
    if (!guiding_title.empty())
        candidates.emplace_back("exponent",
                                "ACE: add | exponent 2 | | guided difficulty bump | " +
                                    guiding_title);
    candidates.emplace_back("exponent", "ACE: add | exponent 2 | | harder arithmetic |");
    candidates.emplace_back("offset", "ACE: add | offset 1 | | shift the result |");
    if (!util::icontains(prompt, "z9"))
        candidates.emplace_back("distractor", "ACE: add | distractor z9 | | unused variable |");

    std::string out;
    std::set<std::string> used;
    std::uint64_t h = util::hash64("mpropose|" + prompt, seed);
    int emitted = 0;
    // the guided pick always leads; the rest cycle from a seeded offset
    for (int i = 0; emitted < k && i < 16; ++i) {
        std::size_t idx = i == 0 && !guiding_title.empty()
                              ? 0
                              : static_cast<std::size_t>((h + i) % candidates.size());
        const auto& [key, line] = candidates[idx];
        if (!used.insert(key).second) continue;
        out += line + "\n";
        ++emitted;
    }
    return out;
}

std::string math_apply_reply(const LlmRequest& req, std::uint64_t seed,
                             const MathWorldParams& params) {
    std::string prompt = line_value(req.user_message, "PROMPT:");
    auto fields = util::split(line_value(req.user_message, "EDIT:"), '|');
    std::string kind = fields.size() > 0 ? util::trim(fields[0]) : "";
    std::string label = fields.size() > 1 ? util::trim(fields[1]) : "";

    std::string mutated;
    try {
        csp::CspProblem p = csp::parse_csp(prompt);
        if (p.assignments.empty()) throw PreconditionError("no assignments to edit");
        if (kind == "add" && util::starts_with_ci(label, "exponent")) {
            auto& first = p.assignments.front();
            first.expression = csp::make_binary(
                '^', csp::make_group(first.expression), csp::make_literal(csp::Rational(2), "2"));
        } else if (kind == "add" && util::starts_with_ci(label, "offset")) {
            for (auto& a : p.assignments)
                if (a.variable == p.query) {
                    a.expression = csp::make_binary('+', a.expression,
                                                    csp::make_literal(csp::Rational(1), "1"));
                    break;
                }
        } else if (kind == "add" && util::starts_with_ci(label, "distractor")) {
            auto toks = util::whitespace_tokens(label);
            p.assignments.push_back(
                {toks.back(), csp::make_literal(csp::Rational(7), "7")});
        } else {
            // fallback: bump the queried variable so the text always changes
            for (auto& a : p.assignments)
                if (a.variable == p.query) {
                    a.expression = csp::make_binary('+', a.expression,
                                                    csp::make_literal(csp::Rational(2), "2"));
                    break;
                }
        }
        mutated = csp::pretty_print(p);
    } catch (const Error&) {
        mutated = prompt + " " + label;
    }

    // occasionally damage the rewrite so the Correct path sees traffic
    if (params.p_break > 0.0 &&
        util::hash_uniform("break|" + mutated, seed) < params.p_break) {
        std::size_t dot = mutated.rfind(". What is");
        if (dot != std::string::npos) mutated.insert(dot, ", q9 = q9");
    }
    return "MUTATED: " + mutated;
}

std::string math_correct_reply(const LlmRequest& req) {
    std::string broken = line_value(req.user_message, "PROBLEM:");
    std::string fixed = util::replace_all(broken, ", q9 = q9", "");
    return "CORRECTED: " + fixed;
}

std::string math_expand_reply(const LlmRequest& req) {
    std::string existing = section_between(req.user_message, "EXISTING_EDITS:", "Answer");
    std::string out;
    if (!util::icontains(existing, "offset"))
        out += "ACE: add | offset 1 | | expansion pick |\n";
    if (!util::icontains(existing, "exponent"))
        out += "ACE: add | exponent 2 | | expansion pick |\n";
    return out.empty() ? "ACE: add | offset 1 | | expansion pick |\n" : out;
}

std::string math_target_reply(const LlmRequest& req, std::uint64_t seed,
                              const MathWorldParams& params) {
    try {
        csp::Rational truth = csp::solve_csp(csp::parse_csp(req.user_message));
        double p = req.user_message.find('^') != std::string::npos ? params.p_wrong_exp
                                                                   : params.p_wrong_base;
        bool wrong = util::hash_uniform("mtarget|" + req.user_message, seed) < p;
        csp::Rational answer = wrong ? truth + csp::Rational(1) : truth;
        return "The answer is " + answer.to_string() + ".";
    } catch (const Error&) {
        return "I cannot solve this.";
    }
}

} // namespace

MockScript math_world(const MathWorldParams& params) {
    MockScript script;
    script.rules.push_back(
        {"constitution_update#", "",
         [](const LlmRequest& r, std::uint64_t) { return optimize_constitution_reply(r.user_message); }});
    script.rules.push_back(
        {"constitution_init#", "",
         [](const LlmRequest& r, std::uint64_t) { return initial_constitution_reply(r.user_message); }});
    script.rules.push_back({"surrogate#", "", [](const LlmRequest& r, std::uint64_t) {
                                return "LABEL: " +
                                       std::to_string(literal_surrogate_predict(r.user_message));
                            }});
    script.rules.push_back({"extract#", "", [](const LlmRequest& r, std::uint64_t) {
                                return math_extract_reply(r);
                            }});
    script.rules.push_back({"propose#", "", [](const LlmRequest& r, std::uint64_t seed) {
                                return math_propose_reply(r, seed);
                            }});
    script.rules.push_back({"apply#", "", [params](const LlmRequest& r, std::uint64_t seed) {
                                return math_apply_reply(r, seed, params);
                            }});
    script.rules.push_back({"correct", "", [](const LlmRequest& r, std::uint64_t) {
                                return math_correct_reply(r);
                            }});
    script.rules.push_back({"expand", "", [](const LlmRequest& r, std::uint64_t) {
                                return math_expand_reply(r);
                            }});
    script.rules.push_back({"target", "", [params](const LlmRequest& r, std::uint64_t seed) {
                                return math_target_reply(r, seed, params);
                            }});
    return script;
}

} // namespace ace::sim
