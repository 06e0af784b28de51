#include "ace/mutate/mutate.hpp"

#include <algorithm>
#include <set>

#include "ace/csp/solve.hpp"
#include "ace/evolve/constitution_io.hpp"
#include "ace/util/strings.hpp"

namespace ace::mutate {

using core::AtomicConceptEdit;
using core::Concept;
using core::ConceptKind;
using core::EditKind;
using core::Prompt;
using core::TaskSpec;

std::string head_token(const std::string& label) {
    auto tokens = util::whitespace_tokens(label);
    if (tokens.empty()) return label;
    for (std::size_t i = 1; i < tokens.size(); ++i)
        if (util::iequals(tokens[i], "of") && i >= 1) return tokens[i - 1];
    return tokens.back();
}

bool concept_present_strict(const std::string& label, const std::string& text) {
    return util::icontains(text, label);
}

bool concept_present_loose(const std::string& label, const std::string& text) {
    return util::icontains(text, head_token(label));
}

std::vector<Concept> parse_concept_lines(const std::string& text) {
    std::vector<Concept> out;
    for (const auto& raw : util::split(text, '\n')) {
        std::string line = util::trim(raw);
        if (!util::starts_with_ci(line, "CONCEPT:")) continue;
        auto fields = util::split(line.substr(8), '|');
        if (fields.size() < 2) continue;
        std::string kind = util::to_lower(util::trim(fields[0]));
        Concept c;
        c.label = util::trim(fields[1]);
        c.note = fields.size() > 2 ? util::trim(fields[2]) : "";
        if (c.label.empty()) continue;
        if (kind == "explicit") c.kind = ConceptKind::Explicit;
        else if (kind == "implicit") c.kind = ConceptKind::Implicit;
        else continue;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ParsedAceLine> parse_ace_lines(const std::string& text) {
    std::vector<ParsedAceLine> out;
    for (const auto& raw : util::split(text, '\n')) {
        std::string line = util::trim(raw);
        if (!util::starts_with_ci(line, "ACE:")) continue;
        auto fields = util::split(line.substr(4), '|');
        if (fields.size() < 2) continue;
        ParsedAceLine p;
        p.kind = util::to_lower(util::trim(fields[0]));
        p.concept_label = util::trim(fields[1]);
        p.replacement = fields.size() > 2 ? util::trim(fields[2]) : "";
        p.rationale = fields.size() > 3 ? util::trim(fields[3]) : "";
        p.guided_by = fields.size() > 4 ? util::trim(fields[4]) : "";
        out.push_back(std::move(p));
    }
    return out;
}

Mutator::Mutator(gateway::Gateway& gw, TemplateSet templates, MutateConfig config)
    : gw_(gw), templates_(std::move(templates)), config_(std::move(config)) {}

gateway::LlmRequest Mutator::base_request(const TaskSpec& task, const std::string& tag,
                                          double temperature) const {
    gateway::LlmRequest req;
    req.model_id = config_.ace_model_id;
    req.system_instruction = templates_.system_instruction(task.description);
    req.temperature = temperature;
    req.max_output_tokens = config_.max_output_tokens;
    req.request_tag = tag;
    return req;
}

ConceptSet Mutator::extract_concepts(const Prompt& prompt, const TaskSpec& task,
                                     const std::optional<core::Constitution>&) const {
    if (prompt.text.empty()) throw PreconditionError("prompt text is empty");

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        auto req = base_request(task, "extract#" + std::to_string(attempt),
                                config_.temperature_explore);
        req.user_message = templates_.render(
            "extract", {{"task_description", task.description}, {"prompt", prompt.text}});
        auto concepts = parse_concept_lines(gw_.complete(req).text);

        ConceptSet set;
        set.prompt_id = prompt.id;
        std::set<std::string> seen;
        for (auto& c : concepts) {
            if (!seen.insert(util::to_lower(c.label)).second) continue; // first wins
            if (c.kind == ConceptKind::Explicit) set.explicit_concepts.push_back(c);
            else if (static_cast<int>(set.implicit_concepts.size()) < config_.implicit_cap)
                set.implicit_concepts.push_back(c);
        }
        if (!set.explicit_concepts.empty() && !set.implicit_concepts.empty()) return set;
        last_error = "got " + std::to_string(set.explicit_concepts.size()) + " explicit / " +
                     std::to_string(set.implicit_concepts.size()) + " implicit concepts";
    }
    throw ExtractionParseError("concept extraction failed after retries: " + last_error);
}

namespace {

// kind + labels, case-folded; duplicate proposals collapse on this key.
std::string proposal_key(const AtomicConceptEdit& e) {
    std::string key = std::to_string(static_cast<int>(e.kind)) + "|" +
                      util::to_lower(e.subject.label);
    if (e.replacement) key += "|" + util::to_lower(e.replacement->label);
    return key;
}

// Turns parsed ACE lines into validated proposals. When `concepts` is given,
// remove/replace must reference one of its explicit concepts; add and
// replacement labels may be novel (the implicit pool is open-ended). A
// guided_by that names no strategy in the constitution is cleared rather
// than trusted.
std::vector<EditProposal> build_proposals(
    const std::vector<ParsedAceLine>& lines, const ConceptSet* concepts,
    const std::optional<core::Constitution>& constitution) {
    std::vector<EditProposal> out;
    std::set<std::string> seen;
    for (const auto& line : lines) {
        if (line.concept_label.empty()) continue;
        std::optional<AtomicConceptEdit> edit;
        auto find_explicit = [&](const std::string& label) -> std::optional<Concept> {
            if (!concepts) return Concept{label, ConceptKind::Explicit, ""};
            for (const auto& c : concepts->explicit_concepts)
                if (core::same_concept_label(c.label, label)) return c;
            return std::nullopt;
        };
        try {
            if (line.kind == "remove") {
                auto c = find_explicit(line.concept_label);
                if (!c) continue;
                edit = core::make_remove_edit(*c);
            } else if (line.kind == "add") {
                edit = core::make_add_edit(Concept{line.concept_label, ConceptKind::Implicit, ""});
            } else if (line.kind == "replace") {
                if (line.replacement.empty()) continue;
                auto c = find_explicit(line.concept_label);
                if (!c) continue;
                edit = core::make_replace_edit(
                    *c, Concept{line.replacement, ConceptKind::Implicit, ""});
            } else {
                continue;
            }
        } catch (const InvariantViolation&) {
            continue;
        }
        if (!seen.insert(proposal_key(*edit)).second) continue;

        EditProposal p;
        p.edit = std::move(*edit);
        p.rationale = line.rationale;
        if (!line.guided_by.empty() && constitution) {
            for (const auto& s : constitution->strategies)
                if (util::iequals(s.title, line.guided_by)) {
                    p.guided_by = s.title;
                    break;
                }
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Exactly k proposals, preferring edits over concepts not yet covered.
std::vector<EditProposal> select_spanning(std::vector<EditProposal> candidates, int k) {
    std::vector<EditProposal> chosen;
    std::set<std::string> used_concepts;
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t i = 0; i < candidates.size() && static_cast<int>(chosen.size()) < k; ++i) {
        std::string label = util::to_lower(candidates[i].edit.subject.label);
        if (used_concepts.count(label)) continue;
        used_concepts.insert(label);
        taken[i] = true;
        chosen.push_back(candidates[i]);
    }
    for (std::size_t i = 0; i < candidates.size() && static_cast<int>(chosen.size()) < k; ++i)
        if (!taken[i]) chosen.push_back(candidates[i]);
    return chosen;
}

std::string concept_csv(const std::vector<Concept>& concepts) {
    std::string out;
    for (const auto& c : concepts) {
        if (!out.empty()) out += " | ";
        out += c.label;
    }
    return out;
}

} // namespace

std::vector<EditProposal> Mutator::propose_edits(
    const Prompt& prompt, const ConceptSet& concepts, const TaskSpec& task,
    const std::optional<core::Constitution>& constitution, int k) const {
    if (k < 1) throw PreconditionError("k must be >= 1");

    std::string constitution_block;
    if (constitution)
        constitution_block = "Use these strategies as detailed guidance for proposals, and "
                             "name the guiding strategy title in your answer:\n" +
                             evolve::constitution_to_text(*constitution) + "\n";

    std::vector<EditProposal> pool;
    std::set<std::string> pool_keys;
    for (int attempt = 0; attempt < 3; ++attempt) {
        auto req = base_request(task, "propose#" + std::to_string(attempt),
                                config_.temperature_explore);
        req.user_message = templates_.render(
            "propose", {{"task_description", task.description},
                        {"prompt", prompt.text},
                        {"explicit_concepts", concept_csv(concepts.explicit_concepts)},
                        {"implicit_concepts", concept_csv(concepts.implicit_concepts)},
                        {"k", std::to_string(k)},
                        {"constitution_block", constitution_block}});
        auto parsed = parse_ace_lines(gw_.complete(req).text);
        if (parsed.empty() && attempt == 2)
            throw ProposalParseError("no ACE lines in proposal reply");
        for (auto& p : build_proposals(parsed, &concepts, constitution)) {
            if (pool_keys.insert(proposal_key(p.edit)).second) pool.push_back(std::move(p));
        }
        if (static_cast<int>(pool.size()) >= k) return select_spanning(std::move(pool), k);
    }
    throw InsufficientCandidates("only " + std::to_string(pool.size()) + " of " +
                                 std::to_string(k) + " valid proposals after retries");
}

Prompt Mutator::apply_edit(const Prompt& prompt, const AtomicConceptEdit& edit,
                           const TaskSpec& task, const std::string& child_id) const {
    core::validate_edit(edit);
    const std::string& label = edit.subject.label;
    switch (edit.kind) {
        case EditKind::Remove:
        case EditKind::Replace:
            if (!concept_present_loose(label, prompt.text))
                throw PreconditionError("concept '" + label + "' not present in prompt");
            break;
        case EditKind::Add:
            if (concept_present_strict(label, prompt.text))
                throw PreconditionError("concept '" + label + "' already present in prompt");
            break;
    }

    std::string edit_line = (edit.kind == EditKind::Add      ? "add"
                             : edit.kind == EditKind::Remove ? "remove"
                                                             : "replace");
    edit_line += " | " + edit.subject.label + " | " +
                 (edit.replacement ? edit.replacement->label : "");

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        auto req = base_request(task, "apply#" + std::to_string(attempt),
                                config_.temperature_apply);
        req.user_message = templates_.render("apply", {{"prompt", prompt.text},
                                                       {"edit_line", edit_line},
                                                       {"verbalization", edit.verbalization}});
        std::string reply = gw_.complete(req).text;

        std::string mutated;
        for (const auto& raw : util::split(reply, '\n')) {
            std::string line = util::trim(raw);
            if (util::starts_with_ci(line, "MUTATED:")) {
                mutated = util::trim(line.substr(8));
                break;
            }
        }
        if (mutated.empty()) mutated = util::trim(reply);
        if (mutated.empty()) {
            if (attempt == 2) throw MutationParseError("empty rewrite reply");
            continue;
        }

        if (mutated == prompt.text) {
            last_error = "rewrite equals the input prompt";
        } else if ((edit.kind == EditKind::Add || edit.kind == EditKind::Replace) &&
                   !concept_present_loose(
                       edit.kind == EditKind::Add ? label : edit.replacement->label, mutated)) {
            last_error = "rewrite lacks the introduced concept";
        } else if (edit.kind == EditKind::Remove && concept_present_strict(label, mutated)) {
            last_error = "rewrite still contains the removed concept";
        } else {
            return core::make_child_prompt(prompt, child_id, mutated, edit);
        }
    }
    throw MutationConstraintViolated(last_error + " after retries (edit: " +
                                     edit.verbalization + ")");
}

std::string Mutator::math_correct(const std::string& problem_text,
                                  const std::string& solver_error,
                                  const TaskSpec& task) const {
    if (csp::is_valid_csp(problem_text))
        throw PreconditionError("problem already parses; nothing to correct");
    auto req = base_request(task, "correct", config_.temperature_apply);
    req.user_message = templates_.render(
        "correct", {{"problem", problem_text}, {"error", solver_error}});
    std::string reply = gw_.complete(req).text;
    for (const auto& raw : util::split(reply, '\n')) {
        std::string line = util::trim(raw);
        if (util::starts_with_ci(line, "CORRECTED:")) return util::trim(line.substr(10));
    }
    return util::trim(reply);
}

std::vector<EditProposal> Mutator::math_expand(const std::string& problem_text,
                                               const std::vector<EditProposal>& existing,
                                               const TaskSpec& task) const {
    std::string existing_lines;
    for (const auto& p : existing) existing_lines += "- " + p.edit.verbalization + "\n";

    auto req = base_request(task, "expand", config_.temperature_explore);
    req.user_message = templates_.render(
        "expand", {{"task_description", task.description},
                   {"problem", problem_text},
                   {"existing_edits", existing_lines}});
    auto parsed = parse_ace_lines(gw_.complete(req).text);
    auto proposals = build_proposals(parsed, nullptr, std::nullopt);

    // duplicate = same kind + same concept label as an existing proposal
    std::set<std::string> existing_keys;
    for (const auto& p : existing)
        existing_keys.insert(std::to_string(static_cast<int>(p.edit.kind)) + "|" +
                             util::to_lower(p.edit.subject.label));
    std::vector<EditProposal> out;
    for (auto& p : proposals) {
        std::string key = std::to_string(static_cast<int>(p.edit.kind)) + "|" +
                          util::to_lower(p.edit.subject.label);
        if (!existing_keys.count(key)) out.push_back(std::move(p));
    }
    return out;
}

} // namespace ace::mutate
