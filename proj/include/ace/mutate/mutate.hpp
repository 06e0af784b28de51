#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ace/core/types.hpp"
#include "ace/gateway/gateway.hpp"
#include "ace/mutate/templates.hpp"

namespace ace::mutate {

struct ConceptSet {
    std::string prompt_id;
    std::vector<core::Concept> explicit_concepts; // present in the prompt
    std::vector<core::Concept> implicit_concepts; // could be introduced
};

struct EditProposal {
    core::AtomicConceptEdit edit;
    std::string rationale;
    std::optional<std::string> guided_by; // strategy title from the constitution
};

struct MutateConfig {
    std::string ace_model_id;       // model driving extract/propose/apply
    double temperature_explore = 0.9; // extraction + proposal: diversity
    double temperature_apply = 0.2;   // rewrite: fidelity
    int implicit_cap = 10;            // bound on extracted implicit concepts
    int max_output_tokens = 1024;
};

// Loose concept-presence check used for mutated text: the label's head token
// (token before "of" for of-phrases, last token otherwise) must appear
// case-insensitively. Full-label matching over-rejects because surface forms
// shift under rewriting ("his son" -> "her son").
bool concept_present_loose(const std::string& label, const std::string& text);
bool concept_present_strict(const std::string& label, const std::string& text);
std::string head_token(const std::string& label);

// The constitution-guided edit module: concept extraction, edit proposal,
// and prompt mutation, plus the math-task Correct/Expand helpers.
class Mutator {
public:
    Mutator(gateway::Gateway& gw, TemplateSet templates, MutateConfig config);

    ConceptSet extract_concepts(const core::Prompt& prompt, const core::TaskSpec& task,
                                const std::optional<core::Constitution>& constitution) const;

    // Exactly k proposals, spanning distinct concepts where possible. When a
    // constitution is supplied its full strategy text rides along in the
    // prompt as guidance, and proposals may cite a strategy title.
    std::vector<EditProposal> propose_edits(
        const core::Prompt& prompt, const ConceptSet& concepts, const core::TaskSpec& task,
        const std::optional<core::Constitution>& constitution, int k) const;

    // LLM rewrite of the prompt under one edit. The result must contain an
    // added/replacement concept, must not contain a removed concept's label,
    // and must differ from the input; two retries, then
    // MutationConstraintViolated.
    core::Prompt apply_edit(const core::Prompt& prompt, const core::AtomicConceptEdit& edit,
                            const core::TaskSpec& task, const std::string& child_id) const;

    // One repair call for a mutated math problem that stopped parsing. The
    // caller re-validates with the solver and drops the record if it still
    // fails. Throws PreconditionError when the text already parses.
    std::string math_correct(const std::string& problem_text, const std::string& solver_error,
                             const core::TaskSpec& task) const;

    // One diversity call proposing edits not duplicating the existing ones
    // (same kind + same concept label). An empty reply is an empty list.
    std::vector<EditProposal> math_expand(const std::string& problem_text,
                                          const std::vector<EditProposal>& existing,
                                          const core::TaskSpec& task) const;

    const MutateConfig& config() const { return config_; }

private:
    gateway::LlmRequest base_request(const core::TaskSpec& task, const std::string& tag,
                                     double temperature) const;

    gateway::Gateway& gw_;
    TemplateSet templates_;
    MutateConfig config_;
};

// Parsing helpers, exposed for tests.
std::vector<core::Concept> parse_concept_lines(const std::string& text);
struct ParsedAceLine {
    std::string kind, concept_label, replacement, rationale, guided_by;
};
std::vector<ParsedAceLine> parse_ace_lines(const std::string& text);

} // namespace ace::mutate
