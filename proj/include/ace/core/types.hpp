#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ace/errors.hpp"

namespace ace::core {

// Binds a task to its autorater and target model. `description` is the
// high-level goal handed to the edit generator; task-private details (such
// as a word limit) stay inside the autorater config and never appear here.
struct TaskSpec {
    std::string task_id;
    std::string description;
    std::string autorater_id;
    std::string target_model_id;
};

enum class ConceptKind { Explicit, Implicit };

struct Concept {
    std::string label;
    ConceptKind kind = ConceptKind::Explicit;
    std::string note; // optional: how the concept relates to the prompt
};

// Concept equality is case-insensitive on labels; model output casing drifts.
bool same_concept_label(const std::string& a, const std::string& b);

enum class EditKind { Add, Remove, Replace };

struct AtomicConceptEdit {
    EditKind kind = EditKind::Add;
    Concept subject;                     // the concept removed, added, or replaced
    std::optional<Concept> replacement;  // present iff kind == Replace
    std::string verbalization;           // e.g. "replace man with woman"
};

/// "remove <c>" | "add <c>" | "replace <c> with <c'>". Labels verbatim.
/// Injective over edits differing in kind or labels, as long as labels do
/// not themselves contain " with ".
std::string verbalize_edit(const AtomicConceptEdit& edit);

// Checked constructors; every edit in the system goes through one of these
// so the kind/concept invariants hold by construction.
AtomicConceptEdit make_remove_edit(Concept explicit_concept);
AtomicConceptEdit make_add_edit(Concept implicit_concept);
AtomicConceptEdit make_replace_edit(Concept existing, Concept replacement);

void validate_edit(const AtomicConceptEdit& edit); // throws InvariantViolation

struct Prompt {
    std::string id;
    std::string text;
    std::optional<std::string> parent_id;
    int depth = 0;
    std::optional<AtomicConceptEdit> applied_edit;
};

// depth = 0 <=> no parent <=> no applied edit; child depth = parent + 1.
void validate_prompt(const Prompt& p);
Prompt make_child_prompt(const Prompt& parent, std::string id, std::string text,
                         AtomicConceptEdit edit);

// One (prompt, edit, mutated prompt, output, verdict) tuple; the unit of
// the ACE dataset. A set error tag invalidates the record and clears score.
struct AceRecord {
    Prompt prompt_before;
    AtomicConceptEdit edit;
    Prompt prompt_after;
    std::string model_output;
    std::optional<int> score; // 0|1, absent iff error set
    long seed = 0;
    std::string task_id;
    std::optional<std::string> error;
};

void validate_record(const AceRecord& r);

enum class Polarity { Good, Bad };

struct Strategy {
    Polarity polarity = Polarity::Good;
    std::string title; // unique within a constitution
    std::string body;  // 1-4 sentences
};

struct Constitution {
    std::vector<Strategy> strategies;
    int generation = 0;
    std::string lineage_note;
};

// Throws unless titles are pairwise distinct (case-insensitive) and every
// body is non-empty. Size-vs-schedule checks live in evolve.
void validate_constitution(const Constitution& c);

struct Verdict {
    int score = 0;      // binary; 1 = desirable outcome for the task
    double raw_measure = 0.0;
    std::string rationale;
};

} // namespace ace::core
