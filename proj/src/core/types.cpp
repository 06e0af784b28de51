#include "ace/core/types.hpp"

#include <unordered_set>

#include "ace/util/strings.hpp"

namespace ace::core {

bool same_concept_label(const std::string& a, const std::string& b) {
    return util::iequals(a, b);
}

std::string verbalize_edit(const AtomicConceptEdit& edit) {
    switch (edit.kind) {
        case EditKind::Remove:
            return "remove " + edit.subject.label;
        case EditKind::Add:
            return "add " + edit.subject.label;
        case EditKind::Replace:
            return "replace " + edit.subject.label + " with " + edit.replacement->label;
    }
    throw InvariantViolation("unknown edit kind");
}

void validate_edit(const AtomicConceptEdit& edit) {
    if (edit.subject.label.empty())
        throw InvariantViolation("edit concept label is empty");
    switch (edit.kind) {
        case EditKind::Replace:
            if (!edit.replacement)
                throw InvariantViolation("replace edit without replacement");
            if (edit.replacement->label.empty())
                throw InvariantViolation("replacement label is empty");
            break;
        case EditKind::Remove:
            if (edit.replacement)
                throw InvariantViolation("remove edit carries a replacement");
            if (edit.subject.kind != ConceptKind::Explicit)
                throw InvariantViolation("remove edit must target an explicit concept");
            break;
        case EditKind::Add:
            if (edit.replacement)
                throw InvariantViolation("add edit carries a replacement");
            if (edit.subject.kind != ConceptKind::Implicit)
                throw InvariantViolation("add edit must target an implicit concept");
            break;
    }
}

AtomicConceptEdit make_remove_edit(Concept explicit_concept) {
    explicit_concept.kind = ConceptKind::Explicit;
    AtomicConceptEdit e{EditKind::Remove, std::move(explicit_concept), std::nullopt, ""};
    e.verbalization = verbalize_edit(e);
    validate_edit(e);
    return e;
}

AtomicConceptEdit make_add_edit(Concept implicit_concept) {
    implicit_concept.kind = ConceptKind::Implicit;
    AtomicConceptEdit e{EditKind::Add, std::move(implicit_concept), std::nullopt, ""};
    e.verbalization = verbalize_edit(e);
    validate_edit(e);
    return e;
}

AtomicConceptEdit make_replace_edit(Concept existing, Concept replacement) {
    existing.kind = ConceptKind::Explicit;
    replacement.kind = ConceptKind::Implicit;
    AtomicConceptEdit e{EditKind::Replace, std::move(existing), std::move(replacement), ""};
    e.verbalization = verbalize_edit(e);
    validate_edit(e);
    return e;
}

void validate_prompt(const Prompt& p) {
    if (p.text.empty()) throw InvariantViolation("prompt text is empty");
    if (p.depth < 0) throw InvariantViolation("prompt depth is negative");
    const bool is_root = p.depth == 0;
    if (is_root != !p.parent_id.has_value())
        throw InvariantViolation("depth 0 iff parent absent violated for " + p.id);
    if (is_root != !p.applied_edit.has_value())
        throw InvariantViolation("depth 0 iff applied edit absent violated for " + p.id);
    if (p.applied_edit) validate_edit(*p.applied_edit);
}

Prompt make_child_prompt(const Prompt& parent, std::string id, std::string text,
                         AtomicConceptEdit edit) {
    Prompt child;
    child.id = std::move(id);
    child.text = std::move(text);
    child.parent_id = parent.id;
    child.depth = parent.depth + 1;
    child.applied_edit = std::move(edit);
    validate_prompt(child);
    return child;
}

void validate_record(const AceRecord& r) {
    validate_prompt(r.prompt_before);
    validate_prompt(r.prompt_after);
    validate_edit(r.edit);
    if (!r.prompt_after.applied_edit ||
        verbalize_edit(*r.prompt_after.applied_edit) != verbalize_edit(r.edit))
        throw InvariantViolation("prompt_after.applied_edit differs from record edit");
    if (r.score.has_value() == r.error.has_value())
        throw InvariantViolation("score present iff error absent violated");
    if (r.score && *r.score != 0 && *r.score != 1)
        throw InvariantViolation("score must be binary");
}

void validate_constitution(const Constitution& c) {
    std::unordered_set<std::string> titles;
    for (const auto& s : c.strategies) {
        if (s.title.empty()) throw InvariantViolation("strategy title is empty");
        if (s.body.empty())
            throw InvariantViolation("strategy body is empty: " + s.title);
        if (!titles.insert(util::to_lower(s.title)).second)
            throw InvariantViolation("duplicate strategy title: " + s.title);
    }
}

} // namespace ace::core
