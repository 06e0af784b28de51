#include "ace/mutate/templates.hpp"

#include <fstream>
#include <sstream>

#include "ace/util/strings.hpp"

namespace ace::mutate {

namespace {

const std::map<std::string, std::string>& builtin_templates() {
    static const std::map<std::string, std::string> kTemplates = {
        {"preamble",
         "You analyze and steer the behavior of a generative model by editing its input "
         "prompts, one concept at a time.\n"
         "Task: {{task_description}}\n"
         "Explore various possibilities and promote diversity in your suggestions: "
         "prefer non-obvious concepts and edits over safe repeats.\n"},

        {"extract",
         "Read the prompt below and distill it into concepts.\n"
         "List concepts that are explicitly present, then implicit concepts that could "
         "plausibly be introduced (attributes, context, style, framing).\n"
         "\n"
         "PROMPT: {{prompt}}\n"
         "\n"
         "Answer with one line per concept, nothing else:\n"
         "CONCEPT: explicit | <short label> | <optional note>\n"
         "CONCEPT: implicit | <short label> | <optional note>\n"},

        {"propose",
         "Propose single-concept edits to the prompt that push it toward the task goal.\n"
         "Each edit must add one implicit concept, remove one explicit concept, or "
         "replace one explicit concept with a new one.\n"
         "{{constitution_block}}"
         "\n"
         "PROMPT: {{prompt}}\n"
         "EXPLICIT_CONCEPTS: {{explicit_concepts}}\n"
         "IMPLICIT_CONCEPTS: {{implicit_concepts}}\n"
         "PROPOSE_COUNT: {{k}}\n"
         "\n"
         "Answer with exactly PROPOSE_COUNT lines, spanning distinct concepts, "
         "nothing else:\n"
         "ACE: add | <concept> | | <one-line rationale> | <guiding strategy title or blank>\n"
         "ACE: remove | <concept> | | <one-line rationale> | <guiding strategy title or blank>\n"
         "ACE: replace | <old concept> | <new concept> | <one-line rationale> | "
         "<guiding strategy title or blank>\n"},

        {"apply",
         "Rewrite the prompt so the edit below is fully applied. Change only what the "
         "edit requires, but keep the result grammatical and natural (adjust pronouns, "
         "agreement and articles as needed).\n"
         "\n"
         "PROMPT: {{prompt}}\n"
         "EDIT: {{edit_line}}\n"
         "VERBALIZED: {{verbalization}}\n"
         "\n"
         "Answer with a single line:\n"
         "MUTATED: <rewritten prompt>\n"},

        {"correct",
         "The math problem below no longer parses as a chain of variable assignments "
         "with a single queried variable. Repair it with minimal changes so it parses "
         "and solves again, keeping the intended difficulty.\n"
         "\n"
         "PROBLEM: {{problem}}\n"
         "ERROR: {{error}}\n"
         "\n"
         "Answer with a single line:\n"
         "CORRECTED: <repaired problem>\n"},

        {"expand",
         "The edits proposed so far for this math problem are listed below. Propose "
         "additional edits over different concepts (new operations, constants, "
         "variables, structure) so the pool is more diverse. Do not repeat an "
         "existing edit.\n"
         "\n"
         "PROBLEM: {{problem}}\n"
         "EXISTING_EDITS:\n{{existing_edits}}"
         "\n"
         "Answer with ACE lines as before, nothing else:\n"
         "ACE: <add|remove|replace> | <concept> | <replacement or blank> | <rationale> | \n"},

        {"surrogate",
         "Predict how the task autorater will score the edited prompt below, using the "
         "strategy constitution as your guide. Score 1 means the edit achieves the "
         "task goal, 0 means it does not.\n"
         "\n"
         "CONSTITUTION:\n{{constitution}}\n"
         "EXAMPLE_BEFORE: {{before}}\n"
         "EXAMPLE_EDIT: {{edit}}\n"
         "EXAMPLE_AFTER: {{after}}\n"
         "\n"
         "Think briefly if needed, then end your reply with exactly one line:\n"
         "LABEL: <0 or 1>\n"},

        {"constitution_init",
         "Write an initial constitution of prompt-mutation strategies for the task.\n"
         "A constitution has two sections: Good Strategies (edit patterns expected to "
         "achieve the task goal) and Bad Strategies (patterns expected to fail). Each "
         "strategy is a unique, generalizable method; strategies must not contradict "
         "or overlap with each other, and must not quote specific examples.\n"
         "\n"
         "TARGET_SIZE: {{target_size}}\n"
         "Labeled edit examples (label 1 = goal achieved):\n"
         "{{examples}}"
         "\n"
         "Answer with exactly TARGET_SIZE strategies in this format, nothing else:\n"
         "## Good Strategies\n"
         "- <Title>: <1-4 sentence description>\n"
         "## Bad Strategies\n"
         "- <Title>: <1-4 sentence description>\n"},

        {"constitution_update",
         "Improve the constitution below using the classification feedback. The "
         "feedback lists edits with their true autorater label and the label the "
         "constitution-guided classifier predicted; misclassifications are the loss "
         "to reduce. Rewrite, merge, add or drop strategies to fix the "
         "misclassifications while keeping strategies general, distinct and "
         "non-contradictory.\n"
         "\n"
         "CONSTITUTION:\n{{constitution}}\n"
         "FEEDBACK:\n{{feedback}}"
         "TARGET_SIZE: {{target_size}}\n"
         "MAX_CHANGES: {{max_changes}}\n"
         "\n"
         "Output the full updated constitution with exactly TARGET_SIZE strategies, "
         "changing at most MAX_CHANGES strategy titles, in the same format, "
         "nothing else:\n"
         "## Good Strategies\n"
         "- <Title>: <description>\n"
         "## Bad Strategies\n"
         "- <Title>: <description>\n"},
    };
    return kTemplates;
}

} // namespace

const std::vector<std::string>& TemplateSet::names() {
    static const std::vector<std::string> kNames = [] {
        std::vector<std::string> names;
        for (const auto& [name, _] : builtin_templates()) names.push_back(name);
        return names;
    }();
    return kNames;
}

TemplateSet TemplateSet::defaults() {
    TemplateSet set;
    set.templates_ = builtin_templates();
    return set;
}

TemplateSet TemplateSet::load(const std::string& directory) {
    TemplateSet set = defaults();
    for (const auto& name : names()) {
        std::ifstream in(directory + "/" + name + ".txt", std::ios::binary);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        set.templates_[name] = buf.str();
    }
    return set;
}

const std::string& TemplateSet::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown template: " + name);
    return it->second;
}

std::string TemplateSet::render(const std::string& name,
                                const std::map<std::string, std::string>& values) const {
    std::string out = get(name);
    for (const auto& [key, value] : values)
        out = util::replace_all(out, "{{" + key + "}}", value);
    return out;
}

std::string TemplateSet::system_instruction(const std::string& task_description) const {
    return render("preamble", {{"task_description", task_description}});
}

} // namespace ace::mutate
