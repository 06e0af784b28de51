#pragma once

#include <map>
#include <string>
#include <vector>

#include "ace/errors.hpp"

namespace ace::mutate {

// Prompt templates for every LLM-facing stage, keyed by name. Bodies use
// {{placeholder}} substitution. Shipped defaults live in the repository's
// templates/ directory; a config may point at a different directory, and
// any file absent there falls back to the built-in text.
class TemplateSet {
public:
    static TemplateSet defaults();
    static TemplateSet load(const std::string& directory);

    const std::string& get(const std::string& name) const;

    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& values) const;

    // system instruction = preamble with the task description substituted
    std::string system_instruction(const std::string& task_description) const;

    static const std::vector<std::string>& names();

private:
    std::map<std::string, std::string> templates_;
};

} // namespace ace::mutate
