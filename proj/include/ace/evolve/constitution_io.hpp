#pragma once

#include <string>

#include "ace/core/types.hpp"

namespace ace::evolve {

// Plain-text constitution format, also used verbatim inside prompt templates:
//
//   ## Good Strategies
//   - <Title>: <body>
//   ## Bad Strategies
//   - <Title>: <body>
std::string constitution_to_text(const core::Constitution& c);

// Tolerant parse of the format above (case-insensitive headings, stray blank
// lines ignored). Throws ConstitutionParseError when no strategies are found
// or a line inside a section is not "- Title: body".
core::Constitution parse_constitution_text(const std::string& text);

void save_constitution(const core::Constitution& c, const std::string& path);
core::Constitution load_constitution(const std::string& path);

} // namespace ace::evolve
