#pragma once

#include "ace/csp/problem.hpp"

namespace ace::csp {

// Tokenizes on statement separators (comma, period, semicolon, newline; a
// period flanked by digits is a decimal point), parses "<var> = <expr>"
// assignments and a trailing "What is <var>" query (case-insensitive, '?'
// optional). Accepts the unicode operator glyphs U+2212 U+00D7 U+00F7 as
// aliases for - * /. Throws ParseError with position and reason.
CspProblem parse_csp(const std::string& text);

} // namespace ace::csp
