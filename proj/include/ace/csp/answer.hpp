#pragma once

#include <optional>
#include <string>

#include "ace/csp/rational.hpp"

namespace ace::csp {

// Scans a model response for the last numeric token — integer, decimal, or
// simple fraction "p/q" — converted exactly. A leading '-' binds only when
// not preceded by a digit or letter ("= -2" yes, "5-2" no); "p/0" is read
// as two separate integers. Returns nullopt when no number appears.
std::optional<Rational> extract_answer(const std::string& response_text);

} // namespace ace::csp
