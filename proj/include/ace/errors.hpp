#pragma once

#include <stdexcept>
#include <string>

namespace ace {

// All domain errors derive from Error and carry a stable machine tag
// (used for AceRecord error tags and for matching in tests).
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& what)
        : std::runtime_error(what), tag_(std::move(tag)) {}
    const std::string& tag() const noexcept { return tag_; }

private:
    std::string tag_;
};

#define ACE_DEFINE_ERROR(Name, Tag)                                          \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(Tag, what) {}         \
    }

// Violated precondition or type invariant.
ACE_DEFINE_ERROR(InvariantViolation, "invariant_violation");
ACE_DEFINE_ERROR(PreconditionError, "precondition");

// gateway
ACE_DEFINE_ERROR(TransportError, "transport");
ACE_DEFINE_ERROR(BackendUnknown, "backend_unknown");
ACE_DEFINE_ERROR(BudgetExceeded, "budget_exceeded");
ACE_DEFINE_ERROR(MalformedResponse, "malformed_response");

// mutate
ACE_DEFINE_ERROR(ExtractionParseError, "extraction_parse");
ACE_DEFINE_ERROR(ProposalParseError, "proposal_parse");
ACE_DEFINE_ERROR(InsufficientCandidates, "insufficient_candidates");
ACE_DEFINE_ERROR(MutationParseError, "mutation_parse");
ACE_DEFINE_ERROR(MutationConstraintViolated, "mutation_constraint");

// csp
class ParseError : public Error {
public:
    ParseError(const std::string& reason, std::size_t position)
        : Error("csp_parse", reason + " (at offset " + std::to_string(position) + ")"),
          reason_(reason), position_(position) {}
    const std::string& reason() const noexcept { return reason_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string reason_;
    std::size_t position_;
};
ACE_DEFINE_ERROR(CyclicDependency, "cyclic_dependency");
ACE_DEFINE_ERROR(UndefinedVariable, "undefined_variable");
ACE_DEFINE_ERROR(DivisionByZero, "division_by_zero");
ACE_DEFINE_ERROR(Underdetermined, "underdetermined");

// autorate
ACE_DEFINE_ERROR(JudgeParseError, "judge_parse");

// evolve
ACE_DEFINE_ERROR(ConstitutionParseError, "constitution_parse");
ACE_DEFINE_ERROR(SurrogateParseError, "surrogate_parse");
ACE_DEFINE_ERROR(EvaluationError, "evaluation_failed");

// cli
ACE_DEFINE_ERROR(ConfigError, "config");
ACE_DEFINE_ERROR(IoError, "io");

#undef ACE_DEFINE_ERROR

} // namespace ace
