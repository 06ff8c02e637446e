#pragma once

#include <stdexcept>
#include <string>

namespace liftsl2 {

// Top-level error families, used to pick CLI exit codes.
enum class ErrorFamily {
    Input,        // malformed or out-of-contract input
    Precision,    // the N-digit window cannot certify the answer
    Verification, // a relation or postcondition check failed
    Resource,     // a configured cap or depth was exceeded
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), family_(family), code_(std::move(code)) {}

    ErrorFamily family() const { return family_; }
    const std::string& code() const { return code_; }

private:
    ErrorFamily family_;
    std::string code_;
};

#define LIFTSL2_ERROR(NAME, FAMILY)                                          \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what) : Error(FAMILY, #NAME, what) {} \
    };

LIFTSL2_ERROR(DivisionByZero, ErrorFamily::Input)
LIFTSL2_ERROR(ZeroInput, ErrorFamily::Input)
LIFTSL2_ERROR(PrecisionExhausted, ErrorFamily::Precision)
LIFTSL2_ERROR(NotASquare, ErrorFamily::Input)
LIFTSL2_ERROR(OrderMismatch, ErrorFamily::Verification)
LIFTSL2_ERROR(UnsupportedExtension, ErrorFamily::Input)
LIFTSL2_ERROR(UnsupportedField, ErrorFamily::Input)
LIFTSL2_ERROR(DeterminantDrift, ErrorFamily::Precision)
LIFTSL2_ERROR(CentralElement, ErrorFamily::Input)
LIFTSL2_ERROR(CapExceeded, ErrorFamily::Resource)
LIFTSL2_ERROR(DepthInsufficient, ErrorFamily::Resource)
LIFTSL2_ERROR(NotElliptic, ErrorFamily::Input)
LIFTSL2_ERROR(NotFiniteOrder, ErrorFamily::Input)
LIFTSL2_ERROR(EvenOrder, ErrorFamily::Input)
LIFTSL2_ERROR(UnboundedOrder, ErrorFamily::Input)
LIFTSL2_ERROR(HasTwoTorsion, ErrorFamily::Input)
LIFTSL2_ERROR(ClosureFailure, ErrorFamily::Verification)
LIFTSL2_ERROR(TwoTorsionInVertexGroup, ErrorFamily::Input)
LIFTSL2_ERROR(EdgeCompatibilityFailure, ErrorFamily::Verification)
LIFTSL2_ERROR(RelatorFailure, ErrorFamily::Verification)
LIFTSL2_ERROR(RelationNotCentral, ErrorFamily::Verification)
LIFTSL2_ERROR(ConditionViolated, ErrorFamily::Input)
LIFTSL2_ERROR(ExclusionHit, ErrorFamily::Input)
LIFTSL2_ERROR(NotASquareForLambda, ErrorFamily::Input)
LIFTSL2_ERROR(UnsupportedFamily, ErrorFamily::Input)
LIFTSL2_ERROR(VerificationError, ErrorFamily::Verification)
LIFTSL2_ERROR(ParseError, ErrorFamily::Input)
LIFTSL2_ERROR(UsageError, ErrorFamily::Input)
LIFTSL2_ERROR(InternalError, ErrorFamily::Internal)

#undef LIFTSL2_ERROR

inline int exit_code_for(ErrorFamily f) {
    switch (f) {
        case ErrorFamily::Input: return 2;
        case ErrorFamily::Precision: return 3;
        case ErrorFamily::Verification: return 4;
        case ErrorFamily::Resource: return 5;
        case ErrorFamily::Internal: return 1;
    }
    return 1;
}

} // namespace liftsl2
