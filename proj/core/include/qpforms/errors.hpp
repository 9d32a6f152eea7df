#ifndef QPFORMS_ERRORS_HPP
#define QPFORMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpforms {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation could not certify a single digit of its result.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

/// Division by a scalar that is indistinguishable from zero.
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// A residue was requested for a value with negative valuation.
struct NegativeValuation : Error {
    explicit NegativeValuation(const std::string& what) : Error(what) {}
};

/// Lifting hypotheses do not hold at the supplied point.
struct NotApplicable : Error {
    explicit NotApplicable(const std::string& what) : Error(what) {}
};

/// A level was requested for a value indistinguishable from zero.
struct IsZeroValue : Error {
    explicit IsZeroValue(const std::string& what) : Error(what) {}
};

/// A merge precondition (exact valuation of a sum) failed.
struct ConditionFailed : Error {
    explicit ConditionFailed(const std::string& what) : Error(what) {}
};

/// A driver was run with a prime outside its residue-class precondition.
struct InvalidPrime : Error {
    explicit InvalidPrime(const std::string& what) : Error(what) {}
};

/// The search oracle ran out of candidates while extending a basis.
struct OracleExhausted : Error {
    explicit OracleExhausted(const std::string& what) : Error(what) {}
};

/// A search space exceeded the configured candidate budget.
struct RefusedTooLarge : Error {
    explicit RefusedTooLarge(const std::string& what) : Error(what) {}
};

/// No recursion rule applies to a bound state.
struct NoRuleAvailable : Error {
    explicit NoRuleAvailable(const std::string& what) : Error(what) {}
};

/// Malformed input text (form files, vector files, tokens, certificates).
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace qpforms

#endif
