#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pegd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed grammar text or an inconsistent grammar definition. Carries a
/// 1-based position when the problem can be located in the source.
class GrammarError : public Error {
public:
    GrammarError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

class UnboundNonterminal : public Error {
public:
    using Error::Error;
};

/// The reference interpreter ran out of rule applications (or stack depth).
class FuelExhausted : public Error {
public:
    using Error::Error;
};

/// A fixpoint computation did not stabilize within its pass budget.
class IterationBudgetExceeded : public Error {
public:
    using Error::Error;
};

class AlphabetViolation : public Error {
public:
    using Error::Error;
};

/// A derivative session or search exceeded its configured work limit.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

class IllFormedGrammar : public Error {
public:
    using Error::Error;
};

}  // namespace pegd
