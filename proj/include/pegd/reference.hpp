#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "pegd/grammar.hpp"

namespace pegd {

/// Result of (e, x) => o: either the unconsumed suffix of x, identified by
/// its start offset, or failure.
class MatchOutcome {
public:
    static constexpr MatchOutcome failure() { return MatchOutcome(kFailed); }
    static constexpr MatchOutcome suffix(std::size_t start) { return MatchOutcome(start); }

    constexpr bool failed() const { return pos_ == kFailed; }
    constexpr bool succeeded() const { return pos_ != kFailed; }
    /// Offset of the remaining suffix; only meaningful on success.
    constexpr std::size_t position() const { return pos_; }

    std::u32string_view remaining(std::u32string_view input) const { return input.substr(pos_); }

    friend constexpr bool operator==(const MatchOutcome&, const MatchOutcome&) = default;

private:
    static constexpr std::size_t kFailed = static_cast<std::size_t>(-1);
    constexpr explicit MatchOutcome(std::size_t pos) : pos_(pos) {}
    std::size_t pos_;
};

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Ford's recognition semantics, rule for rule, with no memoization.
/// `fuel` bounds the number of rule applications; running out (or nesting
/// deeper than the interpreter's stack allowance) throws FuelExhausted.
MatchOutcome reference_match(Expr e, std::u32string_view input, RuleEnv& env, std::uint64_t fuel = kDefaultFuel);

/// (e, x) => ε
bool reference_accepts_exact(Expr e, std::u32string_view input, RuleEnv& env, std::uint64_t fuel = kDefaultFuel);

}  // namespace pegd
