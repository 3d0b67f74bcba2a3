#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pegd/derivative.hpp"

namespace pegd {

enum class MatchMode { Exact, Prefix };

/// x ∈ L(e) iff ν(D_x e). Prefix mode asks the same of e _*.
bool recognize(DeriveSession& session, Expr e, std::u32string_view x, MatchMode mode = MatchMode::Exact);

enum class GenMode { Random, Exhaustive };

struct GenConfig {
    std::uint64_t seed = 0;
    std::size_t max_length = 16;
    std::size_t step_budget = 100'000;  // derivative steps
    GenMode mode = GenMode::Random;
    double empty_bias = 0.25;
    /// Use the whole alphabet in place of first sets.
    bool full_alphabet_firsts = false;
};

class GenResult {
public:
    enum class Kind { Sentence, Failure, BudgetExhausted };

    static GenResult sentence(Tokens x) { return GenResult(Kind::Sentence, std::move(x)); }
    static GenResult failure() { return GenResult(Kind::Failure, {}); }
    static GenResult budget_exhausted() { return GenResult(Kind::BudgetExhausted, {}); }

    Kind kind() const { return kind_; }
    bool is_sentence() const { return kind_ == Kind::Sentence; }
    const Tokens& text() const { return text_; }

    friend bool operator==(const GenResult&, const GenResult&) = default;

private:
    GenResult(Kind k, Tokens x) : kind_(k), text_(std::move(x)) {}
    Kind kind_;
    Tokens text_;
};

/// One sentence of e, chosen by a seeded walk over first sets and
/// derivatives with backtracking. Exhaustive mode tries terminals in
/// alphabet order and never takes the early ε exit, so it returns the first
/// sentence in depth-first order. Throws IllFormedGrammar unless e is WF.
GenResult generate(DeriveSession& session, Expr e, const GenConfig& config);

struct EnumerateOptions {
    std::size_t step_budget = 1'000'000;
    bool full_alphabet_firsts = false;
};

/// Every x with |x| <= max_length in L(e), shortest first, then by symbol
/// order. Throws IllFormedGrammar unless e is WF and BudgetExhausted when
/// the step budget runs out.
std::vector<Tokens> enumerate(DeriveSession& session, Expr e, std::size_t max_length,
                              const EnumerateOptions& options = {});

/// Orders strings by length, then lexicographically.
bool shortlex_less(const Tokens& a, const Tokens& b);

struct EquivResult {
    enum class Side { Left, Right };

    bool equivalent = true;
    Tokens counterexample;
    Side accepted_by = Side::Left;
    std::size_t sentences_checked = 0;
    std::size_t strings_checked = 0;
};

/// Probabilistic check that two grammars' start expressions accept the same
/// strings: sentences generated from each side are run through the other
/// side's reference interpreter, then every string up to length
/// min(max_length, 4) over the union alphabet is compared directly.
EquivResult equiv_check(const Grammar& left, const Grammar& right, std::size_t samples, std::size_t max_length,
                        std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);

/// All strings over `alphabet` of length <= max_length, shortlex order.
std::vector<Tokens> all_strings(std::span<const Symbol> alphabet, std::size_t max_length);

}  // namespace pegd
