#pragma once

// Random grammars and expressions for property tests, plus brute-force
// helpers built only on the reference interpreter.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pegd/grammar.hpp"

namespace pegd::testing {

/// Tree form of an expression, easy to mutate when shrinking.
struct Ast {
    ExprKind kind = ExprKind::Empty;
    Symbol symbol = 0;      // Term
    std::uint32_t rule = 0; // Nonterm
    std::vector<Ast> kids;
};

struct AstGrammar {
    std::vector<Ast> rules;  // rule 0 is the start
    std::vector<Symbol> alphabet;
};

struct SynthConfig {
    std::size_t max_rules = 8;
    std::size_t max_alphabet = 3;
    std::size_t max_depth = 6;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

Grammar build(const AstGrammar& g);
Expr build_expr(ExprPool& pool, const Ast& a);
std::string show(const AstGrammar& g);

/// Least-fixpoint "can succeed without consuming" with every lookahead
/// counted as possibly succeeding. Indexed by rule.
std::vector<bool> may_be_empty(const AstGrammar& g);

/// Well-formedness with `may_be_empty` in place of ν, applied to every
/// subexpression: no left-recursive path may avoid consuming, and every
/// star body, wherever it occurs, must consume.
bool ford_strict(const AstGrammar& g);

/// A random grammar, possibly ill-formed.
AstGrammar random_grammar(Rng& rng, const SynthConfig& config);

/// Draws until the grammar is well-formed by the analysis and Ford-strict.
AstGrammar random_wf_grammar(Rng& rng, const SynthConfig& config);

/// Random rule-free expression over `alphabet` whose stars always consume.
Ast random_closed_expr(Rng& rng, const std::vector<Symbol>& alphabet, std::size_t depth);

/// Greedy shrinking: repeatedly replaces subtrees by a child or a leaf while
/// the grammar stays Ford-strict and well-formed and `fails` keeps holding.
AstGrammar shrink(AstGrammar g, const std::function<bool(const AstGrammar&)>& fails);

/// Strings of length <= n over the alphabet, shortlex.
std::vector<Tokens> strings_upto(const std::vector<Symbol>& alphabet, std::size_t n);

/// Reference language slice: every string of length <= n accepted exactly.
std::vector<Tokens> brute_language(Expr e, RuleEnv& env, const std::vector<Symbol>& alphabet, std::size_t n);

/// Symbols a such that some a·x with |a·x| <= n is accepted exactly.
std::vector<Symbol> brute_first_symbols(Expr e, RuleEnv& env, const std::vector<Symbol>& alphabet, std::size_t n);

}  // namespace pegd::testing
