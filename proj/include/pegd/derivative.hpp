#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pegd/analysis.hpp"
#include "pegd/grammar.hpp"

namespace pegd {

/// Which equations D and δ use for choice and star.
///
/// Guarded: D_a(e1/e2) = D_a e1 / δ_a(!e1) D_a e2 and
/// δ_a e* = δ_a e δ_a e* / δ_a(!e).
/// Unguarded: D_a(e1/e2) = D_a e1 / D_a e2 and
/// δ_a e* = δ_a e δ_a e* / δ_a(!e) δ_a e*. Kept to exhibit the inputs on
/// which it disagrees with the reference interpreter.
enum class DeriveRules { Guarded, Unguarded };

struct DeriveLimits {
    std::size_t max_derived_rules = 100'000;
};

/// D and δ over a growing rule environment.
///
/// Rule ids below `base().rule_count()` are the grammar's own rules; the rest
/// are derived cells. D_a A and δ_a A are computed from A's body directly,
/// and a cell is allocated only when that computation reaches the same
/// (operator, A, a) again; the inner occurrence becomes a reference to the
/// cell, which receives the body once the outer computation finishes. D_a e*
/// and δ_a e* get a cell when δ_a e is not ∅, since their equations then
/// refer to themselves.
class DeriveSession final : public RuleEnv {
public:
    explicit DeriveSession(Grammar grammar, DeriveRules rules = DeriveRules::Guarded, DeriveLimits limits = {});
    DeriveSession(const DeriveSession&) = delete;
    DeriveSession& operator=(const DeriveSession&) = delete;

    Expr derive(Symbol a, Expr e);
    Expr delta(Symbol a, Expr e);
    /// D_x e, folding left over x. D_ε e = e.
    Expr derive_string(std::u32string_view x, Expr e);

    const Grammar& base() const { return base_; }
    Expr start() const { return base_.start(); }
    GrammarAnalysis& analysis() { return *analysis_; }

    std::size_t derived_rule_count() const { return cells_.size(); }
    bool is_derived(RuleId id) const { return id.value >= base_.rule_count(); }
    bool is_defined(RuleId id) const;

    /// Standalone grammar holding `e` as its start expression and every rule
    /// reachable from it. Reachable rules keep their names and appear
    /// in discovery order.
    Grammar snapshot(Expr e);

    ExprPool& pool() override { return base_.pool(); }
    const ExprPool& pool() const override { return base_.pool(); }
    Expr rule_body(RuleId id) override;
    std::string rule_name(RuleId id) const override;
    std::size_t rule_count() const override { return base_.rule_count() + cells_.size(); }
    std::span<const Symbol> alphabet() const override { return base_.alphabet(); }

private:
    enum class Op : std::uint8_t { D, Delta };

    struct Cell {
        Op op;
        Expr source;
        Symbol symbol;
        std::optional<Expr> body;
        std::string name;
    };

    struct MemoKey {
        Op op;
        std::uint32_t expr;
        Symbol symbol;
        friend bool operator==(const MemoKey&, const MemoKey&) = default;
    };
    struct MemoHash {
        std::size_t operator()(const MemoKey& k) const noexcept;
    };

    Expr derive_impl(Symbol a, Expr e);
    Expr delta_impl(Symbol a, Expr e);
    Expr through_rule(Op op, Expr nonterm, Symbol a);
    Expr cell_for(Op op, Expr source, Symbol a);
    Expr star_cell(Op op, Expr star, Symbol a);
    void define(Expr cell, Expr body);
    void check_symbol(Symbol a) const;

    Grammar base_;
    DeriveRules rules_;
    DeriveLimits limits_;
    std::vector<Cell> cells_;
    std::unordered_map<MemoKey, Expr, MemoHash> memo_;
    std::unordered_map<MemoKey, Expr, MemoHash> cell_index_;
    std::unordered_set<MemoKey, MemoHash> in_progress_;
    std::unique_ptr<GrammarAnalysis> analysis_;
};

/// Name fragment for a terminal in generated rule names.
std::string symbol_tag(Symbol a);

}  // namespace pegd
