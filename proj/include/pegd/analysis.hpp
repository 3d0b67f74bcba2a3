#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pegd/fixpoint.hpp"
#include "pegd/grammar.hpp"

namespace pegd {

/// Finite set of terminals, kept sorted.
class SymbolSet {
public:
    SymbolSet() = default;
    explicit SymbolSet(std::span<const Symbol> symbols);

    bool contains(Symbol s) const;
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const std::vector<Symbol>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    void insert(Symbol s);
    SymbolSet unite(const SymbolSet& other) const;
    SymbolSet intersect(const SymbolSet& other) const;
    bool is_subset_of(const SymbolSet& other) const;

    friend bool operator==(const SymbolSet&, const SymbolSet&) = default;

private:
    std::vector<Symbol> items_;
};

std::string format_symbol_set(const SymbolSet& s);

/// Keys of the analysis tables: either a rule or a standalone expression.
struct AnalysisKey {
    bool is_rule = false;
    std::uint32_t id = 0;

    static AnalysisKey of_rule(RuleId r) { return {true, r.value}; }
    static AnalysisKey of_expr(Expr e) { return {false, e.id()}; }
    friend bool operator==(const AnalysisKey&, const AnalysisKey&) = default;
};

/// firsts' e as the affine map t ↦ always ∪ (passed ∩ t).
struct FirstsMap {
    SymbolSet always;
    SymbolSet passed;
    friend bool operator==(const FirstsMap&, const FirstsMap&) = default;
};

/// Pairs of symbol sets under componentwise union; height 2|V|.
struct FirstsLattice {
    using value_type = FirstsMap;
    std::size_t alphabet_size = 0;
    FirstsMap bottom() const { return {}; }
    FirstsMap join(const FirstsMap& a, const FirstsMap& b) const {
        return {a.always.unite(b.always), a.passed.unite(b.passed)};
    }
    std::size_t height() const { return 2 * alphabet_size; }
};

}  // namespace pegd

template <>
struct std::hash<pegd::AnalysisKey> {
    std::size_t operator()(const pegd::AnalysisKey& k) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.is_rule) << 32) | k.id);
    }
};

namespace pegd {

/// ν, WF and first-set analyses over a rule environment, memoized per rule
/// and per expression. Reading a rule resolves it through the environment,
/// which in a derivative session may be a derived cell.
///
/// For ill-formed grammars ν is still reported, but its value carries no
/// meaning; callers should consult `well_formed` first.
class GrammarAnalysis {
public:
    explicit GrammarAnalysis(RuleEnv& env) : env_(env) {}

    bool nullable(Expr e);
    bool well_formed(Expr e);
    SymbolSet first_set(Expr e);
    FirstsMap firsts_map(Expr e);

    /// Fixpoint tables from the most recent solve of each analysis, for
    /// inspection in tests and diagnostics.
    std::size_t last_nullable_passes() const { return last_nullable_passes_; }

    /// Overrides the order in which a fixpoint run seeds its rule keys
    /// (tests use this to check order independence). Empty means none.
    void set_seed_rules(std::vector<RuleId> rules) { seed_rules_ = std::move(rules); }

private:
    // Subexpression values within one equation evaluation; the DAGs that
    // derivatives build share heavily, so a plain tree walk is exponential.
    template <class V>
    using Local = std::unordered_map<Expr, V>;

    bool nullable_expr(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local);
    bool nullable_expr_node(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local);
    bool wf_expr(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local);
    bool wf_expr_node(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local);
    FirstsMap firsts_expr(Expr e, const std::function<FirstsMap(RuleId)>& rule, Local<FirstsMap>& local);
    FirstsMap firsts_expr_node(Expr e, const std::function<FirstsMap(RuleId)>& rule, Local<FirstsMap>& local);
    std::vector<AnalysisKey> seeds_for(Expr e) const;

    RuleEnv& env_;
    std::vector<RuleId> seed_rules_;
    std::unordered_map<RuleId, bool> rule_nullable_;
    std::unordered_map<RuleId, bool> rule_wf_;
    std::unordered_map<RuleId, FirstsMap> rule_firsts_;
    std::unordered_map<Expr, bool> expr_nullable_;
    std::unordered_map<Expr, bool> expr_wf_;
    std::unordered_map<Expr, FirstsMap> expr_firsts_;
    std::size_t last_nullable_passes_ = 0;
};

bool nullable(Expr e, RuleEnv& env);
SymbolSet first_set(Expr e, RuleEnv& env);

struct WellFormedness {
    std::vector<bool> rules;  // indexed by rule id
    bool start = false;
};

WellFormedness well_formed(Grammar& g);

}  // namespace pegd
