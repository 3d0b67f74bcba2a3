#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pegd/expr.hpp"

namespace pegd {

/// A rule environment: an expression pool plus a way to resolve rule ids.
/// Resolving may have side effects in environments that grow on demand,
/// hence the non-const `rule_body`.
class RuleEnv {
public:
    virtual ~RuleEnv() = default;

    virtual ExprPool& pool() = 0;
    virtual const ExprPool& pool() const = 0;
    virtual Expr rule_body(RuleId id) = 0;
    virtual std::string rule_name(RuleId id) const = 0;
    virtual std::size_t rule_count() const = 0;
    virtual std::span<const Symbol> alphabet() const = 0;

    bool has_rule(RuleId id) const { return id.value < rule_count(); }
};

struct Rule {
    std::string name;
    Expr body;
};

/// A PEG (V_N, V_T, R, e_S). Owns the pool its expressions live in, so
/// copying a grammar copies every handle's meaning along with it.
class Grammar final : public RuleEnv {
public:
    Grammar() = default;

    RuleId add_rule(std::string name, Expr body = ExprPool::kFail);
    void set_body(RuleId id, Expr body);
    std::optional<RuleId> find_rule(std::string_view name) const;
    const std::vector<Rule>& rules() const { return rules_; }

    Expr start() const { return start_; }
    void set_start(Expr e) { start_ = e; }

    /// Stored sorted and deduplicated.
    void set_alphabet(std::vector<Symbol> symbols);
    bool has_symbol(Symbol s) const;

    /// Terminals that occur in the start expression or any rule body, sorted.
    std::vector<Symbol> used_symbols() const;
    bool uses_wildcard() const;

    /// Throws UnboundNonterminal if a reference points outside the rule table.
    void validate() const;

    ExprPool& pool() override { return pool_; }
    const ExprPool& pool() const override { return pool_; }
    Expr rule_body(RuleId id) override;
    std::string rule_name(RuleId id) const override;
    std::size_t rule_count() const override { return rules_.size(); }
    std::span<const Symbol> alphabet() const override { return alphabet_; }

private:
    ExprPool pool_;
    std::vector<Rule> rules_;
    std::vector<Symbol> alphabet_;
    Expr start_ = ExprPool::kFail;
};

/// Visits every node reachable from `roots` without crossing rule references.
template <class Visit>
void for_each_subexpr(const ExprPool& pool, std::span<const Expr> roots, Visit&& visit) {
    std::unordered_set<Expr> seen;
    std::vector<Expr> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        Expr e = stack.back();
        stack.pop_back();
        if (!seen.insert(e).second) continue;
        visit(e);
        switch (pool.kind(e)) {
        case ExprKind::Seq:
        case ExprKind::Choice:
            stack.push_back(pool.left(e));
            stack.push_back(pool.right(e));
            break;
        case ExprKind::Star:
        case ExprKind::Not:
        case ExprKind::And:
            stack.push_back(pool.operand(e));
            break;
        default:
            break;
        }
    }
}

}  // namespace pegd
