#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pegd {

/// A terminal symbol. Grammar text uses one Unicode scalar per terminal.
using Symbol = char32_t;

/// Token strings are sequences of terminals.
using Tokens = std::u32string;

struct RuleId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(const RuleId&, const RuleId&) = default;
};

enum class ExprKind : std::uint8_t {
    Empty,
    Term,
    Nonterm,
    Seq,
    Choice,
    Star,
    Not,
    And,
    Wildcard,
    Fail,
};

/// Handle to an interned expression. Only meaningful together with the
/// ExprPool that produced it; equal handles denote structurally equal terms.
class Expr {
public:
    constexpr Expr() = default;
    constexpr explicit Expr(std::uint32_t id) : id_(id) {}

    constexpr std::uint32_t id() const { return id_; }

    friend constexpr auto operator<=>(const Expr&, const Expr&) = default;

private:
    std::uint32_t id_ = 0;
};

/// Raw node layout. For Term `lhs` is the symbol, for Nonterm it is the rule
/// id, for unary operators it is the operand id.
struct ExprNode {
    ExprKind kind = ExprKind::Fail;
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    friend constexpr bool operator==(const ExprNode&, const ExprNode&) = default;
};

/// Hash-consing store for expressions with simplifying smart constructors.
///
/// Every smart constructor applies the identity table at the root of the new
/// node until no left-hand side matches. Children are assumed to be outputs of
/// smart constructors already, so results are globally simplified without a
/// separate normalization pass. Nonterm nodes are opaque: no rewrite looks
/// through a rule reference.
///
/// The four constants below are interned first in every pool, so their
/// handles are valid across pools.
class ExprPool {
public:
    static constexpr Expr kFail{0};
    static constexpr Expr kEmpty{1};
    static constexpr Expr kWildcard{2};
    static constexpr Expr kAnyStar{3};  // _*

    ExprPool();

    Expr empty() const { return kEmpty; }
    Expr fail() const { return kFail; }
    Expr wildcard() const { return kWildcard; }
    Expr any_star() const { return kAnyStar; }

    Expr term(Symbol s);
    Expr nonterm(RuleId r);
    Expr seq(Expr lhs, Expr rhs);
    Expr choice(Expr lhs, Expr rhs);
    Expr star(Expr e);
    Expr not_pred(Expr e);
    Expr and_pred(Expr e);

    /// Interns a node without applying any identity. Used to build the
    /// left-hand sides of identities in tests and for structure-preserving
    /// copies.
    Expr make_raw(const ExprNode& node);

    const ExprNode& node(Expr e) const { return nodes_[e.id()]; }
    ExprKind kind(Expr e) const { return nodes_[e.id()].kind; }
    Expr left(Expr e) const { return Expr{nodes_[e.id()].lhs}; }
    Expr right(Expr e) const { return Expr{nodes_[e.id()].rhs}; }
    Expr operand(Expr e) const { return Expr{nodes_[e.id()].lhs}; }
    Symbol symbol(Expr e) const { return static_cast<Symbol>(nodes_[e.id()].lhs); }
    RuleId rule(Expr e) const { return RuleId{nodes_[e.id()].lhs}; }

    bool is(Expr e, ExprKind k) const { return kind(e) == k; }

    std::size_t size() const { return nodes_.size(); }

private:
    struct NodeHash {
        std::size_t operator()(const ExprNode& n) const noexcept;
    };

    Expr intern(const ExprNode& node);
    bool is_seq_with_any_star_tail(Expr e) const;

    std::vector<ExprNode> nodes_;
    std::unordered_map<ExprNode, std::uint32_t, NodeHash> index_;
};

class RuleEnv;

/// Canonical minimal-parenthesis rendering in grammar-text syntax.
std::string pretty(Expr e, const RuleEnv& env);

/// Terminal literal in grammar-text syntax, e.g. `'a'`, `'\n'`.
std::string quote_symbol(Symbol s);

/// Replaces rule references by their bodies up to `depth` levels, rebuilding
/// through smart constructors. Depth 0 is the identity.
Expr inline_rules(Expr e, RuleEnv& env, unsigned depth);

}  // namespace pegd

template <>
struct std::hash<pegd::Expr> {
    std::size_t operator()(pegd::Expr e) const noexcept { return std::hash<std::uint32_t>{}(e.id()); }
};

template <>
struct std::hash<pegd::RuleId> {
    std::size_t operator()(pegd::RuleId r) const noexcept { return std::hash<std::uint32_t>{}(r.value); }
};
