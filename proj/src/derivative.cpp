#include "pegd/derivative.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <unordered_set>

#include "pegd/errors.hpp"
#include "pegd/utf8.hpp"

namespace pegd {

std::string symbol_tag(Symbol a) {
    if ((a >= U'a' && a <= U'z') || (a >= U'A' && a <= U'Z') || (a >= U'0' && a <= U'9')) {
        std::string out;
        out += static_cast<char>(a);
        return out;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "x%X", static_cast<unsigned>(a));
    return buf;
}

std::size_t DeriveSession::MemoHash::operator()(const MemoKey& k) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(k.expr) << 32) ^ (static_cast<std::uint64_t>(k.symbol) << 1) ^
                      static_cast<std::uint64_t>(k.op);
    return std::hash<std::uint64_t>{}(h * 0x9E3779B97F4A7C15ull);
}

DeriveSession::DeriveSession(Grammar grammar, DeriveRules rules, DeriveLimits limits)
    : base_(std::move(grammar)), rules_(rules), limits_(limits) {
    base_.validate();
    analysis_ = std::make_unique<GrammarAnalysis>(*this);
}

void DeriveSession::check_symbol(Symbol a) const {
    if (!base_.has_symbol(a))
        throw AlphabetViolation("terminal " + quote_symbol(a) + " is not in the grammar's alphabet");
}

Expr DeriveSession::derive(Symbol a, Expr e) {
    check_symbol(a);
    return derive_impl(a, e);
}

Expr DeriveSession::delta(Symbol a, Expr e) {
    check_symbol(a);
    return delta_impl(a, e);
}

Expr DeriveSession::derive_string(std::u32string_view x, Expr e) {
    for (Symbol a : x) check_symbol(a);
    for (Symbol a : x) e = derive_impl(a, e);
    return e;
}

Expr DeriveSession::derive_impl(Symbol a, Expr e) {
    MemoKey key{Op::D, e.id(), a};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ExprPool& p = pool();
    Expr out = ExprPool::kFail;
    switch (p.kind(e)) {
    case ExprKind::Empty:
    case ExprKind::Fail:
    case ExprKind::Not:
    case ExprKind::And:
        out = ExprPool::kFail;
        break;
    case ExprKind::Term:
        out = p.symbol(e) == a ? ExprPool::kEmpty : ExprPool::kFail;
        break;
    case ExprKind::Wildcard:
        out = ExprPool::kEmpty;
        break;
    case ExprKind::Nonterm:
        out = through_rule(Op::D, e, a);
        break;
    case ExprKind::Star: {
        // D_a e* = D_a e e* / δ_a e D_a e*; without the second branch there
        // is no self-reference and no cell is needed.
        Expr inner = p.operand(e);
        out = delta_impl(a, inner) == ExprPool::kFail ? p.seq(derive_impl(a, inner), e) : star_cell(Op::D, e, a);
        break;
    }
    case ExprKind::Seq: {
        Expr e1 = p.left(e);
        Expr e2 = p.right(e);
        Expr head = p.seq(derive_impl(a, e1), e2);
        Expr gate = delta_impl(a, e1);
        out = gate == ExprPool::kFail ? head : p.choice(head, p.seq(gate, derive_impl(a, e2)));
        break;
    }
    case ExprKind::Choice: {
        Expr e1 = p.left(e);
        Expr e2 = p.right(e);
        Expr d1 = derive_impl(a, e1);
        if (rules_ == DeriveRules::Unguarded) {
            out = p.choice(d1, derive_impl(a, e2));
        } else {
            Expr gate = delta_impl(a, p.not_pred(e1));
            out = gate == ExprPool::kFail ? d1 : p.choice(d1, p.seq(gate, derive_impl(a, e2)));
        }
        break;
    }
    }
    memo_.emplace(key, out);
    return out;
}

Expr DeriveSession::delta_impl(Symbol a, Expr e) {
    MemoKey key{Op::Delta, e.id(), a};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ExprPool& p = pool();
    Expr out = ExprPool::kFail;
    switch (p.kind(e)) {
    case ExprKind::Empty:
        out = ExprPool::kEmpty;
        break;
    case ExprKind::Term:
    case ExprKind::Wildcard:
    case ExprKind::Fail:
        out = ExprPool::kFail;
        break;
    case ExprKind::Nonterm:
        out = through_rule(Op::Delta, e, a);
        break;
    case ExprKind::Star: {
        Expr inner = p.operand(e);
        if (delta_impl(a, inner) != ExprPool::kFail) {
            out = star_cell(Op::Delta, e, a);
        } else {
            out = rules_ == DeriveRules::Unguarded ? ExprPool::kFail : delta_impl(a, p.not_pred(inner));
        }
        break;
    }
    case ExprKind::Seq: {
        Expr first = delta_impl(a, p.left(e));
        out = first == ExprPool::kFail ? first : p.seq(first, delta_impl(a, p.right(e)));
        break;
    }
    case ExprKind::Choice: {
        Expr e1 = p.left(e);
        Expr gate = delta_impl(a, p.not_pred(e1));
        Expr rest = gate == ExprPool::kFail ? gate : p.seq(gate, delta_impl(a, p.right(e)));
        out = p.choice(delta_impl(a, e1), rest);
        break;
    }
    case ExprKind::Not:
        out = p.not_pred(derive_impl(a, p.seq(p.operand(e), ExprPool::kAnyStar)));
        break;
    case ExprKind::And:
        out = p.and_pred(derive_impl(a, p.seq(p.operand(e), ExprPool::kAnyStar)));
        break;
    }
    memo_.emplace(key, out);
    return out;
}

Expr DeriveSession::through_rule(Op op, Expr nonterm, Symbol a) {
    MemoKey key{op, nonterm.id(), a};
    // Reached again while its own body is being computed: refer to a cell.
    if (in_progress_.count(key)) return cell_for(op, nonterm, a);
    Expr body = rule_body(pool().rule(nonterm));
    in_progress_.insert(key);
    Expr out = op == Op::D ? derive_impl(a, body) : delta_impl(a, body);
    in_progress_.erase(key);
    if (auto it = cell_index_.find(key); it != cell_index_.end()) {
        define(it->second, out);
        return it->second;
    }
    return out;
}

Expr DeriveSession::cell_for(Op op, Expr source, Symbol a) {
    MemoKey key{op, source.id(), a};
    if (auto it = cell_index_.find(key); it != cell_index_.end()) return it->second;
    if (cells_.size() >= limits_.max_derived_rules)
        throw BudgetExhausted("derivative session exceeded " + std::to_string(limits_.max_derived_rules) +
                              " derived rules");
    std::string name = (op == Op::D ? "_D_" : "_N_") + symbol_tag(a) + "_" + std::to_string(cells_.size());
    cells_.push_back(Cell{op, source, a, std::nullopt, std::move(name)});
    Expr ref = pool().nonterm(RuleId{static_cast<std::uint32_t>(base_.rule_count() + cells_.size() - 1)});
    cell_index_.emplace(key, ref);
    return ref;
}

void DeriveSession::define(Expr cell, Expr body) {
    cells_[pool().rule(cell).value - base_.rule_count()].body = body;
}

// The star equations refer to themselves, so the cell exists before its body.
Expr DeriveSession::star_cell(Op op, Expr star, Symbol a) {
    ExprPool& p = pool();
    MemoKey key{op, star.id(), a};
    if (auto it = cell_index_.find(key); it != cell_index_.end()) return it->second;
    const Expr self = cell_for(op, star, a);
    const Expr inner = p.operand(star);
    Expr body;
    if (op == Op::D) {
        // D_a e* = D_a e e* / δ_a e D_a e*
        body = p.choice(p.seq(derive_impl(a, inner), star), p.seq(delta_impl(a, inner), self));
    } else {
        Expr loop = p.seq(delta_impl(a, inner), self);
        Expr exit = delta_impl(a, p.not_pred(inner));
        if (rules_ == DeriveRules::Unguarded) exit = p.seq(exit, self);
        body = p.choice(loop, exit);
    }
    define(self, body);
    return self;
}

Expr DeriveSession::rule_body(RuleId id) {
    if (id.value < base_.rule_count()) return base_.rule_body(id);
    std::uint32_t index = id.value - static_cast<std::uint32_t>(base_.rule_count());
    if (index >= cells_.size()) throw UnboundNonterminal("rule id " + std::to_string(id.value) + " is not bound");
    if (!cells_[index].body) throw Error("derived rule " + cells_[index].name + " read before it was defined");
    return *cells_[index].body;
}

std::string DeriveSession::rule_name(RuleId id) const {
    if (id.value < base_.rule_count()) return base_.rule_name(id);
    std::size_t index = id.value - base_.rule_count();
    if (index >= cells_.size()) throw UnboundNonterminal("rule id " + std::to_string(id.value) + " is not bound");
    return cells_[index].name;
}

bool DeriveSession::is_defined(RuleId id) const {
    if (id.value < base_.rule_count()) return true;
    std::size_t index = id.value - base_.rule_count();
    return index < cells_.size() && cells_[index].body.has_value();
}

Grammar DeriveSession::snapshot(Expr e) {
    const ExprPool& src = pool();
    std::unordered_map<std::uint32_t, RuleId> renumber;
    std::vector<RuleId> order;
    auto note_rules = [&](Expr root) {
        std::vector<Expr> found;
        Expr roots[] = {root};
        for_each_subexpr(src, roots, [&](Expr x) {
            if (src.kind(x) == ExprKind::Nonterm) found.push_back(x);
        });
        // within one body, new rules are numbered in rule-id order
        std::sort(found.begin(), found.end(), [&](Expr l, Expr r) { return src.rule(l) < src.rule(r); });
        for (Expr x : found) {
            RuleId r = src.rule(x);
            if (renumber.emplace(r.value, RuleId{static_cast<std::uint32_t>(order.size())}).second) {
                order.push_back(r);
            }
        }
    };
    if (src.kind(e) == ExprKind::Nonterm) {
        renumber.emplace(src.rule(e).value, RuleId{0});
        order.push_back(src.rule(e));
    }
    note_rules(e);
    std::vector<Expr> bodies;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Expr body = rule_body(order[i]);
        bodies.push_back(body);
        note_rules(body);
    }

    Grammar out;
    for (RuleId r : order) out.add_rule(rule_name(r));
    std::unordered_map<std::uint32_t, Expr> copied;
    std::function<Expr(Expr)> copy = [&](Expr x) -> Expr {
        if (auto it = copied.find(x.id()); it != copied.end()) return it->second;
        ExprPool& dst = out.pool();
        const ExprNode& n = src.node(x);
        Expr y;
        switch (n.kind) {
        case ExprKind::Term: y = dst.term(src.symbol(x)); break;
        case ExprKind::Nonterm: y = dst.nonterm(renumber.at(n.lhs)); break;
        case ExprKind::Seq:
        case ExprKind::Choice: {
            Expr l = copy(src.left(x));
            Expr r = copy(src.right(x));
            y = dst.make_raw(ExprNode{n.kind, l.id(), r.id()});
            break;
        }
        case ExprKind::Star:
        case ExprKind::Not:
        case ExprKind::And: {
            Expr o = copy(src.operand(x));
            y = dst.make_raw(ExprNode{n.kind, o.id(), 0});
            break;
        }
        default: y = dst.make_raw(n); break;
        }
        copied.emplace(x.id(), y);
        return y;
    };
    for (std::size_t i = 0; i < order.size(); ++i) out.set_body(RuleId{static_cast<std::uint32_t>(i)}, copy(bodies[i]));
    out.set_start(copy(e));
    out.set_alphabet(std::vector<Symbol>(base_.alphabet().begin(), base_.alphabet().end()));
    return out;
}

}  // namespace pegd
