#include "pegd/expr.hpp"

#include <cstdio>
#include <map>

#include "pegd/grammar.hpp"
#include "pegd/utf8.hpp"

namespace pegd {

std::size_t ExprPool::NodeHash::operator()(const ExprNode& n) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(n.kind);
    h = h * 0x9E3779B97F4A7C15ULL ^ n.lhs;
    h = h * 0x9E3779B97F4A7C15ULL ^ n.rhs;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
}

ExprPool::ExprPool() {
    intern({ExprKind::Fail, 0, 0});
    intern({ExprKind::Empty, 0, 0});
    intern({ExprKind::Wildcard, 0, 0});
    intern({ExprKind::Star, kWildcard.id(), 0});
}

Expr ExprPool::intern(const ExprNode& node) {
    auto [it, inserted] = index_.try_emplace(node, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back(node);
    return Expr{it->second};
}

Expr ExprPool::make_raw(const ExprNode& node) { return intern(node); }

bool ExprPool::is_seq_with_any_star_tail(Expr e) const {
    return kind(e) == ExprKind::Seq && right(e) == kAnyStar;
}

Expr ExprPool::term(Symbol s) { return intern({ExprKind::Term, static_cast<std::uint32_t>(s), 0}); }

Expr ExprPool::nonterm(RuleId r) { return intern({ExprKind::Nonterm, r.value, 0}); }

Expr ExprPool::star(Expr e) { return intern({ExprKind::Star, e.id(), 0}); }

Expr ExprPool::and_pred(Expr e) {
    if (e == kEmpty || e == kAnyStar) return kEmpty;
    if (e == kFail) return kFail;
    if (is_seq_with_any_star_tail(e)) return and_pred(left(e));
    switch (kind(e)) {
    case ExprKind::And:  // &&e -> &e
    case ExprKind::Not:  // &!e -> !e
        return e;
    default:
        return intern({ExprKind::And, e.id(), 0});
    }
}

Expr ExprPool::not_pred(Expr e) {
    if (e == kEmpty || e == kAnyStar) return kFail;
    if (e == kFail) return kEmpty;
    if (is_seq_with_any_star_tail(e)) return not_pred(left(e));
    switch (kind(e)) {
    case ExprKind::And:  // !&e -> !e
        return not_pred(operand(e));
    case ExprKind::Not:  // !!e -> &e
        return and_pred(operand(e));
    default:
        return intern({ExprKind::Not, e.id(), 0});
    }
}

Expr ExprPool::seq(Expr lhs, Expr rhs) {
    if (lhs == kEmpty) return rhs;
    if (rhs == kEmpty) return lhs;
    if (lhs == kFail || rhs == kFail) return kFail;
    if (lhs == kAnyStar && rhs == kAnyStar) return kAnyStar;
    const ExprKind lk = kind(lhs);
    if (lk == ExprKind::Not || lk == ExprKind::And) {
        // !e1 !e1 e2 -> !e1 e2, &e1 &e1 e2 -> &e1 e2, and their e2 = ε instances.
        if (rhs == lhs) return lhs;
        if (kind(rhs) == ExprKind::Seq && left(rhs) == lhs) return seq(lhs, right(rhs));
    }
    return intern({ExprKind::Seq, lhs.id(), rhs.id()});
}

Expr ExprPool::choice(Expr lhs, Expr rhs) {
    if (lhs == kFail) return rhs;
    if (rhs == kFail) return lhs;
    if (lhs == rhs) return lhs;
    const ExprKind rk = kind(rhs);
    // e1 / !e1 -> e1 / ε
    if (rk == ExprKind::Not && operand(rhs) == lhs) return choice(lhs, kEmpty);
    // e1 / !e1 e2 -> e1 / e2
    if (rk == ExprKind::Seq) {
        Expr head = left(rhs);
        if (kind(head) == ExprKind::Not && operand(head) == lhs) return choice(lhs, right(rhs));
    }
    if (kind(lhs) == ExprKind::Seq && rk == ExprKind::Seq) {
        // e1 e2 / e1 e3 -> e1 (e2 / e3)
        if (left(lhs) == left(rhs)) return seq(left(lhs), choice(right(lhs), right(rhs)));
        // e1 _* / e2 _* -> (e1 / e2) _*
        if (right(lhs) == kAnyStar && right(rhs) == kAnyStar) return seq(choice(left(lhs), left(rhs)), kAnyStar);
    }
    return intern({ExprKind::Choice, lhs.id(), rhs.id()});
}

std::string quote_symbol(Symbol s) {
    std::string out = "'";
    switch (s) {
    case U'\'': out += "\\'"; break;
    case U'\\': out += "\\\\"; break;
    case U'\n': out += "\\n"; break;
    case U'\t': out += "\\t"; break;
    default:
        if (s < 0x20 || s == 0x7F) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned>(s));
            out += buf;
        } else {
            append_utf8(out, s);
        }
    }
    out += '\'';
    return out;
}

namespace {

// Binding strength, loosest first.
enum Prec : int { kChoicePrec = 0, kSeqPrec = 1, kPrefixPrec = 2, kPostfixPrec = 3, kAtomPrec = 4 };

class Printer {
public:
    Printer(const ExprPool& pool, const RuleEnv& env) : pool_(pool), env_(env) {}

    void render(Expr e, int context) {
        const int own = precedence(e);
        const bool paren = own < context;
        if (paren) out_ += '(';
        switch (pool_.kind(e)) {
        case ExprKind::Empty: out_ += "''"; break;
        case ExprKind::Fail: out_ += "%fail"; break;
        case ExprKind::Wildcard: out_ += '.'; break;
        case ExprKind::Term: out_ += quote_symbol(pool_.symbol(e)); break;
        case ExprKind::Nonterm: out_ += env_.rule_name(pool_.rule(e)); break;
        case ExprKind::Seq:
            render(pool_.left(e), kPrefixPrec);
            out_ += ' ';
            render(pool_.right(e), kSeqPrec);
            break;
        case ExprKind::Choice:
            render(pool_.left(e), kSeqPrec);
            out_ += " / ";
            render(pool_.right(e), kChoicePrec);
            break;
        case ExprKind::Star:
            render(pool_.operand(e), kPostfixPrec);
            out_ += '*';
            break;
        case ExprKind::Not:
        case ExprKind::And:
            out_ += pool_.kind(e) == ExprKind::Not ? '!' : '&';
            render(pool_.operand(e), kPrefixPrec);
            break;
        }
        if (paren) out_ += ')';
    }

    std::string take() { return std::move(out_); }

private:
    int precedence(Expr e) const {
        switch (pool_.kind(e)) {
        case ExprKind::Choice: return kChoicePrec;
        case ExprKind::Seq: return kSeqPrec;
        case ExprKind::Not:
        case ExprKind::And: return kPrefixPrec;
        case ExprKind::Star: return kPostfixPrec;
        default: return kAtomPrec;
        }
    }

    const ExprPool& pool_;
    const RuleEnv& env_;
    std::string out_;
};

class Inliner {
public:
    explicit Inliner(RuleEnv& env) : env_(env) {}

    Expr run(Expr e, unsigned depth) {
        if (depth == 0) return e;
        auto key = std::pair{e.id(), depth};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ExprPool& pool = env_.pool();
        Expr out = e;
        switch (pool.kind(e)) {
        case ExprKind::Nonterm: out = run(env_.rule_body(pool.rule(e)), depth - 1); break;
        case ExprKind::Seq: {
            Expr l = run(pool.left(e), depth);
            Expr r = run(pool.right(e), depth);
            out = pool.seq(l, r);
            break;
        }
        case ExprKind::Choice: {
            Expr l = run(pool.left(e), depth);
            Expr r = run(pool.right(e), depth);
            out = pool.choice(l, r);
            break;
        }
        case ExprKind::Star: out = pool.star(run(pool.operand(e), depth)); break;
        case ExprKind::Not: out = pool.not_pred(run(pool.operand(e), depth)); break;
        case ExprKind::And: out = pool.and_pred(run(pool.operand(e), depth)); break;
        default: break;
        }
        memo_.emplace(key, out);
        return out;
    }

private:
    RuleEnv& env_;
    std::map<std::pair<std::uint32_t, unsigned>, Expr> memo_;
};

}  // namespace

std::string pretty(Expr e, const RuleEnv& env) {
    Printer printer(env.pool(), env);
    printer.render(e, kChoicePrec);
    return printer.take();
}

Expr inline_rules(Expr e, RuleEnv& env, unsigned depth) { return Inliner(env).run(e, depth); }

}  // namespace pegd
