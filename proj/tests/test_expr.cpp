#include "doctest.h"

#include "pegd/grammar.hpp"
#include "pegd/grammar_text.hpp"

using namespace pegd;

namespace {

Expr raw(ExprPool& p, ExprKind k, Expr l = ExprPool::kFail, Expr r = ExprPool::kFail) {
    return p.make_raw({k, l.id(), r.id()});
}

}  // namespace

TEST_CASE("constants are shared across pools") {
    ExprPool a, b;
    CHECK(a.empty() == b.empty());
    CHECK(a.kind(ExprPool::kAnyStar) == ExprKind::Star);
    CHECK(a.operand(ExprPool::kAnyStar) == ExprPool::kWildcard);
    CHECK(a.star(a.wildcard()) == ExprPool::kAnyStar);
}

TEST_CASE("interning gives equal handles for equal terms") {
    ExprPool p;
    Expr x = p.seq(p.term('a'), p.star(p.term('b')));
    Expr y = p.seq(p.term('a'), p.star(p.term('b')));
    CHECK(x == y);
    CHECK(x != p.seq(p.term('a'), p.star(p.term('c'))));
}

TEST_CASE("sequence identities") {
    ExprPool p;
    Expr a = p.term('a');
    CHECK(p.seq(p.empty(), a) == a);
    CHECK(p.seq(a, p.empty()) == a);
    CHECK(p.seq(p.fail(), a) == p.fail());
    CHECK(p.seq(a, p.fail()) == p.fail());
    CHECK(p.seq(p.any_star(), p.any_star()) == p.any_star());
    Expr na = p.not_pred(a);
    Expr b = p.term('b');
    CHECK(p.seq(na, p.seq(na, b)) == p.seq(na, b));
    Expr aa = p.and_pred(a);
    CHECK(p.seq(aa, p.seq(aa, b)) == p.seq(aa, b));
    CHECK(p.seq(na, na) == na);
}

TEST_CASE("choice identities") {
    ExprPool p;
    Expr a = p.term('a'), b = p.term('b'), c = p.term('c');
    CHECK(p.choice(p.fail(), a) == a);
    CHECK(p.choice(a, p.fail()) == a);
    CHECK(p.choice(a, a) == a);
    CHECK(p.choice(a, p.seq(p.not_pred(a), b)) == p.choice(a, b));
    CHECK(p.choice(a, p.not_pred(a)) == p.choice(a, p.empty()));
    CHECK(p.choice(p.seq(a, b), p.seq(a, c)) == p.seq(a, p.choice(b, c)));
    CHECK(p.choice(p.seq(a, p.any_star()), p.seq(b, p.any_star())) == p.seq(p.choice(a, b), p.any_star()));
}

TEST_CASE("lookahead identities") {
    ExprPool p;
    Expr a = p.term('a');
    CHECK(p.and_pred(p.empty()) == p.empty());
    CHECK(p.and_pred(p.any_star()) == p.empty());
    CHECK(p.and_pred(p.fail()) == p.fail());
    CHECK(p.and_pred(p.seq(a, p.any_star())) == p.and_pred(a));
    CHECK(p.and_pred(p.and_pred(a)) == p.and_pred(a));
    CHECK(p.and_pred(p.not_pred(a)) == p.not_pred(a));
    CHECK(p.not_pred(p.empty()) == p.fail());
    CHECK(p.not_pred(p.any_star()) == p.fail());
    CHECK(p.not_pred(p.fail()) == p.empty());
    CHECK(p.not_pred(p.seq(a, p.any_star())) == p.not_pred(a));
    CHECK(p.not_pred(p.and_pred(a)) == p.not_pred(a));
    CHECK(p.not_pred(p.not_pred(a)) == p.and_pred(a));
}

TEST_CASE("make_raw keeps redexes") {
    ExprPool p;
    Expr a = p.term('a');
    Expr lhs = raw(p, ExprKind::Seq, p.empty(), a);
    CHECK(p.kind(lhs) == ExprKind::Seq);
    CHECK(lhs != a);
    Expr nn = raw(p, ExprKind::Not, raw(p, ExprKind::Not, a));
    CHECK(p.kind(p.operand(nn)) == ExprKind::Not);
}

TEST_CASE("rule references are opaque to identities") {
    Grammar g = parse_grammar("S <- A / !A 'b'\nA <- 'a'");
    ExprPool& p = g.pool();
    Expr body = g.rule_body(RuleId{0});
    // A / !A 'b' rewrites to A / 'b' because both occurrences are the same handle.
    CHECK(body == p.choice(p.nonterm(RuleId{1}), p.term('b')));
    // but 'a' / !A 'b' does not look through A
    Expr mixed = p.choice(p.term('a'), p.seq(p.not_pred(p.nonterm(RuleId{1})), p.term('b')));
    CHECK(p.kind(p.right(mixed)) == ExprKind::Seq);
}

TEST_CASE("pretty printing") {
    Grammar g = parse_grammar("S <- 'a'");
    ExprPool& p = g.pool();
    Expr bc = p.seq(p.term('b'), p.term('c'));
    Expr e = p.seq(p.and_pred(bc), p.seq(p.wildcard(), p.wildcard()));
    CHECK(pretty(e, g) == "&('b' 'c') . .");
    CHECK(pretty(p.empty(), g) == "''");
    CHECK(pretty(p.choice(p.term('a'), p.star(p.term('b'))), g) == "'a' / 'b'*");
    CHECK(pretty(p.fail(), g) == "%fail");
    CHECK(pretty(p.seq(p.choice(p.term('a'), p.term('b')), p.term('c')), g) == "('a' / 'b') 'c'");
    CHECK(pretty(p.star(p.seq(p.term('a'), p.term('b'))), g) == "('a' 'b')*");
    CHECK(pretty(p.not_pred(p.star(p.term('a'))), g) == "!'a'*");
    CHECK(pretty(p.seq(p.seq(p.term('a'), p.term('b')), p.term('c')), g) == "('a' 'b') 'c'");
    CHECK(quote_symbol('\'') == "'\\''");
    CHECK(quote_symbol('\n') == "'\\n'");
    CHECK(quote_symbol(0x01) == "'\\x01'");
}

TEST_CASE("inlining") {
    Grammar g = parse_grammar("S <- A A\nA <- 'a'");
    ExprPool& p = g.pool();
    Expr s = p.nonterm(RuleId{0});
    CHECK(inline_rules(s, g, 0) == s);
    CHECK(inline_rules(p.nonterm(RuleId{1}), g, 1) == p.term('a'));
    CHECK(pretty(inline_rules(s, g, 1), g) == "A A");
    CHECK(pretty(inline_rules(s, g, 2), g) == "'a' 'a'");
}
