#include "doctest.h"

#include "pegd/errors.hpp"
#include "pegd/grammar_text.hpp"
#include "pegd/utf8.hpp"

using namespace pegd;

TEST_CASE("anbn desugars") {
    Grammar g = parse_grammar("S <- 'a' S 'b' / ''");
    ExprPool& p = g.pool();
    REQUIRE(g.rule_count() == 1);
    Expr s = p.nonterm(RuleId{0});
    Expr want = p.choice(p.seq(p.term('a'), p.seq(s, p.term('b'))), p.empty());
    CHECK(g.rule_body(RuleId{0}) == want);
    CHECK(g.start() == s);
    CHECK(std::vector<Symbol>(g.alphabet().begin(), g.alphabet().end()) == std::vector<Symbol>{'a', 'b'});
}

TEST_CASE("lookahead and left-recursive grammars parse") {
    Grammar g = parse_grammar("P <- &('a' 'b' 'c') . . .");
    CHECK(serialize_grammar(g) == "P <- &('a' 'b' 'c') . . .\n");
    // ill-formed grammars are accepted here
    CHECK_NOTHROW(parse_grammar("X <- X 'x' / ''"));
}

TEST_CASE("sugar") {
    Grammar g = parse_grammar("S <- 'ab'+ 'c'?");
    // a multi-character literal is one sequence node
    CHECK(pretty(g.rule_body(RuleId{0}), g) == "(('a' 'b') ('a' 'b')*) ('c' / '')");
}

TEST_CASE("directives") {
    Grammar g = parse_grammar("# comment\n%alphabet 'a' 'b' 'c'\n%start T\nS <- 'a'\nT <- S 'b'\n");
    CHECK(g.start() == g.pool().nonterm(RuleId{1}));
    CHECK(g.alphabet().size() == 3);
    CHECK(serialize_grammar(g) == "%alphabet 'a' 'b' 'c'\n%start T\nS <- 'a'\nT <- S 'b'\n");
}

TEST_CASE("round trip") {
    const char* texts[] = {
        "S <- ''\n",
        "S <- 'a' S 'b' / ''\n",
        "D <- &(A !'b') 'a'* B !.\nA <- 'a' A 'b' / ''\nB <- 'b' B 'c' / ''\n",
        "%alphabet 'a' 'b' 'c'\nK <- 'a' 'b' !A\nA <- 'a' / 'b'\n",
        "S <- ('\\'' / '\\\\' / '\\n' / '\\x01')*\n",
        "S <- !(&'a' 'b') .\n",
    };
    for (const char* t : texts) {
        Grammar g = parse_grammar(t);
        std::string once = serialize_grammar(g);
        CHECK(once == t);
        CHECK(serialize_grammar(parse_grammar(once)) == once);
    }
}

TEST_CASE("utf-8 terminals") {
    Grammar g = parse_grammar("S <- 'é' 'λ'");
    CHECK(g.has_symbol(U'é'));
    CHECK(g.has_symbol(U'λ'));
    CHECK(decode_utf8("éλ") == U"éλ");
    CHECK(encode_utf8(U"éλ") == "éλ");
    CHECK_THROWS_AS(decode_utf8("\xff"), Error);
    CHECK(escape_tokens(U"a\nb\\") == "a\\nb\\\\");
}

TEST_CASE("errors carry positions") {
    try {
        parse_grammar("S <- 'a'\nT <- (S");
        FAIL("expected GrammarError");
    } catch (const GrammarError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_grammar("S <- T"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("S <- 'a"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("S <- 'a'\nS <- 'b'"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("%alphabet 'a'\nS <- 'b'"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("%start T\nS <- 'a'"), GrammarError);
    CHECK_THROWS_AS(parse_grammar(""), GrammarError);
    CHECK_THROWS_AS(parse_grammar("S <- .\n%alphabet"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("%bogus\nS <- 'a'"), GrammarError);
}

TEST_CASE("identifiers") {
    CHECK(is_identifier("S"));
    CHECK(is_identifier("_D_a_0"));
    CHECK_FALSE(is_identifier("1x"));
    CHECK_FALSE(is_identifier(""));
}
