#include "pegd/grammar_text.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "pegd/errors.hpp"
#include "pegd/utf8.hpp"

namespace pegd {

namespace {

enum class Tok {
    Ident,
    Arrow,
    Literal,
    Dot,
    Slash,
    Star,
    Plus,
    Question,
    Bang,
    Amp,
    LParen,
    RParen,
    Alphabet,
    Start,
    FailKw,
    End,
};

struct Token {
    Tok kind;
    std::string text;   // identifier name
    Tokens literal;     // decoded literal symbols
    std::size_t line;
    std::size_t column;
};

bool ident_start(Symbol c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'_'; }
bool ident_char(Symbol c) { return ident_start(c) || (c >= U'0' && c <= U'9'); }

class Lexer {
public:
    explicit Lexer(std::string_view text) : src_(decode(text)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t{Tok::End, {}, {}, line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back(std::move(t));
                return out;
            }
            Symbol c = src_[pos_];
            if (ident_start(c)) {
                while (pos_ < src_.size() && ident_char(src_[pos_])) append_utf8(t.text, advance());
                t.kind = Tok::Ident;
            } else if (c == U'\'') {
                advance();
                t.kind = Tok::Literal;
                t.literal = literal_body(t);
            } else if (c == U'%') {
                advance();
                std::string word;
                while (pos_ < src_.size() && ident_char(src_[pos_])) append_utf8(word, advance());
                if (word == "alphabet") t.kind = Tok::Alphabet;
                else if (word == "start") t.kind = Tok::Start;
                else if (word == "fail") t.kind = Tok::FailKw;
                else throw GrammarError("unknown directive '%" + word + "'", t.line, t.column);
            } else if (c == U'<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == U'-') {
                advance();
                advance();
                t.kind = Tok::Arrow;
            } else if (c == U'←') {
                advance();
                t.kind = Tok::Arrow;
            } else {
                advance();
                switch (c) {
                case U'.': t.kind = Tok::Dot; break;
                case U'/': t.kind = Tok::Slash; break;
                case U'*': t.kind = Tok::Star; break;
                case U'+': t.kind = Tok::Plus; break;
                case U'?': t.kind = Tok::Question; break;
                case U'!': t.kind = Tok::Bang; break;
                case U'&': t.kind = Tok::Amp; break;
                case U'(': t.kind = Tok::LParen; break;
                case U')': t.kind = Tok::RParen; break;
                default: {
                    std::string shown;
                    append_utf8(shown, c);
                    throw GrammarError("unexpected character '" + shown + "'", t.line, t.column);
                }
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    static Tokens decode(std::string_view text) {
        try {
            return decode_utf8(text);
        } catch (const GrammarError&) {
            throw;
        } catch (const Error& e) {
            throw GrammarError(e.what());
        }
    }

    Symbol advance() {
        Symbol c = src_[pos_++];
        if (c == U'\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            Symbol c = src_[pos_];
            if (c == U' ' || c == U'\t' || c == U'\r' || c == U'\n') {
                advance();
            } else if (c == U'#') {
                while (pos_ < src_.size() && src_[pos_] != U'\n') advance();
            } else {
                break;
            }
        }
    }

    int hex_digit(Symbol c) const {
        if (c >= U'0' && c <= U'9') return static_cast<int>(c - U'0');
        if (c >= U'a' && c <= U'f') return static_cast<int>(c - U'a' + 10);
        if (c >= U'A' && c <= U'F') return static_cast<int>(c - U'A' + 10);
        return -1;
    }

    Tokens literal_body(const Token& open) {
        Tokens body;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == U'\n')
                throw GrammarError("unterminated literal", open.line, open.column);
            std::size_t line = line_, col = col_;
            Symbol c = advance();
            if (c == U'\'') return body;
            if (c != U'\\') {
                body.push_back(c);
                continue;
            }
            if (pos_ >= src_.size()) throw GrammarError("unterminated escape", line, col);
            Symbol e = advance();
            switch (e) {
            case U'\'': body.push_back(U'\''); break;
            case U'\\': body.push_back(U'\\'); break;
            case U'n': body.push_back(U'\n'); break;
            case U't': body.push_back(U'\t'); break;
            case U'x': {
                int hi = pos_ < src_.size() ? hex_digit(src_[pos_]) : -1;
                int lo = pos_ + 1 < src_.size() ? hex_digit(src_[pos_ + 1]) : -1;
                if (hi < 0 || lo < 0) throw GrammarError("\\x escape needs two hex digits", line, col);
                advance();
                advance();
                body.push_back(static_cast<Symbol>(hi * 16 + lo));
                break;
            }
            default: throw GrammarError("unknown escape sequence", line, col);
            }
        }
    }

    Tokens src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Grammar run() {
        declare_rules();
        std::optional<std::vector<Symbol>> alphabet;
        std::optional<Token> start_name;
        std::size_t defined = 0;
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind == Tok::Alphabet) {
                if (alphabet) throw error_at(t, "duplicate %alphabet directive");
                next();
                alphabet = parse_alphabet(t);
            } else if (t.kind == Tok::Start) {
                if (start_name) throw error_at(t, "duplicate %start directive");
                next();
                if (peek().kind != Tok::Ident) throw error_at(peek(), "expected rule name after %start");
                start_name = next();
            } else if (starts_rule(pos_)) {
                RuleId id = ids_.at(next().text);
                next();  // arrow
                g_.set_body(id, parse_choice());
                ++defined;
            } else {
                throw error_at(t, "expected rule definition or directive");
            }
        }
        if (defined == 0) throw GrammarError("grammar defines no rules");

        if (start_name) {
            auto it = ids_.find(start_name->text);
            if (it == ids_.end()) throw error_at(*start_name, "%start names undefined rule '" + start_name->text + "'");
            g_.set_start(g_.pool().nonterm(it->second));
        } else {
            g_.set_start(g_.pool().nonterm(RuleId{0}));
        }

        std::vector<Symbol> used = g_.used_symbols();
        if (alphabet) {
            for (Symbol s : used) {
                if (!std::binary_search(alphabet->begin(), alphabet->end(), s))
                    throw GrammarError("terminal " + quote_symbol(s) + " is not in %alphabet");
            }
            g_.set_alphabet(std::move(*alphabet));
        } else {
            g_.set_alphabet(std::move(used));
        }
        if (g_.alphabet().empty() && g_.uses_wildcard())
            throw GrammarError("wildcard used but the alphabet is empty (add %alphabet)");
        return std::move(g_);
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_++]; }

    static GrammarError error_at(const Token& t, const std::string& msg) {
        return GrammarError(msg, t.line, t.column);
    }

    bool starts_rule(std::size_t at) const {
        return at + 1 < toks_.size() && toks_[at].kind == Tok::Ident && toks_[at + 1].kind == Tok::Arrow;
    }

    void declare_rules() {
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            if (!starts_rule(i)) continue;
            const Token& t = toks_[i];
            if (ids_.count(t.text)) throw error_at(t, "duplicate rule '" + t.text + "'");
            ids_.emplace(t.text, g_.add_rule(t.text));
        }
    }

    std::vector<Symbol> parse_alphabet(const Token& directive) {
        std::vector<Symbol> symbols;
        while (peek().kind == Tok::Literal) {
            const Token& lit = next();
            for (Symbol s : lit.literal) {
                if (std::find(symbols.begin(), symbols.end(), s) != symbols.end())
                    throw error_at(lit, "duplicate symbol " + quote_symbol(s) + " in %alphabet");
                symbols.push_back(s);
            }
        }
        if (symbols.empty()) throw error_at(directive, "%alphabet lists no symbols");
        std::sort(symbols.begin(), symbols.end());
        return symbols;
    }

    bool starts_primary() const {
        switch (peek().kind) {
        case Tok::Ident: return !starts_rule(pos_);
        case Tok::Literal:
        case Tok::Dot:
        case Tok::LParen:
        case Tok::Bang:
        case Tok::Amp:
        case Tok::FailKw: return true;
        default: return false;
        }
    }

    Expr parse_choice() {
        Expr lhs = parse_sequence();
        if (peek().kind != Tok::Slash) return lhs;
        next();
        Expr rhs = parse_choice();
        return g_.pool().choice(lhs, rhs);
    }

    Expr parse_sequence() {
        if (!starts_primary()) throw error_at(peek(), "expected expression");
        std::vector<Expr> items;
        while (starts_primary()) items.push_back(parse_prefix());
        Expr acc = items.back();
        for (std::size_t i = items.size() - 1; i-- > 0;) acc = g_.pool().seq(items[i], acc);
        return acc;
    }

    Expr parse_prefix() {
        if (peek().kind == Tok::Bang) {
            next();
            return g_.pool().not_pred(parse_prefix());
        }
        if (peek().kind == Tok::Amp) {
            next();
            return g_.pool().and_pred(parse_prefix());
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        ExprPool& pool = g_.pool();
        Expr e = parse_primary();
        for (;;) {
            switch (peek().kind) {
            case Tok::Star: next(); e = pool.star(e); continue;
            case Tok::Plus: next(); e = pool.seq(e, pool.star(e)); continue;
            case Tok::Question: next(); e = pool.choice(e, pool.empty()); continue;
            default: return e;
            }
        }
    }

    Expr parse_primary() {
        ExprPool& pool = g_.pool();
        const Token& t = next();
        switch (t.kind) {
        case Tok::Ident: {
            auto it = ids_.find(t.text);
            if (it == ids_.end()) throw error_at(t, "undefined nonterminal '" + t.text + "'");
            return pool.nonterm(it->second);
        }
        case Tok::Literal: {
            Expr acc = pool.empty();
            for (auto it = t.literal.rbegin(); it != t.literal.rend(); ++it) acc = pool.seq(pool.term(*it), acc);
            return acc;
        }
        case Tok::Dot: return pool.wildcard();
        case Tok::FailKw: return pool.fail();
        case Tok::LParen: {
            Expr inner = parse_choice();
            if (peek().kind != Tok::RParen) throw error_at(peek(), "expected ')'");
            next();
            return inner;
        }
        default: throw error_at(t, "expected expression");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Grammar g_;
    std::unordered_map<std::string, RuleId> ids_;
};

}  // namespace

Grammar parse_grammar(std::string_view text) { return Parser(Lexer(text).run()).run(); }

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto is_start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto is_rest = [&](char c) { return is_start(c) || (c >= '0' && c <= '9'); };
    if (!is_start(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), is_rest);
}

std::string serialize_grammar(const Grammar& g) {
    std::string out;
    std::vector<Symbol> used = g.used_symbols();
    auto alphabet = g.alphabet();
    if (!std::equal(alphabet.begin(), alphabet.end(), used.begin(), used.end())) {
        out += "%alphabet";
        for (Symbol s : alphabet) out += " " + quote_symbol(s);
        out += '\n';
    }
    const ExprPool& pool = g.pool();
    Expr start = g.start();
    if (pool.kind(start) != ExprKind::Nonterm) {
        std::string name = "_start";
        while (g.find_rule(name)) name += "_";
        out += name + " <- " + pretty(start, g) + '\n';
    } else if (pool.rule(start).value != 0) {
        out += "%start " + g.rule_name(pool.rule(start)) + '\n';
    }
    for (const Rule& r : g.rules()) out += r.name + " <- " + pretty(r.body, g) + '\n';
    return out;
}

}  // namespace pegd
