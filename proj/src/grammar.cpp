#include "pegd/grammar.hpp"

#include <algorithm>

#include "pegd/errors.hpp"

namespace pegd {

GrammarError::GrammarError(const std::string& message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

RuleId Grammar::add_rule(std::string name, Expr body) {
    RuleId id{static_cast<std::uint32_t>(rules_.size())};
    rules_.push_back({std::move(name), body});
    return id;
}

void Grammar::set_body(RuleId id, Expr body) { rules_.at(id.value).body = body; }

std::optional<RuleId> Grammar::find_rule(std::string_view name) const {
    for (std::size_t i = 0; i < rules_.size(); ++i)
        if (rules_[i].name == name) return RuleId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

void Grammar::set_alphabet(std::vector<Symbol> symbols) {
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    alphabet_ = std::move(symbols);
}

bool Grammar::has_symbol(Symbol s) const { return std::binary_search(alphabet_.begin(), alphabet_.end(), s); }

namespace {

std::vector<Expr> roots_of(const Grammar& g) {
    std::vector<Expr> roots{g.start()};
    for (const Rule& r : g.rules()) roots.push_back(r.body);
    return roots;
}

}  // namespace

std::vector<Symbol> Grammar::used_symbols() const {
    std::vector<Symbol> out;
    auto roots = roots_of(*this);
    for_each_subexpr(pool_, roots, [&](Expr e) {
        if (pool_.kind(e) == ExprKind::Term) out.push_back(pool_.symbol(e));
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Grammar::uses_wildcard() const {
    bool found = false;
    auto roots = roots_of(*this);
    for_each_subexpr(pool_, roots, [&](Expr e) { found = found || pool_.kind(e) == ExprKind::Wildcard; });
    return found;
}

void Grammar::validate() const {
    auto roots = roots_of(*this);
    for_each_subexpr(pool_, roots, [&](Expr e) {
        if (pool_.kind(e) == ExprKind::Nonterm && !has_rule(pool_.rule(e)))
            throw UnboundNonterminal("reference to undefined rule #" + std::to_string(pool_.rule(e).value));
    });
}

Expr Grammar::rule_body(RuleId id) {
    if (!has_rule(id)) throw UnboundNonterminal("undefined rule #" + std::to_string(id.value));
    return rules_[id.value].body;
}

std::string Grammar::rule_name(RuleId id) const {
    if (!has_rule(id)) throw UnboundNonterminal("undefined rule #" + std::to_string(id.value));
    return rules_[id.value].name;
}

}  // namespace pegd
