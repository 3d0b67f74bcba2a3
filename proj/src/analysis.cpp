#include "pegd/analysis.hpp"

#include <algorithm>
#include <iterator>

namespace pegd {

SymbolSet::SymbolSet(std::span<const Symbol> symbols) : items_(symbols.begin(), symbols.end()) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool SymbolSet::contains(Symbol s) const { return std::binary_search(items_.begin(), items_.end(), s); }

void SymbolSet::insert(Symbol s) {
    auto it = std::lower_bound(items_.begin(), items_.end(), s);
    if (it == items_.end() || *it != s) items_.insert(it, s);
}

SymbolSet SymbolSet::unite(const SymbolSet& other) const {
    SymbolSet out;
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out.items_));
    return out;
}

SymbolSet SymbolSet::intersect(const SymbolSet& other) const {
    SymbolSet out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out.items_));
    return out;
}

bool SymbolSet::is_subset_of(const SymbolSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

std::string format_symbol_set(const SymbolSet& s) {
    std::string out = "{";
    bool first = true;
    for (Symbol c : s) {
        if (!first) out += ", ";
        first = false;
        out += quote_symbol(c);
    }
    return out + "}";
}

std::vector<AnalysisKey> GrammarAnalysis::seeds_for(Expr e) const {
    std::vector<AnalysisKey> seeds;
    for (RuleId r : seed_rules_) seeds.push_back(AnalysisKey::of_rule(r));
    seeds.push_back(AnalysisKey::of_expr(e));
    return seeds;
}

// ν, evaluated left to right with short-circuiting so that on a well-formed
// grammar no rule is demanded while it is already being evaluated.
bool GrammarAnalysis::nullable_expr_node(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local) {
    const ExprPool& pool = env_.pool();
    switch (pool.kind(e)) {
    case ExprKind::Empty:
    case ExprKind::Star: return true;
    case ExprKind::Term:
    case ExprKind::Wildcard:
    case ExprKind::Fail: return false;
    case ExprKind::Nonterm: return rule(pool.rule(e));
    case ExprKind::Seq: return nullable_expr(pool.left(e), rule, local) && nullable_expr(pool.right(e), rule, local);
    case ExprKind::Choice: return nullable_expr(pool.left(e), rule, local) || nullable_expr(pool.right(e), rule, local);
    case ExprKind::Not: return !nullable_expr(pool.operand(e), rule, local);
    case ExprKind::And: return nullable_expr(pool.operand(e), rule, local);
    }
    return false;
}

bool GrammarAnalysis::nullable_expr(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local) {
    if (auto it = expr_nullable_.find(e); it != expr_nullable_.end()) return it->second;
    if (auto it = local.find(e); it != local.end()) return it->second;
    bool v = nullable_expr_node(e, rule, local);
    local.emplace(e, v);
    return v;
}


bool GrammarAnalysis::nullable(Expr e) {
    if (auto it = expr_nullable_.find(e); it != expr_nullable_.end()) return it->second;
    const ExprPool& pool = env_.pool();
    if (pool.kind(e) == ExprKind::Nonterm) {
        if (auto it = rule_nullable_.find(pool.rule(e)); it != rule_nullable_.end()) return it->second;
    }
    auto equation = [this](const AnalysisKey& key, const FixReader<AnalysisKey, bool>& reader) {
        auto rule = [&](RuleId r) {
            if (auto it = rule_nullable_.find(r); it != rule_nullable_.end()) return it->second;
            return reader.read(AnalysisKey::of_rule(r));
        };
        Expr target = key.is_rule ? env_.rule_body(RuleId{key.id}) : Expr{key.id};
        Local<bool> local;
        return nullable_expr(target, rule, local);
    };
    auto table = fix(seeds_for(e), equation, BoolLattice{});
    for (const AnalysisKey& k : table.keys())
        if (k.is_rule) rule_nullable_[RuleId{k.id}] = table.at(k);
    last_nullable_passes_ = table.passes();
    bool result = table.at(AnalysisKey::of_expr(e));
    expr_nullable_[e] = result;
    return result;
}

bool GrammarAnalysis::wf_expr_node(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local) {
    const ExprPool& pool = env_.pool();
    switch (pool.kind(e)) {
    case ExprKind::Empty:
    case ExprKind::Term:
    case ExprKind::Wildcard:
    case ExprKind::Fail: return true;
    case ExprKind::Nonterm: return rule(pool.rule(e));
    case ExprKind::Seq: {
        Expr lhs = pool.left(e);
        Expr rhs = pool.right(e);
        return wf_expr(lhs, rule, local) && (!nullable(lhs) || wf_expr(rhs, rule, local));
    }
    case ExprKind::Choice: return wf_expr(pool.left(e), rule, local) && wf_expr(pool.right(e), rule, local);
    case ExprKind::Star: {
        Expr body = pool.operand(e);
        return wf_expr(body, rule, local) && !nullable(body);
    }
    case ExprKind::Not:
    case ExprKind::And: return wf_expr(pool.operand(e), rule, local);
    }
    return false;
}

bool GrammarAnalysis::wf_expr(Expr e, const std::function<bool(RuleId)>& rule, Local<bool>& local) {
    if (auto it = expr_wf_.find(e); it != expr_wf_.end()) return it->second;
    if (auto it = local.find(e); it != local.end()) return it->second;
    bool v = wf_expr_node(e, rule, local);
    local.emplace(e, v);
    return v;
}


bool GrammarAnalysis::well_formed(Expr e) {
    if (auto it = expr_wf_.find(e); it != expr_wf_.end()) return it->second;
    const ExprPool& pool = env_.pool();
    if (pool.kind(e) == ExprKind::Nonterm) {
        if (auto it = rule_wf_.find(pool.rule(e)); it != rule_wf_.end()) return it->second;
    }
    auto equation = [this](const AnalysisKey& key, const FixReader<AnalysisKey, bool>& reader) {
        auto rule = [&](RuleId r) {
            if (auto it = rule_wf_.find(r); it != rule_wf_.end()) return it->second;
            return reader.read(AnalysisKey::of_rule(r));
        };
        Expr target = key.is_rule ? env_.rule_body(RuleId{key.id}) : Expr{key.id};
        Local<bool> local;
        return wf_expr(target, rule, local);
    };
    auto table = fix(seeds_for(e), equation, BoolLattice{});
    for (const AnalysisKey& k : table.keys())
        if (k.is_rule) rule_wf_[RuleId{k.id}] = table.at(k);
    bool result = table.at(AnalysisKey::of_expr(e));
    expr_wf_[e] = result;
    return result;
}

FirstsMap GrammarAnalysis::firsts_expr_node(Expr e, const std::function<FirstsMap(RuleId)>& rule, Local<FirstsMap>& local) {
    const ExprPool& pool = env_.pool();
    const SymbolSet all(env_.alphabet());
    switch (pool.kind(e)) {
    case ExprKind::Empty: return {{}, all};
    case ExprKind::Term: {
        FirstsMap m;
        m.always.insert(pool.symbol(e));
        return m;
    }
    case ExprKind::Nonterm: return rule(pool.rule(e));
    case ExprKind::Seq: {
        // firsts' e1 (firsts' e2 t)
        FirstsMap head = firsts_expr(pool.left(e), rule, local);
        if (head.passed.empty()) return head;
        FirstsMap tail = firsts_expr(pool.right(e), rule, local);
        return {head.always.unite(head.passed.intersect(tail.always)), head.passed.intersect(tail.passed)};
    }
    case ExprKind::Choice: {
        FirstsMap l = firsts_expr(pool.left(e), rule, local);
        FirstsMap r = firsts_expr(pool.right(e), rule, local);
        return {l.always.unite(r.always), l.passed.unite(r.passed)};
    }
    case ExprKind::Star: return {firsts_expr(pool.operand(e), rule, local).always, all};
    case ExprKind::Not: return {{}, all};
    case ExprKind::And: {
        // firsts'(e, t) ∩ t
        FirstsMap inner = firsts_expr(pool.operand(e), rule, local);
        return {{}, inner.always.unite(inner.passed)};
    }
    case ExprKind::Wildcard: return {all, {}};
    case ExprKind::Fail: return {};
    }
    return {};
}

FirstsMap GrammarAnalysis::firsts_expr(Expr e, const std::function<FirstsMap(RuleId)>& rule, Local<FirstsMap>& local) {
    if (auto it = expr_firsts_.find(e); it != expr_firsts_.end()) return it->second;
    if (auto it = local.find(e); it != local.end()) return it->second;
    FirstsMap v = firsts_expr_node(e, rule, local);
    local.emplace(e, v);
    return v;
}


FirstsMap GrammarAnalysis::firsts_map(Expr e) {
    if (auto it = expr_firsts_.find(e); it != expr_firsts_.end()) return it->second;
    const ExprPool& pool = env_.pool();
    if (pool.kind(e) == ExprKind::Nonterm) {
        if (auto it = rule_firsts_.find(pool.rule(e)); it != rule_firsts_.end()) return it->second;
    }
    auto equation = [this](const AnalysisKey& key, const FixReader<AnalysisKey, FirstsMap>& reader) {
        auto rule = [&](RuleId r) {
            if (auto it = rule_firsts_.find(r); it != rule_firsts_.end()) return it->second;
            return reader.read(AnalysisKey::of_rule(r));
        };
        Expr target = key.is_rule ? env_.rule_body(RuleId{key.id}) : Expr{key.id};
        Local<FirstsMap> local;
        return firsts_expr(target, rule, local);
    };
    auto table = fix(seeds_for(e), equation, FirstsLattice{env_.alphabet().size()});
    for (const AnalysisKey& k : table.keys())
        if (k.is_rule) rule_firsts_[RuleId{k.id}] = table.at(k);
    FirstsMap result = table.at(AnalysisKey::of_expr(e));
    expr_firsts_[e] = result;
    return result;
}

SymbolSet GrammarAnalysis::first_set(Expr e) { return firsts_map(e).always; }

bool nullable(Expr e, RuleEnv& env) { return GrammarAnalysis(env).nullable(e); }

SymbolSet first_set(Expr e, RuleEnv& env) { return GrammarAnalysis(env).first_set(e); }

WellFormedness well_formed(Grammar& g) {
    GrammarAnalysis analysis(g);
    WellFormedness out;
    out.rules.reserve(g.rule_count());
    for (std::size_t i = 0; i < g.rule_count(); ++i)
        out.rules.push_back(analysis.well_formed(g.pool().nonterm(RuleId{static_cast<std::uint32_t>(i)})));
    out.start = analysis.well_formed(g.start());
    return out;
}

}  // namespace pegd
