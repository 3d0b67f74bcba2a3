#include "pegd/engine.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "pegd/errors.hpp"
#include "pegd/reference.hpp"

namespace pegd {

bool recognize(DeriveSession& session, Expr e, std::u32string_view x, MatchMode mode) {
    if (mode == MatchMode::Prefix) e = session.pool().seq(e, ExprPool::kAnyStar);
    return session.analysis().nullable(session.derive_string(x, e));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

bool shortlex_less(const Tokens& a, const Tokens& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::vector<Tokens> all_strings(std::span<const Symbol> alphabet, std::size_t max_length) {
    std::vector<Tokens> out{Tokens{}};
    std::size_t layer_start = 0;
    for (std::size_t len = 1; len <= max_length; ++len) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_start; i < layer_end; ++i)
            for (Symbol a : alphabet) out.push_back(out[i] + a);
        layer_start = layer_end;
    }
    return out;
}

namespace {

void require_well_formed(DeriveSession& session, Expr e) {
    if (!session.analysis().well_formed(e)) throw IllFormedGrammar("expression is not well-formed");
}

std::vector<Symbol> candidates(DeriveSession& session, Expr e, bool full_alphabet) {
    if (full_alphabet) return {session.alphabet().begin(), session.alphabet().end()};
    return session.analysis().first_set(e).items();
}

class Generator {
public:
    Generator(DeriveSession& session, const GenConfig& config)
        : session_(session), config_(config), rng_(config.seed) {}

    // Appends the suffix to out_ and returns true, or returns false.
    bool gen(Expr e) {
        const bool nullable = session_.analysis().nullable(e);
        if (out_.size() >= config_.max_length) return nullable;
        if (dead_.count({e, out_.size()})) return false;
        if (config_.mode == GenMode::Random && nullable && coin(config_.empty_bias)) return true;
        std::vector<Symbol> firsts = candidates(session_, e, config_.full_alphabet_firsts);
        if (config_.mode == GenMode::Random) shuffle(firsts);
        for (Symbol a : firsts) {
            if (steps_++ >= config_.step_budget) throw BudgetExhausted("generation step budget exhausted");
            Expr d = session_.derive(a, e);
            if (d == ExprPool::kFail) continue;
            out_.push_back(a);
            if (gen(d)) return true;
            out_.pop_back();
        }
        // Every candidate was explored, so this holds for any seed.
        if (!nullable) dead_.insert({e, out_.size()});
        return nullable;
    }

    Tokens take() { return std::move(out_); }

private:
    bool coin(double p) {
        double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return u < p;
    }

    void shuffle(std::vector<Symbol>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_() % i]);
    }

    DeriveSession& session_;
    const GenConfig& config_;
    std::mt19937_64 rng_;
    Tokens out_;
    std::size_t steps_ = 0;
    // (expression, length so far) states known to yield no sentence.
    std::set<std::pair<Expr, std::size_t>> dead_;
};

}  // namespace

GenResult generate(DeriveSession& session, Expr e, const GenConfig& config) {
    require_well_formed(session, e);
    Generator g(session, config);
    try {
        if (!g.gen(e)) return GenResult::failure();
    } catch (const BudgetExhausted&) {
        return GenResult::budget_exhausted();
    }
    return GenResult::sentence(g.take());
}

namespace {

struct Enumerator {
    DeriveSession& session;
    std::size_t max_length;
    const EnumerateOptions& options;
    std::vector<Tokens> found;
    Tokens prefix;
    std::size_t steps = 0;

    std::set<std::pair<Expr, std::size_t>> dead;

    void walk(Expr e) {
        const std::size_t before = found.size();
        if (session.analysis().nullable(e)) found.push_back(prefix);
        if (prefix.size() >= max_length) return;
        if (dead.count({e, prefix.size()})) return;
        for (Symbol a : candidates(session, e, options.full_alphabet_firsts)) {
            if (steps++ >= options.step_budget) throw BudgetExhausted("enumeration step budget exhausted");
            Expr d = session.derive(a, e);
            if (d == ExprPool::kFail) continue;
            prefix.push_back(a);
            walk(d);
            prefix.pop_back();
        }
        if (found.size() == before) dead.insert({e, prefix.size()});
    }
};

}  // namespace

std::vector<Tokens> enumerate(DeriveSession& session, Expr e, std::size_t max_length,
                              const EnumerateOptions& options) {
    require_well_formed(session, e);
    Enumerator en{session, max_length, options, {}, {}, 0, {}};
    en.walk(e);
    std::sort(en.found.begin(), en.found.end(), shortlex_less);
    return std::move(en.found);
}

EquivResult equiv_check(const Grammar& left, const Grammar& right, std::size_t samples, std::size_t max_length,
                        std::uint64_t seed) {
    std::vector<Symbol> sigma(left.alphabet().begin(), left.alphabet().end());
    sigma.insert(sigma.end(), right.alphabet().begin(), right.alphabet().end());
    Grammar g[2] = {left, right};
    for (Grammar& x : g) x.set_alphabet(sigma);
    std::span<const Symbol> alphabet = g[0].alphabet();

    DeriveSession sessions[2] = {DeriveSession(g[0]), DeriveSession(g[1])};
    for (DeriveSession& s : sessions) require_well_formed(s, s.start());

    EquivResult result;
    auto accepts = [&](int side, const Tokens& x) { return reference_accepts_exact(g[side].start(), x, g[side]); };

    GenConfig config;
    config.max_length = max_length;
    for (std::size_t i = 0; i < samples; ++i) {
        config.seed = splitmix64(seed + i);
        for (int side = 0; side < 2; ++side) {
            GenResult r = generate(sessions[side], sessions[side].start(), config);
            if (!r.is_sentence()) continue;
            ++result.sentences_checked;
            if (!accepts(1 - side, r.text())) {
                result.equivalent = false;
                result.counterexample = r.text();
                result.accepted_by = side == 0 ? EquivResult::Side::Left : EquivResult::Side::Right;
                return result;
            }
        }
    }

    for (const Tokens& x : all_strings(alphabet, std::min<std::size_t>(max_length, 4))) {
        ++result.strings_checked;
        bool l = accepts(0, x);
        bool r = accepts(1, x);
        if (l != r) {
            result.equivalent = false;
            result.counterexample = x;
            result.accepted_by = l ? EquivResult::Side::Left : EquivResult::Side::Right;
            return result;
        }
    }
    return result;
}

}  // namespace pegd
