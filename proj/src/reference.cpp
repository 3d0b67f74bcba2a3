#include "pegd/reference.hpp"

#include "pegd/errors.hpp"

namespace pegd {

namespace {

constexpr std::size_t kMaxDepth = 20'000;

class Interpreter {
public:
    Interpreter(RuleEnv& env, std::u32string_view input, std::uint64_t fuel)
        : env_(env), pool_(env.pool()), input_(input), fuel_(fuel) {}

    // Returns the offset of the remaining suffix, or kFail.
    std::size_t match(Expr e, std::size_t at) {
        if (fuel_ == 0) throw FuelExhausted("reference interpreter ran out of fuel");
        --fuel_;
        if (++depth_ > kMaxDepth) throw FuelExhausted("reference interpreter exceeded its recursion allowance");
        std::size_t out = step(e, at);
        --depth_;
        return out;
    }

    static constexpr std::size_t kFail = static_cast<std::size_t>(-1);

private:
    std::size_t step(Expr e, std::size_t at) {
        switch (pool_.kind(e)) {
        case ExprKind::Empty:
            return at;
        case ExprKind::Term:
            if (at < input_.size() && input_[at] == pool_.symbol(e)) return at + 1;
            return kFail;
        case ExprKind::Nonterm:
            return match(env_.rule_body(pool_.rule(e)), at);
        case ExprKind::Seq: {
            std::size_t mid = match(pool_.left(e), at);
            if (mid == kFail) return kFail;
            return match(pool_.right(e), mid);
        }
        case ExprKind::Choice: {
            std::size_t first = match(pool_.left(e), at);
            if (first != kFail) return first;
            return match(pool_.right(e), at);
        }
        case ExprKind::Star: {
            // Repetition case while the body matches, termination case on its
            // first failure. A body that matches without consuming repeats
            // forever, exactly as the rules say; fuel catches it.
            std::size_t cur = at;
            for (;;) {
                std::size_t nxt = match(pool_.operand(e), cur);
                if (nxt == kFail) return cur;
                cur = nxt;
                if (fuel_ == 0) throw FuelExhausted("reference interpreter ran out of fuel");
                --fuel_;
            }
        }
        case ExprKind::Not:
            return match(pool_.operand(e), at) == kFail ? at : kFail;
        case ExprKind::And:
            // &e is !!e
            return match(pool_.operand(e), at) == kFail ? kFail : at;
        case ExprKind::Wildcard:
            return at < input_.size() ? at + 1 : kFail;
        case ExprKind::Fail:
            return kFail;
        }
        return kFail;
    }

    RuleEnv& env_;
    const ExprPool& pool_;
    std::u32string_view input_;
    std::uint64_t fuel_;
    std::size_t depth_ = 0;
};

}  // namespace

MatchOutcome reference_match(Expr e, std::u32string_view input, RuleEnv& env, std::uint64_t fuel) {
    Interpreter interp(env, input, fuel);
    std::size_t end = interp.match(e, 0);
    return end == Interpreter::kFail ? MatchOutcome::failure() : MatchOutcome::suffix(end);
}

bool reference_accepts_exact(Expr e, std::u32string_view input, RuleEnv& env, std::uint64_t fuel) {
    return reference_match(e, input, env, fuel) == MatchOutcome::suffix(input.size());
}

}  // namespace pegd
