#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "pegd/analysis.hpp"
#include "pegd/derivative.hpp"
#include "pegd/engine.hpp"
#include "pegd/errors.hpp"
#include "pegd/grammar_text.hpp"
#include "pegd/reference.hpp"
#include "pegd/utf8.hpp"

namespace pegd::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "pegd/1";

// Thrown for problems with the invocation itself.
struct UsageError : Error {
    using Error::Error;
};

Grammar load_grammar(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open grammar file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    try {
        return parse_grammar(text);
    } catch (const GrammarError& e) {
        throw GrammarError(path + ":" + e.what());
    }
}

json symbols_json(const SymbolSet& s) {
    json out = json::array();
    for (Symbol c : s) out.push_back(encode_utf8(std::u32string(1, c)));
    return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct Context {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool json_mode = false;
    std::string command;

    json envelope() const { return json{{"schema", kSchema}, {"command", command}}; }
    void emit(const json& j) const { out << j.dump() << '\n'; }
};

struct CheckArgs {
    std::string grammar;
};

int cmd_check(Context& cx, const CheckArgs& a) {
    Grammar g = load_grammar(a.grammar);
    GrammarAnalysis an(g);
    json rules = json::array();
    for (std::size_t i = 0; i < g.rule_count(); ++i) {
        RuleId r{static_cast<std::uint32_t>(i)};
        Expr ref = g.pool().nonterm(r);
        bool wf = an.well_formed(ref);
        bool nu = an.nullable(ref);
        SymbolSet firsts = an.first_set(ref);
        if (cx.json_mode) {
            rules.push_back({{"name", g.rule_name(r)},
                             {"well_formed", wf},
                             {"nullable", nu},
                             {"firsts", symbols_json(firsts)}});
        } else {
            cx.out << g.rule_name(r) << ": wf=" << yes_no(wf) << " nullable=" << yes_no(nu)
                   << (wf ? "" : " (undefined)") << " firsts=" << format_symbol_set(firsts) << '\n';
        }
    }
    bool start_wf = an.well_formed(g.start());
    if (cx.json_mode) {
        json j = cx.envelope();
        j["rules"] = rules;
        j["start"] = {{"well_formed", start_wf}, {"nullable", an.nullable(g.start())}};
        cx.emit(j);
    } else {
        cx.out << "start: " << (start_wf ? "well-formed" : "not well-formed") << '\n';
    }
    return start_wf ? kOk : kNotWellFormed;
}

struct RecognizeArgs {
    std::string grammar;
    std::string input;
    bool input_given = false;
    std::string engine = "derivative";
    std::string mode = "exact";
    bool from_stdin = false;
};

int cmd_recognize(Context& cx, const RecognizeArgs& a) {
    if (a.from_stdin == a.input_given) throw UsageError("give exactly one of INPUT or --stdin");
    Grammar g = load_grammar(a.grammar);
    std::string raw = a.input;
    if (a.from_stdin) {
        raw.assign(std::istreambuf_iterator<char>(cx.in), std::istreambuf_iterator<char>());
        if (!raw.empty() && raw.back() == '\n') raw.pop_back();
    }
    Tokens x;
    try {
        x = decode_utf8(raw);
    } catch (const Error& e) {
        throw UsageError(std::string("input: ") + e.what());
    }
    for (Symbol s : x)
        if (!g.has_symbol(s)) throw AlphabetViolation("input symbol " + quote_symbol(s) + " is not in the alphabet");
    const MatchMode mode = a.mode == "prefix" ? MatchMode::Prefix : MatchMode::Exact;

    std::optional<bool> by_derivative;
    std::optional<bool> by_reference;
    if (a.engine != "reference") {
        DeriveSession session(g);
        if (!session.analysis().well_formed(session.start()))
            throw IllFormedGrammar("grammar is not well-formed; the derivative engine is undefined on it");
        by_derivative = recognize(session, session.start(), x, mode);
    }
    if (a.engine != "derivative") {
        Expr e = mode == MatchMode::Prefix ? g.pool().seq(g.start(), ExprPool::kAnyStar) : g.start();
        by_reference = reference_accepts_exact(e, x, g);
    }
    const bool disagree = by_derivative && by_reference && *by_derivative != *by_reference;
    const bool accepted = by_derivative.value_or(by_reference.value_or(false));
    auto word = [](bool b) { return b ? "accepted" : "rejected"; };
    if (cx.json_mode) {
        json j = cx.envelope();
        j["input"] = encode_utf8(x);
        j["mode"] = a.mode;
        if (by_derivative) j["derivative"] = *by_derivative;
        if (by_reference) j["reference"] = *by_reference;
        j["result"] = disagree ? "disagree" : word(accepted);
        cx.emit(j);
    } else if (disagree) {
        cx.out << "engines disagree: derivative " << word(*by_derivative) << ", reference " << word(*by_reference)
               << '\n';
    } else {
        cx.out << word(accepted) << '\n';
    }
    if (disagree) return kDisagree;
    return accepted ? kOk : kRejected;
}

struct DeriveArgs {
    std::string grammar;
    std::string input;
    unsigned inline_depth = 0;
};

int cmd_derive(Context& cx, const DeriveArgs& a) {
    DeriveSession session(load_grammar(a.grammar));
    Tokens x;
    try {
        x = decode_utf8(a.input);
    } catch (const Error& e) {
        throw UsageError(std::string("input: ") + e.what());
    }
    Expr d = session.derive_string(x, session.start());
    Expr shown = inline_rules(d, session, a.inline_depth);
    std::string text = serialize_grammar(session.snapshot(shown));
    if (cx.json_mode) {
        json j = cx.envelope();
        j["input"] = a.input;
        j["grammar"] = text;
        j["derived_rules"] = session.derived_rule_count();
        cx.emit(j);
    } else {
        cx.out << text;
    }
    return kOk;
}

struct GenerateArgs {
    std::string grammar;
    std::size_t count = 10;
    std::size_t max_length = 16;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    bool verify = false;
};

int cmd_generate(Context& cx, const GenerateArgs& a) {
    Grammar g = load_grammar(a.grammar);
    DeriveSession session(g);
    if (!session.analysis().well_formed(session.start()))
        throw IllFormedGrammar("grammar is not well-formed; generation is undefined on it");

    std::vector<Tokens> sentences;
    std::size_t failures = 0;
    bool exhausted = false;
    if (a.exhaustive) {
        sentences = enumerate(session, session.start(), a.max_length);
    } else {
        GenConfig config;
        config.max_length = a.max_length;
        for (std::size_t i = 0; i < a.count; ++i) {
            config.seed = splitmix64(a.seed + i);
            GenResult r = generate(session, session.start(), config);
            if (r.is_sentence()) {
                sentences.push_back(r.text());
            } else if (r.kind() == GenResult::Kind::Failure) {
                ++failures;
            } else {
                exhausted = true;
                break;
            }
        }
    }

    std::vector<Tokens> unverified;
    if (a.verify)
        for (const Tokens& x : sentences)
            if (!reference_accepts_exact(g.start(), x, g)) unverified.push_back(x);

    if (cx.json_mode) {
        json j = cx.envelope();
        json list = json::array();
        for (const Tokens& x : sentences) list.push_back(encode_utf8(x));
        j["sentences"] = list;
        j["failures"] = failures;
        j["budget_exhausted"] = exhausted;
        if (a.verify) {
            json bad = json::array();
            for (const Tokens& x : unverified) bad.push_back(encode_utf8(x));
            j["unverified"] = bad;
        }
        cx.emit(j);
    } else {
        for (const Tokens& x : sentences) cx.out << escape_tokens(x) << '\n';
    }
    for (const Tokens& x : unverified) cx.err << "reference engine rejects generated sentence: " << escape_tokens(x) << '\n';
    if (exhausted) cx.err << "generation step budget exhausted\n";
    if (failures) cx.err << failures << " generation attempt(s) found no sentence\n";

    if (!unverified.empty()) return kDisagree;
    if (exhausted) return kBudget;
    if (failures) return kRejected;
    return kOk;
}

struct FirstsArgs {
    std::string grammar;
    std::string rule;
};

int cmd_firsts(Context& cx, const FirstsArgs& a) {
    Grammar g = load_grammar(a.grammar);
    Expr target = g.start();
    std::string label = "start";
    if (!a.rule.empty()) {
        auto r = g.find_rule(a.rule);
        if (!r) throw UsageError("no rule named '" + a.rule + "'");
        target = g.pool().nonterm(*r);
        label = a.rule;
    }
    SymbolSet s = first_set(target, g);
    if (cx.json_mode) {
        json j = cx.envelope();
        j["target"] = label;
        j["firsts"] = symbols_json(s);
        cx.emit(j);
    } else {
        cx.out << label << ": " << format_symbol_set(s) << '\n';
    }
    return kOk;
}

struct EquivArgs {
    std::string left;
    std::string right;
    std::size_t samples = 100;
    std::size_t max_length = 8;
    std::uint64_t seed = 0;
};

int cmd_equiv(Context& cx, const EquivArgs& a) {
    Grammar l = load_grammar(a.left);
    Grammar r = load_grammar(a.right);
    EquivResult res = equiv_check(l, r, a.samples, a.max_length, a.seed);
    const char* side = res.accepted_by == EquivResult::Side::Left ? "left" : "right";
    if (cx.json_mode) {
        json j = cx.envelope();
        j["equivalent"] = res.equivalent;
        if (!res.equivalent) j["counterexample"] = {{"input", encode_utf8(res.counterexample)}, {"accepted_by", side}};
        j["sentences_checked"] = res.sentences_checked;
        j["strings_checked"] = res.strings_checked;
        cx.emit(j);
    } else if (res.equivalent) {
        cx.out << "equivalent up to budget (" << res.sentences_checked << " sentences, " << res.strings_checked
               << " strings checked)\n";
    } else {
        cx.out << "counterexample: '" << escape_tokens(res.counterexample) << "' accepted by " << side << " only\n";
    }
    return res.equivalent ? kOk : kRejected;
}

const char* error_kind(int code) {
    switch (code) {
    case kUsage: return "usage";
    case kNotWellFormed: return "not_well_formed";
    case kBudget: return "budget";
    default: return "error";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Derivatives of parsing expression grammars", "pegd"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    Context cx{in, out, err, false, {}};

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", cx.json_mode, "Machine-readable output"); };

    CheckArgs check;
    auto* c_check = app.add_subcommand("check", "Report well-formedness, nullability and first sets per rule");
    c_check->add_option("grammar", check.grammar, "Grammar file")->required();
    add_json(c_check);

    RecognizeArgs rec;
    auto* c_rec = app.add_subcommand("recognize", "Decide membership of an input");
    c_rec->add_option("grammar", rec.grammar, "Grammar file")->required();
    auto* rec_input = c_rec->add_option("input", rec.input, "Input string (UTF-8)");
    c_rec->add_option("--engine", rec.engine, "derivative, reference or both")
        ->check(CLI::IsMember({"derivative", "reference", "both"}));
    c_rec->add_option("--mode", rec.mode, "exact or prefix")->check(CLI::IsMember({"exact", "prefix"}));
    c_rec->add_flag("--stdin", rec.from_stdin, "Read the input from standard input");
    add_json(c_rec);

    DeriveArgs der;
    auto* c_der = app.add_subcommand("derive", "Print the derivative of the start expression by a string");
    c_der->add_option("grammar", der.grammar, "Grammar file")->required();
    c_der->add_option("input", der.input, "Terminals to derive by")->required();
    c_der->add_option("--inline-depth", der.inline_depth, "Inline rule references up to this depth");
    add_json(c_der);

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "Generate sentences");
    c_gen->add_option("grammar", gen.grammar, "Grammar file")->required();
    c_gen->add_option("--count", gen.count, "Number of sentences (random mode)");
    c_gen->add_option("--max-length", gen.max_length, "Maximum sentence length");
    c_gen->add_option("--seed", gen.seed, "Random seed");
    c_gen->add_flag("--exhaustive", gen.exhaustive, "List every sentence up to --max-length");
    c_gen->add_flag("--verify", gen.verify, "Re-check each sentence with the reference interpreter");
    add_json(c_gen);

    FirstsArgs fir;
    auto* c_fir = app.add_subcommand("firsts", "Print the first set of the start expression or a rule");
    c_fir->add_option("grammar", fir.grammar, "Grammar file")->required();
    c_fir->add_option("rule", fir.rule, "Rule name");
    add_json(c_fir);

    EquivArgs eq;
    auto* c_eq = app.add_subcommand("equiv", "Probabilistically compare two grammars");
    c_eq->add_option("left", eq.left, "Grammar file")->required();
    c_eq->add_option("right", eq.right, "Grammar file")->required();
    c_eq->add_option("--samples", eq.samples, "Sentences generated from each side");
    c_eq->add_option("--max-length", eq.max_length, "Maximum sentence length");
    c_eq->add_option("--seed", eq.seed, "Random seed");
    add_json(c_eq);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    cx.command = sub->get_name();
    rec.input_given = rec_input->count() > 0;

    int code = kOk;
    std::string message;
    try {
        if (sub == c_check) return cmd_check(cx, check);
        if (sub == c_rec) return cmd_recognize(cx, rec);
        if (sub == c_der) return cmd_derive(cx, der);
        if (sub == c_gen) return cmd_generate(cx, gen);
        if (sub == c_fir) return cmd_firsts(cx, fir);
        if (sub == c_eq) return cmd_equiv(cx, eq);
    } catch (const IllFormedGrammar& e) {
        code = kNotWellFormed;
        message = e.what();
    } catch (const BudgetExhausted& e) {
        code = kBudget;
        message = e.what();
    } catch (const FuelExhausted& e) {
        code = kBudget;
        message = e.what();
    } catch (const IterationBudgetExceeded& e) {
        code = kBudget;
        message = e.what();
    } catch (const Error& e) {
        code = kUsage;
        message = e.what();
    }
    err << "pegd " << cx.command << ": " << message << '\n';
    if (cx.json_mode) {
        json j = cx.envelope();
        j["error"] = {{"kind", error_kind(code)}, {"message", message}};
        cx.emit(j);
    }
    return code;
}

}  // namespace pegd::cli
