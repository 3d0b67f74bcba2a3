#pragma once

#include <string>
#include <string_view>

#include "pegd/grammar.hpp"

namespace pegd {

/// Parses the grammar file format:
///
///     # comment
///     %alphabet 'a' 'b' 'c'      optional; default is every terminal used
///     %start S                   optional; default is the first rule
///     S <- 'a' S 'b' / ''
///
/// Expressions: `'x'` terminal (multi-character literals are sequences,
/// `''` is ε), `.` wildcard, `%fail`, rule names, `( )`, postfix `* + ?`,
/// prefix `! &`, juxtaposition for sequence and `/` for prioritized choice,
/// binding in that order. Escapes inside literals: `\' \\ \n \t \xHH`.
///
/// Throws GrammarError (with line and column where available).
Grammar parse_grammar(std::string_view text);

/// Canonical text. `%alphabet` is written only when it differs from the set
/// of terminals used, `%start` only when the start rule is not the first.
std::string serialize_grammar(const Grammar& g);

/// True for names the parser accepts as rule identifiers.
bool is_identifier(std::string_view name);

}  // namespace pegd
