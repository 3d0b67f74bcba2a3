#pragma once

#include <string>
#include <string_view>

#include "pegd/expr.hpp"

namespace pegd {

/// Decodes UTF-8 into scalars. Throws pegd::Error on malformed input.
Tokens decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, Symbol s);
std::string encode_utf8(std::u32string_view tokens);

/// Printable single-line form of a token string: backslash escapes for
/// `\`, newline, tab and other control characters; everything else raw.
std::string escape_tokens(std::u32string_view tokens);

}  // namespace pegd
