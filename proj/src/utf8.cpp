#include "pegd/utf8.hpp"

#include <cstdio>

#include "pegd/errors.hpp"

namespace pegd {

Tokens decode_utf8(std::string_view bytes) {
    Tokens out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto lead = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (lead < 0x80) {
            len = 1;
            cp = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            len = 2;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            len = 3;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            len = 4;
            cp = lead & 0x07;
        } else {
            throw Error("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + len > bytes.size()) throw Error("truncated UTF-8 sequence at offset " + std::to_string(i));
        for (std::size_t k = 1; k < len; ++k) {
            auto cont = static_cast<unsigned char>(bytes[i + k]);
            if ((cont & 0xC0) != 0x80) throw Error("invalid UTF-8 continuation at offset " + std::to_string(i + k));
            cp = (cp << 6) | (cont & 0x3F);
        }
        static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw Error("invalid UTF-8 scalar at offset " + std::to_string(i));
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, Symbol s) {
    auto cp = static_cast<std::uint32_t>(s);
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view tokens) {
    std::string out;
    out.reserve(tokens.size());
    for (Symbol s : tokens) append_utf8(out, s);
    return out;
}

std::string escape_tokens(std::u32string_view tokens) {
    std::string out;
    for (Symbol s : tokens) {
        switch (s) {
        case U'\\': out += "\\\\"; break;
        case U'\n': out += "\\n"; break;
        case U'\t': out += "\\t"; break;
        default:
            if (s < 0x20 || s == 0x7F) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned>(s));
                out += buf;
            } else {
                append_utf8(out, s);
            }
        }
    }
    return out;
}

}  // namespace pegd
