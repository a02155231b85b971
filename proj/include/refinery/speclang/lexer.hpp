#pragma once

#include "../errors.hpp"

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace refinery::speclang {

enum class tok : std::uint8_t {
    end, ident, integer,
    lparen, rparen, lbrack, rbrack, lbag, rbag, comma, colon, semicolon,
    question, bang, prime, dotdot, hash,
    assign, eq, ne, lt, le, gt, ge,
    plus, minus, concat, bag_union, bag_diff,
    amp, implies, iff,
};

struct token {
    tok kind = tok::end;
    std::string text;
    std::int64_t number = 0;
    source_position pos;
};

inline std::string describe(tok kind)
{
    switch (kind) {
    case tok::end: return "end of input";
    case tok::ident: return "identifier";
    case tok::integer: return "integer";
    case tok::lparen: return "'('";
    case tok::rparen: return "')'";
    case tok::lbrack: return "'['";
    case tok::rbrack: return "']'";
    case tok::lbag: return "'{|'";
    case tok::rbag: return "'|}'";
    case tok::comma: return "','";
    case tok::colon: return "':'";
    case tok::semicolon: return "';'";
    case tok::question: return "'?'";
    case tok::bang: return "'!'";
    case tok::prime: return "'''";
    case tok::dotdot: return "'..'";
    case tok::hash: return "'#'";
    case tok::assign: return "':='";
    case tok::eq: return "'='";
    case tok::ne: return "'/='";
    case tok::lt: return "'<'";
    case tok::le: return "'<='";
    case tok::gt: return "'>'";
    case tok::ge: return "'>='";
    case tok::plus: return "'+'";
    case tok::minus: return "'-'";
    case tok::concat: return "'++'";
    case tok::bag_union: return "'\\/'";
    case tok::bag_diff: return "'\\\\'";
    case tok::amp: return "'&'";
    case tok::implies: return "'=>'";
    case tok::iff: return "'<=>'";
    }
    return "?";
}

// Splits DSL text into tokens. Keywords come out as identifiers; the parser
// decides by context. `--` starts a comment running to end of line.
inline std::vector<token> tokenize(std::string_view text)
{
    std::vector<token> out;
    std::size_t i = 0;
    source_position pos;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (starts("--")) {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        token t;
        t.pos = pos;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            t.kind = tok::ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            t.kind = tok::integer;
            t.text = std::string(text.substr(i, j - i));
            try {
                t.number = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw parse_error(pos, "integer literal out of range");
            }
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }

        struct fixed {
            std::string_view text;
            tok kind;
        };
        // Longest match first.
        static constexpr fixed symbols[] = {
            {"<=>", tok::iff}, {":=", tok::assign}, {"/=", tok::ne}, {"!=", tok::ne},
            {"<=", tok::le}, {">=", tok::ge}, {"=>", tok::implies}, {"..", tok::dotdot},
            {"++", tok::concat}, {"\\/", tok::bag_union}, {"\\\\", tok::bag_diff}, {"{|", tok::lbag},
            {"|}", tok::rbag}, {"(", tok::lparen}, {")", tok::rparen}, {"[", tok::lbrack},
            {"]", tok::rbrack}, {",", tok::comma}, {":", tok::colon}, {";", tok::semicolon},
            {"?", tok::question}, {"!", tok::bang}, {"'", tok::prime}, {"#", tok::hash},
            {"=", tok::eq}, {"<", tok::lt}, {">", tok::gt}, {"+", tok::plus}, {"-", tok::minus},
            {"\\", tok::bag_diff}, {"&", tok::amp},
        };
        bool matched = false;
        for (const auto& s : symbols) {
            if (starts(s.text)) {
                t.kind = s.kind;
                t.text = std::string(s.text);
                advance(s.text.size());
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (!matched)
            throw parse_error(pos, std::string("unexpected character '") + c + "'");
    }
    token eof;
    eof.kind = tok::end;
    eof.pos = pos;
    out.push_back(eof);
    return out;
}

} // namespace refinery::speclang
