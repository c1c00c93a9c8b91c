#include "mdsl/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace mdsl {
namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c)
{
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

bool is_identifier(std::string_view s)
{
    if (s.empty() || !ident_start(s.front()))
        return false;
    return std::all_of(s.begin() + 1, s.end(), ident_char);
}

std::string quote_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string describe(const Token& t)
{
    switch (t.kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::identifier: return "identifier '" + t.text + "'";
    case TokenKind::integer: return "integer " + std::to_string(t.int_value);
    case TokenKind::string: return "string " + quote_string(t.text);
    case TokenKind::punct: return "'" + t.text + "'";
    }
    return "?";
}

Result<std::vector<Token>> tokenize(std::string_view text, const std::string& file, const LexOptions& options)
{
    std::vector<std::string> puncts = options.punctuators;
    std::sort(puncts.begin(), puncts.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::vector<Token> tokens;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto error = [&](std::string msg, int l, int c) {
        return Result<std::vector<Token>>(
            Diagnostics{make_error(options.phase, "lex", std::move(msg), SourceLocation{file, l, c})});
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            int l = line, cl = col;
            advance(2);
            while (i < text.size() && !(text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/'))
                advance(1);
            if (i >= text.size())
                return error("unterminated block comment", l, cl);
            advance(2);
            continue;
        }

        Token tok;
        tok.loc = SourceLocation{file, line, col};

        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < text.size()) {
                if (ident_char(text[j])) {
                    ++j;
                } else if (options.hyphenated_identifiers && text[j] == '-' && j + 1 < text.size() &&
                           std::isalpha(static_cast<unsigned char>(text[j + 1]))) {
                    j += 2;
                } else {
                    break;
                }
            }
            tok.kind = TokenKind::identifier;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (digit(c) || (options.negative_integers && c == '-' && i + 1 < text.size() && digit(text[i + 1]))) {
            std::size_t j = i + 1;
            while (j < text.size() && digit(text[j]))
                ++j;
            tok.kind = TokenKind::integer;
            tok.text = std::string(text.substr(i, j - i));
            auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.int_value);
            if (ec != std::errc())
                return error("integer literal out of range", line, col);
            advance(j - i);
        } else if (c == '"') {
            int l = line, cl = col;
            advance(1);
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                if (d == '"') {
                    closed = true;
                    advance(1);
                    break;
                }
                if (d == '\n')
                    break;
                if (d == '\\') {
                    if (i + 1 >= text.size())
                        break;
                    char e = text[i + 1];
                    switch (e) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default: return error(std::string("unknown escape '\\") + e + "'", line, col);
                    }
                    advance(2);
                    continue;
                }
                value += d;
                advance(1);
            }
            if (!closed)
                return error("unterminated string literal", l, cl);
            tok.kind = TokenKind::string;
            tok.text = std::move(value);
        } else {
            auto rest = text.substr(i);
            auto it = std::find_if(puncts.begin(), puncts.end(), [&](const std::string& p) { return rest.starts_with(p); });
            if (it != puncts.end()) {
                tok.kind = TokenKind::punct;
                tok.text = *it;
            } else if (options.single_char_punct && std::ispunct(static_cast<unsigned char>(c))) {
                tok.kind = TokenKind::punct;
                tok.text = std::string(1, c);
            } else {
                return error(std::string("unexpected character '") + c + "'", line, col);
            }
            advance(tok.text.size());
        }
        tokens.push_back(std::move(tok));
    }

    Token end;
    end.kind = TokenKind::end;
    end.loc = SourceLocation{file, line, col};
    tokens.push_back(std::move(end));
    return tokens;
}

const Token& TokenCursor::peek(std::size_t ahead) const
{
    std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
}

const Token& TokenCursor::next()
{
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
        ++pos_;
    return t;
}

bool TokenCursor::accept_punct(std::string_view p)
{
    if (peek().is_punct(p)) {
        next();
        return true;
    }
    return false;
}

bool TokenCursor::accept_word(std::string_view w)
{
    if (peek().is_word(w)) {
        next();
        return true;
    }
    return false;
}

}  // namespace mdsl
