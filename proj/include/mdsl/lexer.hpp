#ifndef MDSL_LEXER_HPP
#define MDSL_LEXER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/diagnostics.hpp"

namespace mdsl {

enum class TokenKind { identifier, integer, string, punct, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;  // identifier/punct spelling, or the unescaped string contents
    std::int64_t int_value = 0;
    SourceLocation loc;

    bool is_punct(std::string_view p) const { return kind == TokenKind::punct && text == p; }
    bool is_word(std::string_view w) const { return kind == TokenKind::identifier && text == w; }
};

struct LexOptions {
    /// Multi-character punctuators, matched longest first. Single characters that are not
    /// part of any listed punctuator become one-character punct tokens when
    /// `single_char_punct` is set, and a lex error otherwise.
    std::vector<std::string> punctuators;
    bool single_char_punct = true;
    /// `-` immediately followed by a digit starts an integer.
    bool negative_integers = false;
    /// `-` between two letters/digits continues an identifier (`border-color`).
    bool hyphenated_identifiers = false;
    Phase phase = Phase::parse;
};

/// Splits text into tokens, skipping whitespace plus `//` and `/* */` comments.
/// The final token is always `end`.
Result<std::vector<Token>> tokenize(std::string_view text, const std::string& file, const LexOptions& options);

std::string describe(const Token& t);

/// Escapes `"` `\` and control characters; result is wrapped in double quotes.
std::string quote_string(std::string_view s);

bool is_identifier(std::string_view s);

/// Recursive-descent helper over a token vector.
class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at_end() const { return peek().kind == TokenKind::end; }

    bool accept_punct(std::string_view p);
    bool accept_word(std::string_view w);

    std::size_t position() const { return pos_; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace mdsl

#endif
