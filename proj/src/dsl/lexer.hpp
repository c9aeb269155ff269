#pragma once

#include "psys/errors.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace psys::dsl::detail {

struct Token {
    enum class Kind { Word, Arrow, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;  // 1-based column of the first character

    bool is(char c) const { return kind == Kind::Punct && text.size() == 1 && text[0] == c; }
    bool is_word() const { return kind == Kind::Word; }
    bool is_word(std::string_view w) const { return kind == Kind::Word && text == w; }
    std::size_t end_column() const { return column + (text.empty() ? 1 : text.size()); }
};

bool is_word_char(char c);

/// Splits text into words (runs of symbol characters), `->` and single
/// punctuation characters. `#` starts a comment running to the end of the
/// line. `line` is the number of the first line of `text`.
std::vector<Token> tokenize(std::string_view text, std::size_t line = 1);

/// Cursor over a token vector; the last token is always End.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at_end() const { return peek().kind == Token::Kind::End; }

    bool accept(char c);
    const Token& expect(char c, std::string_view what);
    const Token& expect_word(std::string_view what);
    void expect_arrow();
    void expect_end();

    [[noreturn]] void fail(const Token& at, const std::string& message) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& token);

bool is_reserved(std::string_view word);
bool is_integer(std::string_view word);
unsigned long long to_integer(const Token& token, const TokenStream& ts);

}  // namespace psys::dsl::detail
