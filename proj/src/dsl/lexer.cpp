#include "lexer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace psys::dsl::detail {

bool is_word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view text, std::size_t line) {
    std::vector<Token> out;
    std::size_t col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        if (is_word_char(c)) {
            const auto start = i;
            while (i < text.size() && is_word_char(text[i])) {
                ++i;
            }
            tok.kind = Token::Kind::Word;
            tok.text = std::string(text.substr(start, i - start));
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            tok.kind = Token::Kind::Arrow;
            tok.text = "->";
            i += 2;
        } else if (std::string_view("()[]{}^:*,;=").find(c) != std::string_view::npos) {
            tok.kind = Token::Kind::Punct;
            tok.text = std::string(1, c);
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        col += tok.text.size();
        out.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& TokenStream::next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) {
        ++pos_;
    }
    return t;
}

bool TokenStream::accept(char c) {
    if (peek().is(c)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenStream::expect(char c, std::string_view what) {
    if (!peek().is(c)) {
        fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    }
    return next();
}

const Token& TokenStream::expect_word(std::string_view what) {
    if (!peek().is_word()) {
        fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    }
    return next();
}

void TokenStream::expect_arrow() {
    if (peek().kind != Token::Kind::Arrow) {
        fail(peek(), "expected '->', found " + describe(peek()));
    }
    next();
}

void TokenStream::expect_end() {
    if (!at_end()) {
        fail(peek(), "unexpected " + describe(peek()));
    }
}

void TokenStream::fail(const Token& at, const std::string& message) const {
    throw ParseError(message, at.line, at.column);
}

std::string describe(const Token& token) {
    switch (token.kind) {
        case Token::Kind::End:
            return "end of input";
        case Token::Kind::Word:
            return "'" + token.text + "'";
        default:
            return "'" + token.text + "'";
    }
}

bool is_reserved(std::string_view word) {
    return word == "H" || word == "L" || word == "OUT" || word == "IN" || word == "LINK";
}

bool is_integer(std::string_view word) {
    return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
}

unsigned long long to_integer(const Token& token, const TokenStream& ts) {
    unsigned long long value = 0;
    if (!token.is_word() || !is_integer(token.text)) {
        ts.fail(token, "expected an integer, found " + describe(token));
    }
    const auto* first = token.text.data();
    const auto* last = first + token.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        ts.fail(token, "integer out of range");
    }
    return value;
}

}  // namespace psys::dsl::detail
