#pragma once

#include "promise/error.hpp"
#include "promise/term.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace promise::detail {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLoc loc;
    bool line_start = false;
};

std::vector<Token> tokenize(std::string_view text);

[[noreturn]] void syntax_error(const SourceLoc& loc, const std::string& message);

/// Recursive-descent expression parser over a token vector. Stops at the
/// first token that cannot continue an expression.
class TermParser {
public:
    TermParser(const std::vector<Token>& toks, std::size_t& pos);

    TermPtr expr();

    /// Named abbreviations expanded while parsing.
    std::vector<std::pair<std::string, TermPtr>>* defines = nullptr;

private:
    const Token& peek(std::size_t ahead = 0) const;
    bool accept(std::string_view punct_or_keyword);
    const Token& expect(std::string_view punct_or_keyword);
    std::string expect_ident();

    TermPtr seq_expr();
    TermPtr unary();
    TermPtr postfix();
    TermPtr primary();

    const std::vector<Token>& toks_;
    std::size_t& pos_;
};

bool is_keyword(std::string_view word);

} // namespace promise::detail
