#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace promise {

enum class ErrorKind {
    Syntax,
    Arity,
    UnknownSymbol,
    DuplicateSymbol,
    NotABijection,
    VocabularyMismatch,
    HeadVarUnused,
    StaleChoice,
    UnknownModule,
    NonUnarySymbolInTest,
    DuplicateHead,
    InvalidParams,
    SignatureMismatch,
    Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace promise
