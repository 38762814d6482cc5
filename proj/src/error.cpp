#include "promise/error.hpp"

namespace promise {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::VocabularyMismatch: return "VocabularyMismatch";
    case ErrorKind::HeadVarUnused: return "HeadVarUnused";
    case ErrorKind::StaleChoice: return "StaleChoice";
    case ErrorKind::UnknownModule: return "UnknownModule";
    case ErrorKind::NonUnarySymbolInTest: return "NonUnarySymbolInTest";
    case ErrorKind::DuplicateHead: return "DuplicateHead";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

} // namespace promise
