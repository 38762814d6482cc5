#pragma once

// Program files: vocabulary declarations, module definitions, abbreviations
// and exactly one main term.

#include "promise/error.hpp"
#include "promise/module.hpp"
#include "promise/structure.hpp"
#include "promise/term.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace promise {

struct Diagnostic {
    ErrorKind kind;
    std::string message;
    SourceLoc loc;
};

std::string to_string(const Diagnostic& d);

struct Program {
    Vocabulary vocabulary;
    std::map<std::string, ModuleDef> modules;
    TermPtr main;

    std::map<std::string, SourceLoc> module_locs;
    std::map<std::string, std::vector<SourceLoc>> rule_locs;
};

/// Syntax only. Throws SyntaxError.
Program parse_program_text(std::string_view text);

std::vector<Diagnostic> validate_program(const Program& p);

/// Module references and test symbols of a stand-alone term.
std::vector<Diagnostic> validate_term(const Program& p, const Term& t);

/// Parses and validates; throws the first diagnostic as an Error.
Program parse_program(std::string_view text);

/// Same-named symbols with the same arities. Throws VocabularyMismatch.
void check_vocabulary(const Program& p, const Structure& s);

/// Every unary symbol (registers and arity-1 EDB relations).
bool is_unary_symbol(const Vocabulary& v, std::string_view name);

} // namespace promise
