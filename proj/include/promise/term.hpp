#pragma once

// Process terms: one node type for both the surface language and its core.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace promise {

enum class TermOp {
    // core
    Id,
    Module,
    Seq,
    PrefUnion,
    AntiDomain,
    MaxIterate,
    Eq,
    BG,
    // sugar
    Skip,
    Fail,
    Test,
    Dom,
    Dia,
    Not,
    And,
    Or,
    If,
    While,
    Repeat,
    Pow,
};

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermOp op = TermOp::Id;
    std::string name; // Module
    std::string p, q; // Eq, BG
    std::vector<TermPtr> kids;
    int power = 0; // Pow
    SourceLoc loc;
};

TermPtr make_id();
TermPtr make_module(std::string name);
TermPtr make_seq(TermPtr a, TermPtr b);
TermPtr make_pref_union(TermPtr a, TermPtr b);
TermPtr make_anti(TermPtr t);
TermPtr make_iterate(TermPtr t);
TermPtr make_eq(std::string p, std::string q);
TermPtr make_bg(std::string p, std::string q);
TermPtr make_node(TermOp op, std::vector<TermPtr> kids, SourceLoc loc = {});

/// Structural equality; source locations are ignored.
bool terms_equal(const Term& a, const Term& b);

bool is_core(const Term& t);

TermPtr desugar(const TermPtr& t);

/// Static anti-domain nesting depth of a core term. Left operands of
/// preferential union count as one level because their definedness is
/// decided by a nested search.
int antidomain_depth(const Term& t);

int term_depth(const Term& t);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string print_term(const Term& t);

/// Parses a bare expression with no vocabulary check. Throws SyntaxError.
TermPtr parse_term(std::string_view text);

} // namespace promise
