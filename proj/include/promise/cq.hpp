#pragma once

// Unary conjunctive-query bodies and their evaluation against a letter.

#include "promise/structure.hpp"

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace promise {

struct Arg {
    bool is_constant = false;
    std::string name;

    static Arg var(std::string n) { return {false, std::move(n)}; }
    static Arg constant(std::string n) { return {true, std::move(n)}; }

    bool operator==(const Arg&) const = default;
};

struct Atom {
    std::string symbol;
    std::vector<Arg> args;

    bool operator==(const Atom&) const = default;
};

struct CQBody {
    std::string head_var;
    std::vector<Atom> atoms;

    bool operator==(const CQBody&) const = default;
};

/// (head variable, existential variables). Throws HeadVarUnused.
std::pair<std::string, std::set<std::string>> free_and_bound_vars(const CQBody& body);

/// A body resolved against one database: symbols become indices and
/// variables become slots.
class CompiledQuery {
public:
    /// Throws UnknownSymbol or ArityError.
    CompiledQuery(const CQBody& body, const Database& db);

    /// Sorted answer set at the letter whose registers are `regs`.
    [[nodiscard]] std::vector<ElementId> answers(const Database& db, std::span<const ElementId> regs) const;
    /// Whether `head` is in the answer set; cheaper than answers().
    [[nodiscard]] bool accepts(const Database& db, std::span<const ElementId> regs, ElementId head) const;

private:
    enum class SymKind { Edb, Register, Adom };
    struct Term {
        bool is_constant;
        ElementId value; // constant element or variable slot
    };
    struct CompiledAtom {
        SymKind kind;
        std::size_t index;
        std::vector<Term> args;
    };

    struct Search;

    std::vector<CompiledAtom> atoms_;
    std::size_t var_count_ = 0;
    std::size_t head_slot_ = 0;
};

std::vector<ElementId> evaluate_unary_cq(const CQBody& body, const Structure& s);

} // namespace promise
