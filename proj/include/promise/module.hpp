#pragma once

// SM-PP atomic modules: each rule writes exactly one element of its body's
// answer set into its head register; everything else stays as it was.

#include "promise/cq.hpp"
#include "promise/structure.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace promise {

struct Rule {
    std::string head;
    CQBody body;

    bool operator==(const Rule&) const = default;
};

struct ModuleDef {
    std::string name;
    std::vector<Rule> rules;

    bool operator==(const ModuleDef&) const = default;
};

/// One resolved outcome of a module: head register -> element name.
struct Choice {
    std::string module;
    std::map<std::string, std::string> assignment;

    bool operator==(const Choice&) const = default;
};

class CompiledModule {
public:
    /// Throws UnknownSymbol, DuplicateHead, ArityError.
    CompiledModule(const ModuleDef& def, const Database& db);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::span<const std::size_t> heads() const noexcept { return heads_; }

    /// Per-rule answer sets, all computed against the source letter.
    [[nodiscard]] std::vector<std::vector<ElementId>> answer_sets(const Database& db,
                                                                  std::span<const ElementId> regs) const;
    [[nodiscard]] bool accepts(const Database& db, std::span<const ElementId> regs,
                               std::span<const ElementId> values) const;

    /// Calls `visit(values)` for every choice in enumeration order (first
    /// rule most significant). Stops early when `visit` returns true and
    /// reports whether it did.
    bool for_each_choice(const Database& db, std::span<const ElementId> regs,
                         const std::function<bool(std::span<const ElementId>)>& visit) const;

    void apply(std::span<ElementId> regs, std::span<const ElementId> values) const;

    [[nodiscard]] Choice to_choice(const Database& db, std::span<const ElementId> values) const;
    /// Throws StaleChoice when the assignment does not name every head exactly.
    [[nodiscard]] std::vector<ElementId> values_of(const Database& db, const Choice& c) const;

private:
    std::string name_;
    std::vector<std::size_t> heads_;
    std::vector<CompiledQuery> bodies_;
};

std::vector<Choice> successor_choices(const ModuleDef& m, const Structure& s);

/// Throws StaleChoice if `c` is not a choice of `m` at `s`.
Structure apply_choice(const ModuleDef& m, const Structure& s, const Choice& c);

std::vector<Structure> successors(const ModuleDef& m, const Structure& s);

} // namespace promise
