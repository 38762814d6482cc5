#include "promise/module.hpp"

#include "promise/error.hpp"

#include <algorithm>

namespace promise {

CompiledModule::CompiledModule(const ModuleDef& def, const Database& db) : name_(def.name) {
    const auto& vocab = db.vocabulary();
    for (const auto& rule : def.rules) {
        auto reg = vocab.find_register(rule.head);
        if (!reg)
            throw Error(ErrorKind::UnknownSymbol, "head '" + rule.head + "' of module " + def.name +
                                                      " is not a declared register");
        if (std::find(heads_.begin(), heads_.end(), *reg) != heads_.end())
            throw Error(ErrorKind::DuplicateHead, "module " + def.name + " writes " + rule.head + " twice");
        heads_.push_back(*reg);
        bodies_.emplace_back(rule.body, db);
    }
}

std::vector<std::vector<ElementId>> CompiledModule::answer_sets(const Database& db,
                                                                std::span<const ElementId> regs) const {
    std::vector<std::vector<ElementId>> out;
    out.reserve(bodies_.size());
    for (const auto& body : bodies_)
        out.push_back(body.answers(db, regs));
    return out;
}

bool CompiledModule::accepts(const Database& db, std::span<const ElementId> regs,
                             std::span<const ElementId> values) const {
    if (values.size() != bodies_.size())
        return false;
    for (std::size_t i = 0; i < bodies_.size(); ++i)
        if (!bodies_[i].accepts(db, regs, values[i]))
            return false;
    return true;
}

bool CompiledModule::for_each_choice(const Database& db, std::span<const ElementId> regs,
                                     const std::function<bool(std::span<const ElementId>)>& visit) const {
    auto sets = answer_sets(db, regs);
    for (const auto& s : sets)
        if (s.empty())
            return false;
    std::vector<std::size_t> cursor(sets.size(), 0);
    std::vector<ElementId> values(sets.size());
    while (true) {
        for (std::size_t i = 0; i < sets.size(); ++i)
            values[i] = sets[i][cursor[i]];
        if (visit(values))
            return true;
        // odometer, last rule fastest
        std::size_t i = sets.size();
        while (i > 0) {
            --i;
            if (++cursor[i] < sets[i].size())
                break;
            cursor[i] = 0;
            if (i == 0)
                return false;
        }
        if (sets.empty())
            return false;
    }
}

void CompiledModule::apply(std::span<ElementId> regs, std::span<const ElementId> values) const {
    for (std::size_t i = 0; i < heads_.size(); ++i)
        regs[heads_[i]] = values[i];
}

Choice CompiledModule::to_choice(const Database& db, std::span<const ElementId> values) const {
    Choice c{name_, {}};
    for (std::size_t i = 0; i < heads_.size(); ++i)
        c.assignment.emplace(db.vocabulary().registers()[heads_[i]], db.element_name(values[i]));
    return c;
}

std::vector<ElementId> CompiledModule::values_of(const Database& db, const Choice& c) const {
    if (c.module != name_)
        throw Error(ErrorKind::StaleChoice, "choice for module " + c.module + " applied to " + name_);
    if (c.assignment.size() != heads_.size())
        throw Error(ErrorKind::StaleChoice, "choice does not assign every head of " + name_);
    std::vector<ElementId> values;
    for (auto head : heads_) {
        auto it = c.assignment.find(db.vocabulary().registers()[head]);
        if (it == c.assignment.end())
            throw Error(ErrorKind::StaleChoice, "choice misses register " + db.vocabulary().registers()[head]);
        auto e = db.find_element(it->second);
        if (!e)
            throw Error(ErrorKind::StaleChoice, "'" + it->second + "' is not a domain element");
        values.push_back(*e);
    }
    return values;
}

std::vector<Choice> successor_choices(const ModuleDef& m, const Structure& s) {
    CompiledModule cm(m, s.db());
    std::vector<Choice> out;
    cm.for_each_choice(s.db(), s.registers(), [&](std::span<const ElementId> values) {
        out.push_back(cm.to_choice(s.db(), values));
        return false;
    });
    return out;
}

Structure apply_choice(const ModuleDef& m, const Structure& s, const Choice& c) {
    CompiledModule cm(m, s.db());
    auto values = cm.values_of(s.db(), c);
    if (!cm.accepts(s.db(), s.registers(), values))
        throw Error(ErrorKind::StaleChoice, "assignment is outside the answer sets of " + m.name);
    std::vector<ElementId> regs(s.registers().begin(), s.registers().end());
    cm.apply(regs, values);
    return Structure(s.db_ptr(), std::move(regs));
}

std::vector<Structure> successors(const ModuleDef& m, const Structure& s) {
    CompiledModule cm(m, s.db());
    std::vector<Structure> out;
    cm.for_each_choice(s.db(), s.registers(), [&](std::span<const ElementId> values) {
        std::vector<ElementId> regs(s.registers().begin(), s.registers().end());
        cm.apply(regs, values);
        out.emplace_back(s.db_ptr(), std::move(regs));
        return false;
    });
    return out;
}

} // namespace promise
