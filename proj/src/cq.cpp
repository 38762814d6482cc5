#include "promise/cq.hpp"

#include "promise/error.hpp"

#include <algorithm>
#include <map>

namespace promise {

std::pair<std::string, std::set<std::string>> free_and_bound_vars(const CQBody& body) {
    std::set<std::string> vars;
    bool head_used = false;
    for (const auto& atom : body.atoms)
        for (const auto& arg : atom.args) {
            if (arg.is_constant)
                continue;
            if (arg.name == body.head_var)
                head_used = true;
            else
                vars.insert(arg.name);
        }
    if (!head_used)
        throw Error(ErrorKind::HeadVarUnused, "head variable '" + body.head_var + "' occurs in no atom");
    return {body.head_var, std::move(vars)};
}

CompiledQuery::CompiledQuery(const CQBody& body, const Database& db) {
    free_and_bound_vars(body);
    std::map<std::string, ElementId> slots;
    slots.emplace(body.head_var, 0);
    const auto& vocab = db.vocabulary();
    for (const auto& atom : body.atoms) {
        CompiledAtom ca{};
        int arity = 1;
        if (atom.symbol == kAdom) {
            ca.kind = SymKind::Adom;
        } else if (auto r = vocab.find_register(atom.symbol)) {
            ca.kind = SymKind::Register;
            ca.index = *r;
        } else if (auto e = vocab.find_edb(atom.symbol)) {
            ca.kind = SymKind::Edb;
            ca.index = *e;
            arity = vocab.edb()[*e].arity;
        } else {
            throw Error(ErrorKind::UnknownSymbol, "'" + atom.symbol + "' in rule body");
        }
        if (static_cast<int>(atom.args.size()) != arity)
            throw Error(ErrorKind::Arity, atom.symbol + " takes " + std::to_string(arity) + " argument(s), got " +
                                              std::to_string(atom.args.size()));
        for (const auto& arg : atom.args) {
            if (arg.is_constant) {
                auto id = db.find_element(arg.name);
                if (!id)
                    throw Error(ErrorKind::UnknownSymbol, "constant \"" + arg.name + "\" is not a domain element");
                ca.args.push_back({true, *id});
            } else {
                auto [it, _] = slots.emplace(arg.name, static_cast<ElementId>(slots.size()));
                ca.args.push_back({false, it->second});
            }
        }
        atoms_.push_back(std::move(ca));
    }
    var_count_ = slots.size();
    head_slot_ = 0;
}

// Backtracking join. At each level the pending atom with the most bound
// arguments is joined next.
struct CompiledQuery::Search {
    const CompiledQuery& q;
    const Database& db;
    std::span<const ElementId> regs;
    std::vector<ElementId> binding;
    std::vector<bool> done;
    std::vector<bool> found;    // answers(): head values already produced
    bool stop_on_first = false; // accepts()
    bool success = false;

    ElementId value_of(const Term& t) const { return t.is_constant ? t.value : binding[static_cast<std::size_t>(t.value)]; }

    std::size_t bound_count(const CompiledAtom& a) const {
        std::size_t n = 0;
        for (const auto& t : a.args)
            if (value_of(t) != kBlank)
                ++n;
        return n;
    }

    bool finished() const { return stop_on_first && success; }

    void run(std::size_t remaining) {
        if (finished())
            return;
        ElementId head = binding[q.head_slot_];
        if (!stop_on_first && head != kBlank && found[static_cast<std::size_t>(head)])
            return;
        if (remaining == 0) {
            success = true;
            if (!stop_on_first)
                found[static_cast<std::size_t>(head)] = true;
            return;
        }
        std::size_t pick = q.atoms_.size();
        long best = -1;
        for (std::size_t i = 0; i < q.atoms_.size(); ++i) {
            if (done[i])
                continue;
            const auto& a = q.atoms_[i];
            long score = static_cast<long>(bound_count(a)) * 4;
            if (score / 4 == static_cast<long>(a.args.size()))
                score += 1000; // pure check
            else if (a.kind == SymKind::Register)
                score += 500;  // binds from a single value
            if (score > best) {
                best = score;
                pick = i;
            }
        }
        done[pick] = true;
        join(q.atoms_[pick], remaining);
        done[pick] = false;
    }

    // Try to unify arguments with `tuple`; records newly bound slots.
    bool unify(const CompiledAtom& a, std::span<const ElementId> tuple, std::vector<std::size_t>& newly) {
        for (std::size_t c = 0; c < a.args.size(); ++c) {
            const auto& t = a.args[c];
            ElementId cur = value_of(t);
            if (cur == kBlank) {
                binding[static_cast<std::size_t>(t.value)] = tuple[c];
                newly.push_back(static_cast<std::size_t>(t.value));
            } else if (cur != tuple[c]) {
                return false;
            }
        }
        return true;
    }

    void try_tuple(const CompiledAtom& a, std::span<const ElementId> tuple, std::size_t remaining) {
        std::vector<std::size_t> newly;
        if (unify(a, tuple, newly))
            run(remaining - 1);
        for (auto slot : newly)
            binding[slot] = kBlank;
    }

    void join(const CompiledAtom& a, std::size_t remaining) {
        switch (a.kind) {
        case SymKind::Register: {
            ElementId v = regs[a.index];
            if (v == kBlank)
                return;
            try_tuple(a, std::span<const ElementId>(&v, 1), remaining);
            return;
        }
        case SymKind::Adom: {
            ElementId cur = value_of(a.args[0]);
            if (cur != kBlank) {
                run(remaining - 1);
                return;
            }
            for (ElementId e = 0; static_cast<std::size_t>(e) < db.domain_size() && !finished(); ++e)
                try_tuple(a, std::span<const ElementId>(&e, 1), remaining);
            return;
        }
        case SymKind::Edb: {
            const Relation& rel = db.relation(a.index);
            std::vector<ElementId> probe(a.args.size());
            const std::vector<std::uint32_t>* candidates = nullptr;
            bool all_bound = true;
            for (std::size_t c = 0; c < a.args.size(); ++c) {
                probe[c] = value_of(a.args[c]);
                if (probe[c] == kBlank) {
                    all_bound = false;
                    continue;
                }
                const auto& list = rel.with(static_cast<int>(c), probe[c]);
                if (!candidates || list.size() < candidates->size())
                    candidates = &list;
            }
            if (all_bound) {
                if (rel.contains(probe))
                    run(remaining - 1);
                return;
            }
            if (candidates) {
                for (auto idx : *candidates) {
                    if (finished())
                        return;
                    try_tuple(a, rel.tuples()[idx], remaining);
                }
            } else {
                for (const auto& t : rel.tuples()) {
                    if (finished())
                        return;
                    try_tuple(a, t, remaining);
                }
            }
            return;
        }
        }
    }
};

std::vector<ElementId> CompiledQuery::answers(const Database& db, std::span<const ElementId> regs) const {
    Search s{*this, db, regs, std::vector<ElementId>(var_count_, kBlank), std::vector<bool>(atoms_.size(), false),
             std::vector<bool>(db.domain_size(), false)};
    s.run(atoms_.size());
    std::vector<ElementId> out;
    for (std::size_t e = 0; e < s.found.size(); ++e)
        if (s.found[e])
            out.push_back(static_cast<ElementId>(e));
    return out;
}

bool CompiledQuery::accepts(const Database& db, std::span<const ElementId> regs, ElementId head) const {
    if (head < 0 || static_cast<std::size_t>(head) >= db.domain_size())
        return false;
    Search s{*this, db, regs, std::vector<ElementId>(var_count_, kBlank), std::vector<bool>(atoms_.size(), false), {}};
    s.stop_on_first = true;
    s.binding[head_slot_] = head;
    s.run(atoms_.size());
    return s.success;
}

std::vector<ElementId> evaluate_unary_cq(const CQBody& body, const Structure& s) {
    return CompiledQuery(body, s.db()).answers(s.db(), s.registers());
}

} // namespace promise
