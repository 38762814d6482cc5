#include "promise/equivalence.hpp"

#include "promise/error.hpp"

#include <map>

namespace promise {

namespace {

using Letter = std::vector<ElementId>;
using Set = std::set<TraceKey>;

/// Direct recursion over materialized trace sets; shares nothing with the
/// search engine except module compilation.
class Denotation {
public:
    Denotation(const Program& p, std::shared_ptr<const Database> db, std::size_t cap)
        : db_(std::move(db)), width_(db_->register_count()), cap_(cap) {
        for (const auto& [name, def] : p.modules)
            modules_.emplace(name, CompiledModule(def, *db_));
    }

    std::optional<Set> eval(const Term& t, const TraceKey& s) {
        switch (t.op) {
        case TermOp::Id:
            return Set{s};
        case TermOp::Module: {
            auto it = modules_.find(t.name);
            if (it == modules_.end())
                throw Error(ErrorKind::UnknownModule, "no module named " + t.name);
            Letter base = last(s);
            Set out;
            bool capped = false;
            it->second.for_each_choice(*db_, base, [&](std::span<const ElementId> values) {
                if (s.first >= cap_) {
                    capped = true;
                    return true;
                }
                Letter next = base;
                it->second.apply(next, values);
                TraceKey ext = s;
                ++ext.first;
                ext.second.insert(ext.second.end(), next.begin(), next.end());
                out.insert(std::move(ext));
                return false;
            });
            if (capped)
                return std::nullopt;
            return out;
        }
        case TermOp::Seq: {
            auto first = eval(*t.kids[0], s);
            if (!first)
                return std::nullopt;
            Set out;
            for (const auto& mid : *first) {
                auto rest = eval(*t.kids[1], mid);
                if (!rest)
                    return std::nullopt;
                out.insert(rest->begin(), rest->end());
            }
            return out;
        }
        case TermOp::PrefUnion: {
            auto left = eval(*t.kids[0], s);
            if (!left || !left->empty())
                return left;
            return eval(*t.kids[1], s);
        }
        case TermOp::AntiDomain: {
            auto inner = eval(*t.kids[0], s);
            if (!inner)
                return std::nullopt;
            return inner->empty() ? Set{s} : Set{};
        }
        case TermOp::MaxIterate:
            return iterate(*t.kids[0], s);
        case TermOp::Eq: {
            auto i = s.first - 1;
            return interpretation(t.p, s, i) == interpretation(t.q, s, i) ? Set{s} : Set{};
        }
        case TermOp::BG: {
            auto now = interpretation(t.p, s, s.first - 1);
            for (std::size_t l = 0; l + 1 < s.first; ++l)
                if (interpretation(t.q, s, l) == now)
                    return Set{};
            return Set{s};
        }
        default:
            return eval(*desugar(std::make_shared<Term>(t)), s);
        }
    }

private:
    Letter last(const TraceKey& s) const {
        auto start = s.second.begin() + static_cast<std::ptrdiff_t>((s.first - 1) * width_);
        return Letter(start, start + static_cast<std::ptrdiff_t>(width_));
    }

    std::set<ElementId> interpretation(const std::string& sym, const TraceKey& s, std::size_t i) const {
        const auto& v = db_->vocabulary();
        std::set<ElementId> out;
        if (auto r = v.find_register(sym)) {
            ElementId e = s.second[i * width_ + *r];
            if (e != kBlank)
                out.insert(e);
        } else if (auto e = v.find_edb(sym)) {
            if (v.edb()[*e].arity != 1)
                throw Error(ErrorKind::NonUnarySymbolInTest, sym + " is not unary");
            for (const auto& tup : db_->relation(*e).tuples())
                out.insert(tup[0]);
        } else if (sym == kAdom) {
            for (std::size_t d = 0; d < db_->domain_size(); ++d)
                out.insert(static_cast<ElementId>(d));
        } else {
            throw Error(ErrorKind::UnknownSymbol, "undeclared symbol " + sym);
        }
        return out;
    }

    // Breadth-first over (trace, boundary letters) pairs; a pair whose body
    // has no extension is a result.
    std::optional<Set> iterate(const Term& body, const TraceKey& s) {
        using State = std::pair<TraceKey, std::set<Letter>>;
        std::set<State> frontier{{s, {last(s)}}};
        Set out;
        while (!frontier.empty()) {
            std::set<State> next;
            for (const auto& [trace, seen] : frontier) {
                auto ext = eval(body, trace);
                if (!ext)
                    return std::nullopt;
                if (ext->empty()) {
                    out.insert(trace);
                    continue;
                }
                for (const auto& e : *ext) {
                    auto l = last(e);
                    if (seen.count(l))
                        continue;
                    auto grown = seen;
                    grown.insert(l);
                    next.emplace(e, std::move(grown));
                }
            }
            frontier = std::move(next);
        }
        return out;
    }

    std::shared_ptr<const Database> db_;
    std::size_t width_;
    std::size_t cap_;
    std::map<std::string, CompiledModule> modules_;
};

std::size_t trace_cap(const SearchConfig& cfg, const Trace& s, const Term& t) {
    return resolve_bounds(cfg, s.db().domain_size(), t).trace_cap;
}

template <class Compare>
EquivalenceReport compare(const Program& p, const TermPtr& t, const TermPtr& g, const std::vector<Trace>& bases,
                          const SearchConfig& cfg, Compare same) {
    EquivalenceReport r;
    bool unknown = false;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        r.trace_cap = trace_cap(cfg, bases[i], *t);
        auto a = denotational_deltas(p, t, bases[i], cfg);
        auto b = denotational_deltas(p, g, bases[i], cfg);
        if (a && b && (a->extensions.empty() || b->extensions.empty() || !same(*a, *b))) {
            r.verdict = Tri::False;
            r.counterexample = i;
            return r;
        }
        if (!a || !b)
            unknown = true;
    }
    r.verdict = unknown ? Tri::Unknown : Tri::True;
    return r;
}

} // namespace

std::optional<DeltaSet> denotational_deltas(const Program& p, const TermPtr& core, const Trace& s,
                                            const SearchConfig& cfg) {
    Denotation d(p, s.db_ptr(), trace_cap(cfg, s, *core));
    auto base = s.key();
    auto out = d.eval(*core, base);
    if (!out)
        return std::nullopt;
    return DeltaSet{base, std::move(*out)};
}

Tri is_defined(const Program& p, const TermPtr& t, const Trace& s, const SearchConfig& cfg) {
    auto d = denotational_deltas(p, t, s, cfg);
    if (!d)
        return Tri::Unknown;
    return d->extensions.empty() ? Tri::False : Tri::True;
}

EquivalenceReport strongly_equivalent(const Program& p, const TermPtr& t, const TermPtr& g,
                                      const std::vector<Trace>& bases, const SearchConfig& cfg) {
    return compare(p, t, g, bases, cfg, [](const DeltaSet& a, const DeltaSet& b) { return a.extensions == b.extensions; });
}

EquivalenceReport before_after_equivalent(const Program& p, const TermPtr& t, const TermPtr& g,
                                          const std::vector<Trace>& bases, const SearchConfig& cfg) {
    auto endpoints = [](const DeltaSet& d) {
        std::set<std::pair<std::vector<ElementId>, std::vector<ElementId>>> out;
        auto width = d.base.first ? d.base.second.size() / d.base.first : 0;
        std::vector<ElementId> start(d.base.second.end() - static_cast<std::ptrdiff_t>(width), d.base.second.end());
        for (const auto& e : d.extensions)
            out.emplace(start, std::vector<ElementId>(e.second.end() - static_cast<std::ptrdiff_t>(width),
                                                      e.second.end()));
        return out;
    };
    return compare(p, t, g, bases, cfg,
                   [&](const DeltaSet& a, const DeltaSet& b) { return endpoints(a) == endpoints(b); });
}

} // namespace promise
