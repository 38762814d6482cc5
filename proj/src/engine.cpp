#include "engine.hpp"

#include "promise/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

namespace promise {

std::string_view to_string(Tri t) {
    switch (t) {
    case Tri::True: return "True";
    case Tri::False: return "False";
    case Tri::Unknown: return "Unknown";
    }
    return "?";
}

// ---- Trace -----------------------------------------------------------------

Trace::Trace(const Structure& input)
    : db_(input.db_ptr()), width_(input.registers().size()), stride_(input.db().domain_size() + 1),
      counts_(width_ * stride_, 0) {
    push(input.registers());
}

Trace::Trace(std::shared_ptr<const Database> db, const TraceKey& key)
    : db_(std::move(db)), width_(db_->register_count()), stride_(db_->domain_size() + 1),
      counts_(width_ * stride_, 0) {
    if (key.first == 0 || key.second.size() != key.first * width_)
        throw Error(ErrorKind::InvalidParams, "trace key does not match the database");
    for (std::size_t i = 0; i < key.first; ++i)
        push({key.second.data() + i * width_, width_});
}

Structure Trace::letter_structure(std::size_t i) const {
    auto l = letter(i);
    return Structure(db_, std::vector<ElementId>(l.begin(), l.end()));
}

void Trace::push(std::span<const ElementId> regs) {
    // regs may alias letters_, so copy before growing
    std::size_t old = letters_.size();
    letters_.resize(old + width_);
    std::copy(regs.begin(), regs.end(), letters_.begin() + static_cast<std::ptrdiff_t>(old));
    for (std::size_t r = 0; r < width_; ++r)
        ++counts_[r * stride_ + static_cast<std::size_t>(letters_[old + r] + 1)];
    ++length_;
}

void Trace::pop() {
    std::size_t start = letters_.size() - width_;
    for (std::size_t r = 0; r < width_; ++r)
        --counts_[r * stride_ + static_cast<std::size_t>(letters_[start + r] + 1)];
    letters_.resize(start);
    --length_;
}

void Trace::truncate(std::size_t length) {
    while (length_ > length)
        pop();
}

// ---- bounds ----------------------------------------------------------------

namespace {

std::size_t saturating_pow(std::size_t base, int exp) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max() / 4;
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && out > kMax / base)
            return kMax;
        out *= base;
    }
    return out;
}

std::uint64_t default_node_budget() {
    if (const char* env = std::getenv("PROMISE_MAX_NODES")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end != env && v > 0)
            return v;
    }
    return 400'000'000ULL;
}

} // namespace

Bounds resolve_bounds(const SearchConfig& cfg, std::size_t n, const Term& core) {
    if (cfg.k < 0)
        throw Error(ErrorKind::InvalidParams, "k must be non-negative");
    Bounds b;
    b.trace_cap = cfg.max_trace_length.value_or(saturating_pow(n + 1, cfg.k) + 1);
    if (b.trace_cap < 1)
        throw Error(ErrorKind::InvalidParams, "max_trace_length must be at least 1");
    if (cfg.max_witness_length)
        b.witness_cap = *cfg.max_witness_length;
    else if (cfg.max_trace_length)
        b.witness_cap = *cfg.max_trace_length - 1;
    else
        b.witness_cap = saturating_pow(n, cfg.k);
    b.witness_cap = std::min(b.witness_cap, b.trace_cap - 1);
    b.depth_cap = cfg.max_antidomain_depth.value_or(antidomain_depth(core));
    b.node_cap = cfg.max_nodes.value_or(default_node_budget());
    return b;
}

// ---- BoundProgram ----------------------------------------------------------

BoundProgram::BoundProgram(const Program& p, std::shared_ptr<const Database> db) : db_(std::move(db)) {
    if (!p.vocabulary.compatible_with(db_->vocabulary()))
        throw Error(ErrorKind::VocabularyMismatch, "structure vocabulary differs from the program's declarations");
    for (const auto& [name, def] : p.modules) {
        module_names_.push_back(name);
        modules_.emplace_back(def, *db_);
    }
    // Fixed unary sets; equal sets share a code.
    std::map<std::vector<ElementId>, ElementId> multi;
    auto code_of = [&](std::vector<ElementId> set) -> ElementId {
        if (set.empty())
            return kBlank;
        if (set.size() == 1)
            return set[0];
        auto [it, fresh] = multi.emplace(std::move(set), -2 - static_cast<ElementId>(multi.size()));
        return it->second;
    };
    const auto& edb = db_->vocabulary().edb();
    for (std::size_t i = 0; i < edb.size(); ++i) {
        if (edb[i].arity != 1)
            continue;
        std::vector<ElementId> set;
        for (const auto& t : db_->relation(i).tuples())
            set.push_back(t[0]);
        constant_codes_.emplace_back(edb[i].name, code_of(std::move(set)));
    }
    std::vector<ElementId> all(db_->domain_size());
    for (std::size_t e = 0; e < all.size(); ++e)
        all[e] = static_cast<ElementId>(e);
    constant_codes_.emplace_back(std::string(kAdom), code_of(std::move(all)));
}

std::optional<std::size_t> BoundProgram::find_module(std::string_view name) const {
    for (std::size_t i = 0; i < module_names_.size(); ++i)
        if (module_names_[i] == name)
            return i;
    return std::nullopt;
}

UnarySym BoundProgram::resolve_unary(std::string_view name) const {
    const auto& v = db_->vocabulary();
    if (auto r = v.find_register(name))
        return {true, *r, kBlank};
    for (const auto& [sym, code] : constant_codes_)
        if (sym == name)
            return {false, 0, code};
    if (v.declares(name))
        throw Error(ErrorKind::NonUnarySymbolInTest, std::string(name) + " is not unary");
    throw Error(ErrorKind::UnknownSymbol, "undeclared symbol " + std::string(name));
}

int BoundProgram::add_term(const Term& t) {
    if (!is_core(t)) {
        auto core = desugar(std::make_shared<Term>(t));
        return add_term(*core);
    }
    Node n;
    n.op = t.op;
    switch (t.op) {
    case TermOp::Module: {
        auto m = find_module(t.name);
        if (!m)
            throw Error(ErrorKind::UnknownModule, "no module named " + t.name);
        n.module = *m;
        break;
    }
    case TermOp::Eq:
    case TermOp::BG:
        n.p = resolve_unary(t.p);
        n.q = resolve_unary(t.q);
        break;
    default:
        if (!t.kids.empty())
            n.a = add_term(*t.kids[0]);
        if (t.kids.size() > 1)
            n.b = add_term(*t.kids[1]);
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

// ---- engine ----------------------------------------------------------------

namespace detail {

namespace {

ElementId code_at(const UnarySym& s, std::span<const ElementId> letter) {
    return s.is_register ? letter[s.reg] : s.code;
}

} // namespace

bool test_eq(const BoundProgram::Node& n, const Trace& tr) {
    auto last = tr.last();
    return code_at(n.p, last) == code_at(n.q, last);
}

bool test_bg(const BoundProgram::Node& n, const Trace& tr) {
    if (tr.length() == 1)
        return true;
    auto last = tr.last();
    ElementId pc = code_at(n.p, last);
    if (!n.q.is_register)
        return n.q.code != pc;
    if (pc < kBlank)
        return true; // a register never holds a multi-element set
    std::size_t earlier = tr.occurrences(n.q.reg, pc) - (last[n.q.reg] == pc ? 1 : 0);
    return earlier == 0;
}

bool Engine::run(int id, Scope& sc, Cont k) {
    if (++nodes_ > bounds_.node_cap) {
        exhausted_ = true;
        return true;
    }
    const auto& n = bp_.node(id);
    switch (n.op) {
    case TermOp::Id:
        return k();
    case TermOp::Module: {
        const auto& cm = bp_.module(n.module);
        std::vector<ElementId> base(tr_.last().begin(), tr_.last().end());
        std::vector<ElementId> next;
        bool capped = false;
        bool stop = cm.for_each_choice(bp_.db(), base, [&](std::span<const ElementId> values) {
            if (tr_.length() >= bounds_.trace_cap) {
                capped = true;
                return true;
            }
            next = base;
            cm.apply(next, values);
            tr_.push(next);
            if (sc.main)
                choices.emplace_back(n.module, std::vector<ElementId>(values.begin(), values.end()));
            bool r = k();
            if (sc.main)
                choices.pop_back();
            tr_.pop();
            return r;
        });
        if (capped) {
            sc.bound_hit = true;
            return false;
        }
        return stop;
    }
    case TermOp::Seq:
        return run(n.a, sc, [&] { return run(n.b, sc, k); });
    case TermOp::PrefUnion: {
        Scope left{false, sc.depth, sc.main};
        bool reached = false;
        bool stop = run(n.a, left, [&] {
            reached = true;
            return k();
        });
        if (stop)
            return true;
        if (reached) {
            sc.bound_hit |= left.bound_hit;
            return false;
        }
        if (left.bound_hit) {
            sc.bound_hit = true;
            return false;
        }
        return run(n.b, sc, k);
    }
    case TermOp::AntiDomain: {
        auto d = defined(n.a, sc.depth + 1);
        if (exhausted_)
            return true;
        if (d == Tri::Unknown) {
            sc.bound_hit = true;
            return false;
        }
        return d == Tri::False ? k() : false;
    }
    case TermOp::MaxIterate: {
        LetterSet milestones;
        milestones.emplace(tr_.last().begin(), tr_.last().end());
        return iterate(n.a, sc, k, milestones);
    }
    case TermOp::Eq:
        return test_eq(n, tr_) ? k() : false;
    case TermOp::BG:
        return test_bg(n, tr_) ? k() : false;
    default:
        throw Error(ErrorKind::Syntax, "non-core node reached the engine");
    }
}

bool Engine::iterate(int body, Scope& sc, Cont k, LetterSet& milestones) {
    Scope step{false, sc.depth, sc.main};
    bool any = false;
    bool stop = run(body, step, [&] {
        any = true;
        std::vector<ElementId> cur(tr_.last().begin(), tr_.last().end());
        auto [it, fresh] = milestones.insert(std::move(cur));
        if (!fresh)
            return false; // would revisit a boundary letter
        bool r = iterate(body, sc, k, milestones);
        milestones.erase(it);
        return r;
    });
    if (stop)
        return true;
    if (any) {
        sc.bound_hit |= step.bound_hit;
        return false;
    }
    if (step.bound_hit) {
        sc.bound_hit = true;
        return false;
    }
    return k();
}

Tri Engine::defined(int id, int depth) {
    if (depth > bounds_.depth_cap)
        return Tri::Unknown;
    Scope inner{false, depth, false};
    bool found = run(id, inner, [] { return true; });
    if (exhausted_)
        return Tri::Unknown;
    if (found)
        return Tri::True;
    return inner.bound_hit ? Tri::Unknown : Tri::False;
}

} // namespace detail

} // namespace promise
