#include "promise/evaluator.hpp"

#include "engine.hpp"
#include "promise/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>

namespace promise {

using detail::Engine;
using detail::Scope;

std::string_view to_string(VerdictKind v) {
    switch (v) {
    case VerdictKind::Yes: return "yes";
    case VerdictKind::No: return "no";
    case VerdictKind::BoundExceeded: return "bound-exceeded";
    }
    return "?";
}

std::string_view to_string(VerifyFailure f) {
    switch (f) {
    case VerifyFailure::None: return "ok";
    case VerifyFailure::HashMismatch: return "hash mismatch";
    case VerifyFailure::ChoiceMismatch: return "choice mismatch";
    case VerifyFailure::DerivationFailed: return "derivation failed";
    case VerifyFailure::UnconsumedChoices: return "unconsumed choices";
    case VerifyFailure::LengthMismatch: return "final length mismatch";
    case VerifyFailure::LengthBound: return "witness longer than n^k";
    case VerifyFailure::Undecided: return "a nested test was undecided within bounds";
    }
    return "?";
}

namespace {

struct Setup {
    BoundProgram bp;
    int root;
    Bounds bounds;

    Setup(const Program& p, const std::shared_ptr<const Database>& db, const TermPtr& t, const SearchConfig& cfg)
        : bp(p, db), root(bp.add_term(*desugar(t))),
          bounds(resolve_bounds(cfg, db->domain_size(), *desugar(t))) {}
};

Structure check_input(const Program& p, const Structure& input) {
    check_vocabulary(p, input);
    return input;
}

} // namespace

DeltaResult eval_deltas(const Program& p, const TermPtr& core, const Trace& s, const SearchConfig& cfg) {
    Setup st(p, s.db_ptr(), core, cfg);
    Trace tr = s;
    Engine eng(st.bp, tr, st.bounds);
    Scope sc;
    DeltaResult out;
    eng.run(st.root, sc, [&] {
        out.extensions.insert(tr.key());
        return false;
    });
    out.complete = !sc.bound_hit && !eng.exhausted();
    return out;
}

Tri holds_antidomain(const Program& p, const TermPtr& core, const Trace& s, const SearchConfig& cfg) {
    Setup st(p, s.db_ptr(), make_anti(core), cfg);
    Trace tr = s;
    Engine eng(st.bp, tr, st.bounds);
    auto d = eng.defined(st.bp.node(st.root).a, 1);
    switch (d) {
    case Tri::True: return Tri::False;
    case Tri::False: return Tri::True;
    default: return Tri::Unknown;
    }
}

namespace {

BoundProgram::Node test_node(TermOp op, std::string_view p, std::string_view q, const Trace& s) {
    Program empty;
    empty.vocabulary = s.db().vocabulary();
    BoundProgram bp(empty, s.db_ptr());
    BoundProgram::Node n;
    n.op = op;
    n.p = bp.resolve_unary(p);
    n.q = bp.resolve_unary(q);
    return n;
}

} // namespace

bool check_eq(std::string_view p, std::string_view q, const Trace& s) {
    return detail::test_eq(test_node(TermOp::Eq, p, q, s), s);
}

bool check_bg(std::string_view p, std::string_view q, const Trace& s) {
    return detail::test_bg(test_node(TermOp::BG, p, q, s), s);
}

namespace {

Witness make_witness(const BoundProgram& bp, const Engine& eng, const Trace& tr, int k) {
    Witness w;
    w.k = k;
    w.final_length = tr.length();
    for (const auto& [m, values] : eng.choices)
        w.choices.push_back(bp.module(m).to_choice(bp.db(), values));
    return w;
}

} // namespace

Verdict run_main_task(const Program& p, const Structure& input, const SearchConfig& cfg) {
    Setup st(p, check_input(p, input).db_ptr(), p.main, cfg);
    Trace tr(input);
    Engine eng(st.bp, tr, st.bounds);
    Scope sc{false, 0, true};
    Verdict v;
    v.bounds = st.bounds;
    bool found = eng.run(st.root, sc, [&] {
        if (tr.length() - 1 > st.bounds.witness_cap) {
            sc.bound_hit = true;
            return false;
        }
        v.witness = make_witness(st.bp, eng, tr, cfg.k);
        return true;
    });
    v.nodes = eng.nodes();
    if (found && v.witness)
        v.kind = VerdictKind::Yes;
    else if (eng.exhausted() || sc.bound_hit)
        v.kind = VerdictKind::BoundExceeded;
    else
        v.kind = VerdictKind::No;
    if (v.kind != VerdictKind::Yes)
        v.witness.reset();
    return v;
}

std::vector<Witness> enumerate_witnesses(const Program& p, const Structure& input, const SearchConfig& cfg) {
    Setup st(p, check_input(p, input).db_ptr(), p.main, cfg);
    Trace tr(input);
    Engine eng(st.bp, tr, st.bounds);
    Scope sc{false, 0, true};
    std::vector<Witness> out;
    std::set<TraceKey> seen;
    if (cfg.witness_limit == 0)
        return out;
    eng.run(st.root, sc, [&] {
        if (tr.length() - 1 > st.bounds.witness_cap)
            return false;
        if (seen.insert(tr.key()).second)
            out.push_back(make_witness(st.bp, eng, tr, cfg.k));
        return out.size() >= cfg.witness_limit;
    });
    return out;
}

std::size_t witness_length(const Witness& w) { return w.final_length == 0 ? 0 : w.final_length - 1; }

// ---- replay ----------------------------------------------------------------

namespace {

class Replayer {
public:
    Replayer(const BoundProgram& bp, const Structure& input, const Witness& w, const Bounds& bounds)
        : bp_(bp), tr_(input), w_(w), bounds_(bounds), eng_(bp, tr_, bounds_) {
        for (const auto& c : w.choices) {
            auto m = bp.find_module(c.module);
            std::optional<std::vector<ElementId>> values;
            if (m) {
                try {
                    values = bp.module(*m).values_of(bp.db(), c);
                } catch (const Error&) {
                }
            }
            steps_.push_back({m, std::move(values)});
        }
    }

    VerifyResult run(int root) {
        VerifyResult r;
        if (!replay(root, 0)) {
            r.failure = failure_;
            r.detail = detail_;
            return r;
        }
        if (next_ != steps_.size())
            r.failure = VerifyFailure::UnconsumedChoices;
        else if (tr_.length() != w_.final_length)
            r.failure = VerifyFailure::LengthMismatch;
        else if (witness_length(w_) > bounds_.witness_cap)
            r.failure = VerifyFailure::LengthBound;
        else
            r.ok = true;
        if (!r.ok)
            r.detail = std::string(to_string(r.failure));
        return r;
    }

private:
    struct Step {
        std::optional<std::size_t> module;
        std::optional<std::vector<ElementId>> values;
    };

    bool fail(VerifyFailure f, std::string detail) {
        failure_ = f;
        detail_ = std::move(detail);
        return false;
    }

    /// True iff `node` has no extension here; false on a found extension or
    /// an undecided search.
    bool undefined_here(int node, int depth) {
        auto d = eng_.defined(node, depth + 1);
        if (d == Tri::Unknown)
            return fail(VerifyFailure::Undecided, "nested test undecided at letter " + std::to_string(tr_.length()));
        return d == Tri::False;
    }

    bool replay(int id, int depth) {
        const auto& n = bp_.node(id);
        switch (n.op) {
        case TermOp::Id:
            return true;
        case TermOp::Module: {
            const auto& cm = bp_.module(n.module);
            if (next_ >= steps_.size())
                return fail(VerifyFailure::DerivationFailed, "ran out of choices at module " + cm.name());
            const auto& step = steps_[next_];
            std::string where = "choice " + std::to_string(next_) + " (" + cm.name() + ")";
            if (step.module != n.module)
                return fail(VerifyFailure::ChoiceMismatch, where + " names module " + w_.choices[next_].module);
            if (!step.values)
                return fail(VerifyFailure::ChoiceMismatch, where + " has a malformed assignment");
            if (!cm.accepts(bp_.db(), tr_.last(), *step.values))
                return fail(VerifyFailure::ChoiceMismatch, where + " is outside the answer set");
            if (tr_.length() >= bounds_.trace_cap)
                return fail(VerifyFailure::LengthBound, where + " exceeds the trace bound");
            std::vector<ElementId> next(tr_.last().begin(), tr_.last().end());
            cm.apply(next, *step.values);
            tr_.push(next);
            ++next_;
            return true;
        }
        case TermOp::Seq:
            return replay(n.a, depth) && replay(n.b, depth);
        case TermOp::PrefUnion: {
            auto saved_next = next_;
            auto saved_len = tr_.length();
            if (replay(n.a, depth))
                return true;
            next_ = saved_next;
            tr_.truncate(saved_len);
            return undefined_here(n.a, depth) && replay(n.b, depth);
        }
        case TermOp::AntiDomain:
            if (!undefined_here(n.a, depth))
                return failure_ == VerifyFailure::Undecided ? false
                                                            : fail(VerifyFailure::DerivationFailed, "anti-domain test failed");
            return true;
        case TermOp::MaxIterate: {
            detail::LetterSet milestones;
            milestones.emplace(tr_.last().begin(), tr_.last().end());
            while (true) {
                auto saved_next = next_;
                auto saved_len = tr_.length();
                if (replay(n.a, depth)) {
                    if (!milestones.emplace(tr_.last().begin(), tr_.last().end()).second)
                        return fail(VerifyFailure::DerivationFailed, "iterate revisits a boundary letter");
                    continue;
                }
                next_ = saved_next;
                tr_.truncate(saved_len);
                return undefined_here(n.a, depth);
            }
        }
        case TermOp::Eq:
            return detail::test_eq(n, tr_) || fail(VerifyFailure::DerivationFailed, "equality test failed");
        case TermOp::BG:
            return detail::test_bg(n, tr_) || fail(VerifyFailure::DerivationFailed, "history test failed");
        default:
            return fail(VerifyFailure::DerivationFailed, "non-core node");
        }
    }

    const BoundProgram& bp_;
    Trace tr_;
    const Witness& w_;
    Bounds bounds_;
    Engine eng_;
    std::vector<Step> steps_;
    std::size_t next_ = 0;
    VerifyFailure failure_ = VerifyFailure::DerivationFailed;
    std::string detail_;
};

} // namespace

VerifyResult verify_witness(const Program& p, const Structure& input, const Witness& w) {
    check_vocabulary(p, input);
    SearchConfig cfg;
    cfg.k = w.k;
    Setup st(p, input.db_ptr(), p.main, cfg);
    Replayer r(st.bp, input, w, st.bounds);
    return r.run(st.root);
}

// ---- witness files ---------------------------------------------------------

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::Io, "SHA-256 failed");
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

std::string witness_to_json(const Witness& w, std::string_view program_text, std::string_view structure_text) {
    nlohmann::json j;
    j["program"] = sha256_hex(program_text);
    j["input"] = sha256_hex(structure_text);
    j["k"] = w.k;
    j["final_length"] = w.final_length;
    j["choices"] = nlohmann::json::array();
    for (const auto& c : w.choices)
        j["choices"].push_back({{"module", c.module}, {"assignment", c.assignment}});
    return j.dump(2) + "\n";
}

WitnessFile witness_from_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        WitnessFile f;
        f.program_hash = j.at("program").get<std::string>();
        f.input_hash = j.at("input").get<std::string>();
        f.witness.k = j.at("k").get<int>();
        f.witness.final_length = j.at("final_length").get<std::size_t>();
        for (const auto& c : j.at("choices")) {
            Choice ch;
            ch.module = c.at("module").get<std::string>();
            ch.assignment = c.at("assignment").get<std::map<std::string, std::string>>();
            f.witness.choices.push_back(std::move(ch));
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Syntax, std::string("witness file: ") + e.what());
    }
}

VerifyResult verify_witness_file(std::string_view program_text, std::string_view structure_text,
                                 std::string_view witness_json) {
    auto f = witness_from_json(witness_json);
    VerifyResult r;
    if (f.program_hash != sha256_hex(program_text)) {
        r.failure = VerifyFailure::HashMismatch;
        r.detail = "program hash does not match the witness";
        return r;
    }
    if (f.input_hash != sha256_hex(structure_text)) {
        r.failure = VerifyFailure::HashMismatch;
        r.detail = "input hash does not match the witness";
        return r;
    }
    auto p = parse_program(program_text);
    auto s = parse_structure(structure_text);
    return verify_witness(p, s, f.witness);
}

} // namespace promise
