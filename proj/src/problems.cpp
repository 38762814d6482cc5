#include "promise/problems.hpp"

#include "promise/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace promise {

namespace {

const std::string kSizeFour = R"(# Yes iff the domain has exactly four elements.
reg P

module GuessP { P(x) <~ adom(x) }

# pick an element P has never held
define GuessNewP = GuessP ; BG(P != P)

term: pow(GuessNewP, 4) ; ~GuessNewP
)";

const std::string kSameSize = R"(# Yes iff the unary relations P and Q have the same number of elements.
edb P 1
edb Q 1
reg PickP PickQ

module PickPQ {
  PickP(x) <~ P(x)
  PickQ(x) <~ Q(x)
}
module PickOneP { PickP(x) <~ P(x) }
module PickOneQ { PickQ(x) <~ Q(x) }

# pair an unused element of P with an unused element of Q
define GuessNewPair = PickPQ ; BG(PickP != PickP) ; BG(PickQ != PickQ)

# after maximal pairing, neither side may have an unused element left
term: (GuessNewPair)^ ; ~(PickOneP ; BG(PickP != PickP)) ; ~(PickOneQ ; BG(PickQ != PickQ))
)";

const std::string kEven = R"(# Yes iff the domain has an even number of elements.
reg P O E

module GuessP { P(x) <~ adom(x) }
module CopyPO { O(x) <~ P(x) }
module CopyPE { E(x) <~ P(x) }

define GuessNewO = GuessP ; BG(P != E) ; BG(P != O) ; CopyPO
define GuessNewE = GuessP ; BG(P != E) ; BG(P != O) ; CopyPE

term: (GuessNewO ; GuessNewE)^ ; ~GuessNewO
)";

const std::string kStConn = R"(# Yes iff the node in T is reachable from the node in S along E.
edb E 2
edb S 1
edb T 1
reg Reach Reach'

module M_base_case { Reach(x) <~ S(x) }
module M_ind_case { Reach'(y) <~ Reach(x), E(x, y) }
module Copy { Reach(x) <~ Reach'(x) }

# The loop takes at least one step, so S = T is answered by the first test.
term: M_base_case ;
  (Reach == T <+
   repeat (M_ind_case ; BG(Reach' != Reach)) ; Copy
   until Reach == T)
)";

const std::string kSameGen = R"(# Yes iff the nodes in A and B have the same depth in the tree.
# E holds (parent, child) edges, so each step moves both markers up.
edb E 2
edb Root 1
edb A 1
edb B 1
reg Reach_A Reach_B Reach_A' Reach_B'

module M_base_case {
  Reach_A(x) <~ A(x)
  Reach_B(x) <~ B(x)
}
module M_ind_case {
  Reach_A'(x) <~ Reach_A(y), E(x, y)
  Reach_B'(v) <~ Reach_B(w), E(v, w)
}
module Copy {
  Reach_A(x) <~ Reach_A'(x)
  Reach_B(x) <~ Reach_B'(x)
}

# The loop takes at least one step, so A and B both at Root is handled first.
term: M_base_case ;
  ((Reach_A == Root ; Reach_B == Root) <+
   repeat M_ind_case ; Copy
   until (Reach_A == Root ; Reach_B == Root))
)";

const std::string kMod2 = R"(# Yes iff the system of mod-2 equations is solvable.
# Eq0(x,y,z) encodes x+y+z = 0 and Eq1(x,y,z) encodes x+y+z = 1 over the
# variables in Var. Bit holds two truth elements, High the one meaning 1.
# Each variable is labelled once, through One or Zero, and the label is read
# back from the history of those registers.
edb Var 1
edb Bit 1
edb High 1
edb Eq0 3
edb Eq1 3
reg X B One Zero First Second Third

module PickVar { X(x) <~ Var(x) }
module GuessBit { B(x) <~ Bit(x) }
module SetOne { One(x) <~ X(x) }
module SetZero { Zero(x) <~ X(x) }

module PickFirst0 { First(x) <~ Eq0(x, y, z) }
module PickSecond0 { Second(y) <~ First(x), Eq0(x, y, z) }
module PickThird0 { Third(z) <~ First(x), Second(y), Eq0(x, y, z) }
module PickFirst1 { First(x) <~ Eq1(x, y, z) }
module PickSecond1 { Second(y) <~ First(x), Eq1(x, y, z) }
module PickThird1 { Third(z) <~ First(x), Second(y), Eq1(x, y, z) }

define NewVar = PickVar ; BG(X != X)
define Label = GuessBit ; if B == High then SetOne else SetZero

# the variable in First (Second, Third) was labelled 1 / 0
define I1 = ~BG(First != One)
define N1 = BG(First != One)
define I2 = ~BG(Second != One)
define N2 = BG(Second != One)
define I3 = ~BG(Third != One)
define N3 = BG(Third != One)

define Odd = (I1 ; I2 ; I3) <+ (I1 ; N2 ; N3) <+ (N1 ; I2 ; N3) <+ (N1 ; N2 ; I3)
define Even = (N1 ; N2 ; N3) <+ (N1 ; I2 ; I3) <+ (I1 ; N2 ; I3) <+ (I1 ; I2 ; N3)

define PickEq0 = PickFirst0 ; PickSecond0 ; PickThird0
define PickEq1 = PickFirst1 ; PickSecond1 ; PickThird1

# label every variable, then no equation may be violated
term: repeat NewVar ; Label until ~NewVar ;
  ~(PickEq0 ; Odd) ;
  ~(PickEq1 ; Even)
)";

struct Entry {
    ProblemId id;
    std::string_view name;
    const std::string* text;
};

const std::array<Entry, 6> kEntries = {{
    {ProblemId::SizeFour, "size-four", &kSizeFour},
    {ProblemId::SameSize, "same-size", &kSameSize},
    {ProblemId::Even, "even", &kEven},
    {ProblemId::StConnectivity, "st-conn", &kStConn},
    {ProblemId::SameGeneration, "same-gen", &kSameGen},
    {ProblemId::Mod2LinEq, "mod2", &kMod2},
}};

const Entry& entry(ProblemId id) {
    for (const auto& e : kEntries)
        if (e.id == id)
            return e;
    throw Error(ErrorKind::InvalidParams, "unknown problem");
}

std::string element(std::string_view prefix, std::size_t i) { return std::string(prefix) + std::to_string(i); }

void domain_line(std::ostringstream& out, std::string_view prefix, std::size_t n) {
    out << "domain";
    for (std::size_t i = 0; i < n; ++i)
        out << ' ' << element(prefix, i);
    out << '\n';
}

void unary_block(std::ostringstream& out, std::string_view name, std::string_view prefix,
                 const std::vector<std::size_t>& members) {
    out << "edb " << name << " 1\n";
    for (auto m : members)
        out << ' ' << element(prefix, m) << '\n';
}

void registers_line(std::ostringstream& out, ProblemId id) {
    const auto& v = build_program(id).vocabulary;
    out << "reg";
    for (const auto& r : v.registers())
        out << ' ' << r;
    out << '\n';
}

void require(bool ok, const std::string& what) {
    if (!ok)
        throw Error(ErrorKind::InvalidParams, what);
}

std::vector<std::size_t> unary_members(const Structure& s, std::string_view name) {
    auto e = s.vocabulary().find_edb(name);
    std::vector<std::size_t> out;
    for (const auto& t : s.db().relation(*e).tuples())
        out.push_back(static_cast<std::size_t>(t[0]));
    return out;
}

std::size_t singleton(const Structure& s, std::string_view name) {
    auto m = unary_members(s, name);
    if (m.size() != 1)
        throw Error(ErrorKind::SignatureMismatch, std::string(name) + " is not a singleton");
    return m[0];
}

bool reachable(const Structure& s) {
    auto from = singleton(s, "S");
    auto to = singleton(s, "T");
    std::vector<std::vector<std::size_t>> adj(s.db().domain_size());
    for (const auto& t : s.db().relation(*s.vocabulary().find_edb("E")).tuples())
        adj[static_cast<std::size_t>(t[0])].push_back(static_cast<std::size_t>(t[1]));
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        if (u == to)
            return true;
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
    }
    return false;
}

bool same_depth(const Structure& s) {
    std::map<std::size_t, std::size_t> parent;
    for (const auto& t : s.db().relation(*s.vocabulary().find_edb("E")).tuples())
        parent[static_cast<std::size_t>(t[1])] = static_cast<std::size_t>(t[0]);
    auto root = singleton(s, "Root");
    auto depth = [&](std::size_t v) {
        std::size_t d = 0;
        while (v != root) {
            auto it = parent.find(v);
            if (it == parent.end() || d > parent.size())
                throw Error(ErrorKind::SignatureMismatch, "E is not a tree towards Root");
            v = it->second;
            ++d;
        }
        return d;
    };
    return depth(singleton(s, "A")) == depth(singleton(s, "B"));
}

bool solvable(const Structure& s) {
    auto vars = unary_members(s, "Var");
    std::vector<std::pair<std::vector<ElementId>, int>> eqs;
    for (int parity : {0, 1})
        for (const auto& t : s.db().relation(*s.vocabulary().find_edb(parity ? "Eq1" : "Eq0")).tuples())
            eqs.emplace_back(t, parity);
    std::vector<int> value(s.db().domain_size(), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            value[vars[i]] = static_cast<int>((mask >> i) & 1U);
        bool ok = std::all_of(eqs.begin(), eqs.end(), [&](const auto& eq) {
            int sum = 0;
            for (auto v : eq.first)
                sum ^= value[static_cast<std::size_t>(v)];
            return sum == eq.second;
        });
        if (ok)
            return true;
    }
    return false;
}

} // namespace

const std::vector<ProblemId>& all_problems() {
    static const std::vector<ProblemId> all = {ProblemId::SizeFour,       ProblemId::SameSize,
                                               ProblemId::Even,           ProblemId::StConnectivity,
                                               ProblemId::SameGeneration, ProblemId::Mod2LinEq};
    return all;
}

std::string_view problem_name(ProblemId id) { return entry(id).name; }

std::optional<ProblemId> problem_from_name(std::string_view name) {
    for (const auto& e : kEntries)
        if (e.name == name)
            return e.id;
    return std::nullopt;
}

const std::string& program_text(ProblemId id) { return *entry(id).text; }

Program build_program(ProblemId id) {
    static const std::map<ProblemId, Program> cache = [] {
        std::map<ProblemId, Program> m;
        for (const auto& e : kEntries)
            m.emplace(e.id, parse_program(*e.text));
        return m;
    }();
    return cache.at(id);
}

Structure size_structure(ProblemId id, std::size_t n) {
    require(id == ProblemId::SizeFour || id == ProblemId::Even, "size_structure is for size-four and even");
    require(n >= 1, "domain must be nonempty");
    std::ostringstream out;
    domain_line(out, "e", n);
    registers_line(out, id);
    return parse_structure(out.str());
}

Structure same_size_structure(std::size_t n, const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
    require(n >= 1, "domain must be nonempty");
    for (auto x : p)
        require(x < n, "P member out of range");
    for (auto x : q)
        require(x < n, "Q member out of range");
    std::ostringstream out;
    domain_line(out, "e", n);
    unary_block(out, "P", "e", p);
    unary_block(out, "Q", "e", q);
    registers_line(out, ProblemId::SameSize);
    return parse_structure(out.str());
}

Structure st_structure(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t s,
                       std::size_t t) {
    require(n >= 1 && s < n && t < n, "s and t must be nodes");
    std::ostringstream out;
    domain_line(out, "v", n);
    out << "edb E 2\n";
    for (auto [a, b] : edges) {
        require(a < n && b < n, "edge endpoint out of range");
        out << ' ' << element("v", a) << ' ' << element("v", b) << '\n';
    }
    unary_block(out, "S", "v", {s});
    unary_block(out, "T", "v", {t});
    registers_line(out, ProblemId::StConnectivity);
    return parse_structure(out.str());
}

Structure tree_structure(const std::vector<std::size_t>& parent, std::size_t a, std::size_t b) {
    std::size_t n = parent.size();
    require(n >= 1 && a < n && b < n, "A and B must be nodes");
    std::ostringstream out;
    domain_line(out, "v", n);
    out << "edb E 2\n";
    for (std::size_t i = 1; i < n; ++i) {
        require(parent[i] < i, "parents must precede their children");
        out << ' ' << element("v", parent[i]) << ' ' << element("v", i) << '\n';
    }
    unary_block(out, "Root", "v", {0});
    unary_block(out, "A", "v", {a});
    unary_block(out, "B", "v", {b});
    registers_line(out, ProblemId::SameGeneration);
    return parse_structure(out.str());
}

Structure mod2_structure(std::size_t vars, const std::vector<Mod2Equation>& equations) {
    require(vars >= 1, "need at least one variable");
    std::ostringstream out;
    out << "domain";
    for (std::size_t i = 0; i < vars; ++i)
        out << ' ' << element("x", i);
    out << " bit0 bit1\n";
    std::vector<std::size_t> all(vars);
    for (std::size_t i = 0; i < vars; ++i)
        all[i] = i;
    unary_block(out, "Var", "x", all);
    out << "edb Bit 1\n bit0\n bit1\nedb High 1\n bit1\n";
    for (int parity : {0, 1}) {
        out << "edb Eq" << parity << " 3\n";
        for (const auto& eq : equations) {
            for (auto v : eq.vars)
                require(v < vars, "equation variable out of range");
            require(eq.parity == 0 || eq.parity == 1, "parity must be 0 or 1");
            if (eq.parity == parity)
                out << ' ' << element("x", eq.vars[0]) << ' ' << element("x", eq.vars[1]) << ' '
                    << element("x", eq.vars[2]) << '\n';
        }
    }
    registers_line(out, ProblemId::Mod2LinEq);
    return parse_structure(out.str());
}

Structure build_instance(ProblemId id, const InstanceParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto sample = [&](std::size_t n, std::size_t k) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i)
            all[i] = i;
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(k);
        std::sort(all.begin(), all.end());
        return all;
    };
    switch (id) {
    case ProblemId::SizeFour:
    case ProblemId::Even:
        return size_structure(id, params.n);
    case ProblemId::SameSize:
        require(params.n >= 1 && params.a <= params.n && params.b <= params.n, "|P| and |Q| must fit the domain");
        return same_size_structure(params.n, sample(params.n, params.a), sample(params.n, params.b));
    case ProblemId::StConnectivity: {
        require(params.n >= 1, "s-t connectivity needs a node");
        require(params.edge_probability >= 0.0 && params.edge_probability <= 1.0, "edge probability out of range");
        std::bernoulli_distribution coin(params.edge_probability);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t a = 0; a < params.n; ++a)
            for (std::size_t b = 0; b < params.n; ++b)
                if (a != b && coin(rng))
                    edges.emplace_back(a, b);
        auto from = pick(params.n);
        return st_structure(params.n, edges, from, pick(params.n));
    }
    case ProblemId::SameGeneration: {
        require(params.n >= 1, "tree needs a node");
        std::vector<std::size_t> parent(params.n, 0);
        for (std::size_t i = 1; i < params.n; ++i)
            parent[i] = pick(i);
        auto a = pick(params.n);
        return tree_structure(parent, a, pick(params.n));
    }
    case ProblemId::Mod2LinEq: {
        require(params.a >= 1, "need at least one variable");
        std::set<Mod2Equation> eqs;
        require(params.b <= 2 * params.a * params.a * params.a, "more equations than distinct triples");
        while (eqs.size() < params.b)
            eqs.insert({{pick(params.a), pick(params.a), pick(params.a)}, static_cast<int>(pick(2))});
        return mod2_structure(params.a, std::vector<Mod2Equation>(eqs.begin(), eqs.end()));
    }
    }
    throw Error(ErrorKind::InvalidParams, "unknown problem");
}

bool oracle(ProblemId id, const Structure& s) {
    if (!build_program(id).vocabulary.compatible_with(s.vocabulary()))
        throw Error(ErrorKind::SignatureMismatch,
                    "structure does not match the signature of " + std::string(problem_name(id)));
    switch (id) {
    case ProblemId::SizeFour: return s.db().domain_size() == 4;
    case ProblemId::Even: return s.db().domain_size() % 2 == 0;
    case ProblemId::SameSize: return unary_members(s, "P").size() == unary_members(s, "Q").size();
    case ProblemId::StConnectivity: return reachable(s);
    case ProblemId::SameGeneration: return same_depth(s);
    case ProblemId::Mod2LinEq: return solvable(s);
    }
    return false;
}

} // namespace promise
