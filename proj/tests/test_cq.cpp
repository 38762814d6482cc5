#include "promise/cq.hpp"
#include "promise/error.hpp"

#include <doctest.h>

#include <functional>
#include <map>
#include <random>

using namespace promise;

namespace {

CQBody body(std::string head, std::vector<Atom> atoms) { return {std::move(head), std::move(atoms)}; }

Atom atom(std::string sym, std::vector<std::string> vars) {
    Atom a{std::move(sym), {}};
    for (auto& v : vars)
        a.args.push_back(Arg::var(std::move(v)));
    return a;
}

// Enumerates every assignment of every variable; independent of the join.
std::vector<ElementId> brute_force(const CQBody& b, const Structure& s) {
    std::vector<std::string> vars;
    for (const auto& a : b.atoms)
        for (const auto& arg : a.args)
            if (!arg.is_constant && std::find(vars.begin(), vars.end(), arg.name) == vars.end())
                vars.push_back(arg.name);
    auto n = static_cast<ElementId>(s.db().domain_size());
    std::map<std::string, ElementId> val;
    std::set<ElementId> out;
    auto holds = [&](const Atom& a) {
        std::vector<ElementId> tuple;
        for (const auto& arg : a.args)
            tuple.push_back(arg.is_constant ? *s.db().find_element(arg.name) : val.at(arg.name));
        if (a.symbol == "adom")
            return true;
        if (auto r = s.vocabulary().find_register(a.symbol))
            return s.registers()[*r] == tuple[0];
        auto e = s.vocabulary().find_edb(a.symbol);
        return s.db().relation(*e).contains(tuple);
    };
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == vars.size()) {
            if (std::all_of(b.atoms.begin(), b.atoms.end(), holds))
                out.insert(val.at(b.head_var));
            return;
        }
        for (ElementId e = 0; e < n; ++e) {
            val[vars[i]] = e;
            go(i + 1);
        }
    };
    go(0);
    return {out.begin(), out.end()};
}

} // namespace

TEST_CASE("at distance two") {
    auto s = parse_structure("domain a b c\nedb E 2\n a b\n b c\nreg X\nstate X=a");
    auto b = body("x2", {atom("X", {"x1"}), atom("E", {"x1", "z"}), atom("E", {"z", "x2"})});
    CHECK(evaluate_unary_cq(b, s) == std::vector<ElementId>{2});
    auto [head, bound] = free_and_bound_vars(b);
    CHECK(head == "x2");
    CHECK(bound == std::set<std::string>{"x1", "z"});
}

TEST_CASE("adom body") {
    auto s = parse_structure("domain a b c\nreg P");
    auto b = body("x", {atom("adom", {"x"})});
    CHECK(evaluate_unary_cq(b, s) == std::vector<ElementId>{0, 1, 2});
    CHECK(free_and_bound_vars(b).second.empty());
}

TEST_CASE("blank register yields no answers") {
    auto s = parse_structure("domain a b\nreg R P");
    CHECK(evaluate_unary_cq(body("x", {atom("R", {"x"})}), s).empty());
}

TEST_CASE("constants in bodies") {
    auto s = parse_structure("domain a b c\nedb E 2\n a b\n a c\n b c\nreg P");
    Atom e{"E", {Arg::constant("a"), Arg::var("x")}};
    CHECK(evaluate_unary_cq(body("x", {e}), s) == std::vector<ElementId>{1, 2});
    Atom bad{"E", {Arg::constant("zz"), Arg::var("x")}};
    CHECK_THROWS_AS(evaluate_unary_cq(body("x", {bad}), s), Error);
}

TEST_CASE("malformed bodies") {
    auto s = parse_structure("domain a\nedb E 2\nreg P");
    try {
        free_and_bound_vars(body("x", {atom("E", {"y", "z"})}));
        FAIL("expected HeadVarUnused");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HeadVarUnused);
    }
    try {
        evaluate_unary_cq(body("x", {atom("F", {"x"})}), s);
        FAIL("expected UnknownSymbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSymbol);
    }
    try {
        evaluate_unary_cq(body("x", {atom("E", {"x"})}), s);
        FAIL("expected ArityError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Arity);
    }
}

TEST_CASE("join agrees with brute force on small random inputs") {
    std::mt19937_64 rng(2024);
    const std::vector<std::string> var_pool{"x", "y", "z", "w"};
    int checked = 0;
    for (int round = 0; round < 600; ++round) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        std::bernoulli_distribution coin(0.35);
        std::string text = "domain";
        for (std::size_t i = 0; i < n; ++i)
            text += " e" + std::to_string(i);
        text += "\nedb E 2\n";
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (coin(rng))
                    text += " e" + std::to_string(a) + " e" + std::to_string(b) + "\n";
        text += "edb T 3\n";
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (coin(rng) && coin(rng))
                        text += " e" + std::to_string(a) + " e" + std::to_string(b) + " e" + std::to_string(c) + "\n";
        text += "reg R\n";
        if (coin(rng))
            text += "state R=e" + std::to_string(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)) + "\n";
        auto s = parse_structure(text);

        auto var = [&] { return var_pool[std::uniform_int_distribution<std::size_t>(0, 3)(rng)]; };
        std::size_t atoms = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        CQBody b{"x", {}};
        for (std::size_t i = 0; i < atoms; ++i) {
            switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0: b.atoms.push_back(atom("E", {var(), var()})); break;
            case 1: b.atoms.push_back(atom("T", {var(), var(), var()})); break;
            case 2: b.atoms.push_back(atom("R", {var()})); break;
            default: b.atoms.push_back(atom("adom", {var()})); break;
            }
        }
        b.atoms.push_back(atom(coin(rng) ? "adom" : "E", coin(rng) ? std::vector<std::string>{"x"}
                                                                    : std::vector<std::string>{"x", var()}));
        if (b.atoms.back().symbol == "adom" && b.atoms.back().args.size() != 1)
            b.atoms.back().args.resize(1);
        if (b.atoms.back().symbol == "E" && b.atoms.back().args.size() != 2)
            b.atoms.back().args.push_back(Arg::var(var()));
        CHECK(evaluate_unary_cq(b, s) == brute_force(b, s));
        ++checked;
    }
    CHECK(checked == 600);
}

TEST_CASE("answers are equivariant under permutation") {
    auto s = parse_structure("domain a b c\nedb E 2\n a b\n b c\n c c\nreg X\nstate X=a");
    auto b = body("y", {atom("X", {"x"}), atom("E", {"x", "y"})});
    std::vector<ElementId> pi{2, 0, 1};
    auto image = evaluate_unary_cq(b, permute_structure(s, pi));
    std::vector<ElementId> expected;
    for (auto e : evaluate_unary_cq(b, s))
        expected.push_back(pi[static_cast<std::size_t>(e)]);
    std::sort(expected.begin(), expected.end());
    CHECK(image == expected);
}

TEST_CASE("adding tuples never removes answers") {
    auto small = parse_structure("domain a b c\nedb E 2\n a b\nreg X\nstate X=a");
    auto big = parse_structure("domain a b c\nedb E 2\n a b\n a c\n b a\nreg X\nstate X=a");
    auto b = body("y", {atom("X", {"x"}), atom("E", {"x", "y"})});
    auto lo = evaluate_unary_cq(b, small);
    auto hi = evaluate_unary_cq(b, big);
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
}
