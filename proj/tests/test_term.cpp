#include "promise/error.hpp"
#include "promise/term.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace promise;

namespace {

bool same(const TermPtr& a, const TermPtr& b) { return terms_equal(*a, *b); }

TermPtr m(const char* name) { return make_module(name); }

TermPtr test_of(TermPtr t) { return make_anti(make_anti(std::move(t))); }

} // namespace

TEST_CASE("basic parses") {
    CHECK(same(parse_term("GuessP ; BG(P != P)"), make_seq(m("GuessP"), make_bg("P", "P"))));
    CHECK(same(parse_term("a ; b <+ c"), make_pref_union(make_seq(m("a"), m("b")), m("c"))));
    CHECK(same(parse_term("a <+ b ; c"), make_pref_union(m("a"), make_seq(m("b"), m("c")))));
    CHECK(same(parse_term("~a^"), make_anti(make_iterate(m("a")))));
    CHECK(same(parse_term("(~a)^"), make_iterate(make_anti(m("a")))));
    CHECK(same(parse_term("a ; b ; c"), make_seq(make_seq(m("a"), m("b")), m("c"))));
    CHECK(same(parse_term("Reach == T"), make_eq("Reach", "T")));
    CHECK(same(parse_term("Reach' == T"), make_eq("Reach'", "T")));
    CHECK(same(parse_term("~ ~ ~ id"), make_anti(make_anti(make_anti(make_id())))));
}

TEST_CASE("syntax errors carry positions") {
    for (const char* bad : {"a ;", "(a", "BG(P == Q)", "pow(a, b)", "a b", "if a then b", "~", "a $ b", "id)"}) {
        CAPTURE(bad);
        try {
            parse_term(bad);
            FAIL("parsed");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Syntax);
            CHECK(std::string(e.what()).find(':') != std::string::npos);
        }
    }
}

TEST_CASE("desugaring rules") {
    auto phi = make_eq("P", "Q");
    CHECK(same(desugar(parse_term("skip")), make_id()));
    CHECK(same(desugar(parse_term("fail")), make_anti(make_id())));
    CHECK(same(desugar(parse_term("test(P == Q)")), test_of(phi)));
    CHECK(same(desugar(parse_term("dom(a)")), test_of(m("a"))));
    CHECK(same(desugar(parse_term("dia(a, P == Q)")), test_of(make_seq(m("a"), phi))));
    CHECK(same(desugar(parse_term("not a")), make_anti(m("a"))));
    CHECK(same(desugar(parse_term("a and b")), make_seq(m("a"), m("b"))));
    CHECK(same(desugar(parse_term("a or b")), make_pref_union(m("a"), m("b"))));
    CHECK(same(desugar(parse_term("if P == Q then a else b")),
               make_pref_union(make_seq(test_of(phi), m("a")), m("b"))));
}

TEST_CASE("while and repeat unfold as expected") {
    auto phi = make_eq("P", "Q");
    CHECK(same(desugar(parse_term("while P == Q do t")),
               make_seq(make_iterate(make_seq(test_of(phi), m("t"))), make_anti(test_of(phi)))));
    CHECK(same(desugar(parse_term("repeat t until P == Q")),
               make_seq(m("t"), make_seq(make_iterate(make_seq(make_anti(test_of(phi)), m("t"))), test_of(phi)))));
}

TEST_CASE("pow unfolds into a left-nested sequence") {
    auto g = m("GuessNewP");
    CHECK(same(desugar(parse_term("pow(GuessNewP, 4)")), make_seq(make_seq(make_seq(g, g), g), g)));
    CHECK(same(desugar(parse_term("pow(a, 1)")), m("a")));
    CHECK(same(desugar(parse_term("pow(a, 0)")), make_id()));
}

TEST_CASE("dom and test coincide") {
    CHECK(same(desugar(parse_term("dom(P == Q)")), desugar(parse_term("test(P == Q)"))));
    CHECK(same(desugar(parse_term("dom(a ; b)")), desugar(parse_term("test(a ; b)"))));
}

TEST_CASE("desugar is idempotent and leaves core terms alone") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto t = testing::random_core_term(rng, 4);
        CHECK(is_core(*t));
        CHECK(same(desugar(t), t));
    }
    for (const char* text : {"while P == Q do a", "repeat a until ~b", "pow(dia(a, b), 3)", "if a then b else c"}) {
        auto once = desugar(parse_term(text));
        CHECK(is_core(*once));
        CHECK(same(desugar(once), once));
    }
}

TEST_CASE("printing round trips") {
    const char* corpus[] = {
        "id",
        "a ; b <+ c",
        "a <+ b ; c",
        "(a <+ b) ; c",
        "a ; (b ; c)",
        "~a^",
        "(~a)^",
        "~~~id",
        "(GuessNewO ; GuessNewE)^ ; ~(GuessP ; BG(P != E))",
        "if B == High then SetOne else SetZero",
        "(if a then b else c) ; d",
        "repeat a ; b until Reach == T ; c",
        "while not P == Q do a and b or c",
        "pow(GuessNewP, 4) ; ~GuessNewP",
        "dia(a ; b, P == Q) <+ dom(a) <+ test(fail) ; skip",
        "~(repeat a until b)",
        "(a <+ b)^ <+ (c <+ d)",
    };
    for (const char* text : corpus) {
        CAPTURE(text);
        auto t = parse_term(text);
        auto printed = print_term(*t);
        CHECK(same(parse_term(printed), t));
        CHECK(print_term(*parse_term(printed)) == printed);
    }
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto t = testing::random_core_term(rng, 5);
        auto printed = print_term(*t);
        CAPTURE(printed);
        CHECK(same(parse_term(printed), t));
        CHECK(print_term(*parse_term(printed)) == printed);
    }
}

TEST_CASE("anti-domain depth") {
    CHECK(antidomain_depth(*parse_term("a ; b")) == 0);
    CHECK(antidomain_depth(*parse_term("~a")) == 1);
    CHECK(antidomain_depth(*parse_term("~~~a")) == 3);
    CHECK(antidomain_depth(*parse_term("a <+ ~b")) == 1);
    CHECK(antidomain_depth(*parse_term("~a <+ b")) == 2);
}
