#include "promise/error.hpp"
#include "promise/problems.hpp"
#include "promise/program.hpp"

#include <doctest.h>

using namespace promise;

namespace {

const std::string kHeader = "edb T 2\nedb U 1\nreg P Reach\nmodule GuessP { P(x) <~ adom(x) }\n";

std::vector<Diagnostic> diagnose(const std::string& text) { return validate_program(parse_program_text(text)); }

} // namespace

TEST_CASE("program with modules and a term") {
    auto p = parse_program(kHeader + "term: GuessP ; BG(P != P)\n");
    CHECK(p.modules.count("GuessP") == 1);
    CHECK(p.vocabulary.registers() == std::vector<std::string>{"P", "Reach"});
    CHECK(terms_equal(*p.main, *make_seq(make_module("GuessP"), make_bg("P", "P"))));
}

TEST_CASE("rules split by newline or semicolon") {
    auto a = parse_program("reg P Q\nmodule M {\n  P(x) <~ adom(x)\n  Q(x) <~ adom(x), P(x)\n}\nterm: M\n");
    auto b = parse_program("reg P Q\nmodule M { P(x) <~ adom(x) ; Q(x) <~ adom(x), P(x) }\nterm: M\n");
    CHECK(a.modules.at("M") == b.modules.at("M"));
    CHECK(a.modules.at("M").rules.size() == 2);
}

TEST_CASE("terms may span lines and use defines") {
    auto p = parse_program(kHeader + "define New = GuessP ; BG(P != P)\nterm: New ;\n  New\n");
    auto expected = make_seq(make_seq(make_module("GuessP"), make_bg("P", "P")),
                             make_seq(make_module("GuessP"), make_bg("P", "P")));
    CHECK(terms_equal(*p.main, *expected));
}

TEST_CASE("constants in rule bodies") {
    auto p = parse_program("edb E 2\nreg P\nmodule M { P(x) <~ E(\"a\", x) }\nterm: M\n");
    CHECK(p.modules.at("M").rules[0].body.atoms[0].args[0] == Arg::constant("a"));
}

TEST_CASE("validation diagnostics") {
    CHECK(diagnose(program_text(ProblemId::Even)).empty());

    auto dup = diagnose("reg P\nmodule M { P(x) <~ adom(x) ; P(y) <~ adom(y) }\nterm: M\n");
    REQUIRE(dup.size() == 1);
    CHECK(dup[0].kind == ErrorKind::DuplicateHead);
    CHECK(dup[0].loc.line == 2);

    auto bg = diagnose(kHeader + "term: GuessP ; BG(P != Nope)\n");
    REQUIRE(bg.size() == 1);
    CHECK(bg[0].kind == ErrorKind::UnknownSymbol);
    CHECK(bg[0].loc.line == 5);

    auto binary = diagnose(kHeader + "term: Reach == T\n");
    REQUIRE(binary.size() == 1);
    CHECK(binary[0].kind == ErrorKind::NonUnarySymbolInTest);

    auto module = diagnose(kHeader + "term: Missing\n");
    REQUIRE(module.size() == 1);
    CHECK(module[0].kind == ErrorKind::UnknownModule);

    auto arity = diagnose("edb T 2\nreg P\nmodule M { P(x) <~ T(x) }\nterm: M\n");
    REQUIRE(arity.size() == 1);
    CHECK(arity[0].kind == ErrorKind::Arity);

    auto unused = diagnose("edb T 2\nreg P\nmodule M { P(x) <~ T(y, z) }\nterm: M\n");
    REQUIRE(unused.size() == 1);
    CHECK(unused[0].kind == ErrorKind::HeadVarUnused);

    auto head = diagnose("edb U 1\nreg P\nmodule M { U(x) <~ adom(x) }\nterm: M\n");
    REQUIRE(head.size() == 1);
    CHECK(head[0].kind == ErrorKind::UnknownSymbol);
}

TEST_CASE("parse_program throws the first diagnostic") {
    try {
        parse_program(kHeader + "term: Reach == T\n");
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonUnarySymbolInTest);
    }
}

TEST_CASE("program syntax errors") {
    for (const char* bad : {"reg P\n", "reg P\nterm: id\nterm: id\n", "reg P\nmodule M { P(x) <~ }\nterm: M\n",
                            "reg P\nmodule M { P(x) <~ adom(x)\nterm: M\n", "reg P\nbogus\nterm: id\n",
                            "reg P\nterm: id )\n"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_program_text(bad), Error);
    }
    CHECK_THROWS_AS(parse_program_text("reg P P\nterm: id\n"), Error);
    CHECK_THROWS_AS(parse_program_text("reg adom\nterm: id\n"), Error);
}

TEST_CASE("vocabulary binding") {
    auto p = parse_program("edb E 2\nreg P\nterm: id\n");
    CHECK_NOTHROW(check_vocabulary(p, parse_structure("domain a\nedb E 2\nreg P")));
    CHECK_NOTHROW(check_vocabulary(p, parse_structure("domain a\nreg P\nedb E 2")));
    for (const char* bad : {"domain a\nreg P", "domain a\nedb E 1\nreg P", "domain a\nedb E 2\nreg P Q"}) {
        try {
            check_vocabulary(p, parse_structure(bad));
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::VocabularyMismatch);
        }
    }
}
