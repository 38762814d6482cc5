#include "promise/error.hpp"
#include "promise/evaluator.hpp"
#include "promise/problems.hpp"

#include <doctest.h>

using namespace promise;

TEST_CASE("every problem program validates") {
    for (auto id : all_problems()) {
        CAPTURE(problem_name(id));
        auto p = parse_program(program_text(id));
        CHECK(validate_program(p).empty());
        CHECK(problem_from_name(problem_name(id)) == id);
    }
    CHECK_FALSE(problem_from_name("bogus"));
}

TEST_CASE("program shapes") {
    auto even = build_program(ProblemId::Even);
    auto body = print_term(*even.main);
    CHECK(body.find("while") == std::string::npos);
    CHECK(is_core(*desugar(even.main)));
    CHECK(program_text(ProblemId::SizeFour).find("pow(GuessNewP, 4)") != std::string::npos);

    // the tree relation is the only binary symbol of the same-generation program
    auto sg = build_program(ProblemId::SameGeneration);
    for (const auto& e : sg.vocabulary.edb())
        CHECK((e.arity == 1 || e.name == "E"));
}

TEST_CASE("zero-step instances") {
    auto st = build_program(ProblemId::StConnectivity);
    CHECK(run_main_task(st, st_structure(1, {}, 0, 0)).kind == VerdictKind::Yes);
    CHECK(run_main_task(st, st_structure(2, {{0, 1}, {1, 0}}, 1, 1)).kind == VerdictKind::Yes);
    auto sg = build_program(ProblemId::SameGeneration);
    CHECK(run_main_task(sg, tree_structure({0}, 0, 0)).kind == VerdictKind::Yes);
    CHECK(run_main_task(sg, tree_structure({0, 0}, 0, 1)).kind == VerdictKind::No);
}

TEST_CASE("generators are deterministic") {
    for (auto id : all_problems()) {
        InstanceParams ip;
        ip.n = 5;
        ip.a = 2;
        ip.b = 2;
        if (id == ProblemId::Mod2LinEq)
            ip.a = 3;
        auto x = build_instance(id, ip, 17);
        auto y = build_instance(id, ip, 17);
        CHECK(serialize_structure(x) == serialize_structure(y));
        CHECK_NOTHROW(check_vocabulary(build_program(id), x));
    }
}

TEST_CASE("invalid generator parameters") {
    InstanceParams ip;
    ip.n = 2;
    ip.a = 3;
    CHECK_THROWS_AS(build_instance(ProblemId::SameSize, ip, 1), Error);
    ip = {};
    CHECK_THROWS_AS(build_instance(ProblemId::StConnectivity, ip, 1), Error);
    ip.edge_probability = 1.5;
    ip.n = 3;
    CHECK_THROWS_AS(build_instance(ProblemId::StConnectivity, ip, 1), Error);
    ip = {};
    ip.a = 1;
    ip.b = 5; // only one distinct triple over one variable
    CHECK_THROWS_AS(build_instance(ProblemId::Mod2LinEq, ip, 1), Error);
}

TEST_CASE("oracles") {
    CHECK(oracle(ProblemId::SizeFour, size_structure(ProblemId::SizeFour, 4)));
    CHECK_FALSE(oracle(ProblemId::SizeFour, size_structure(ProblemId::SizeFour, 3)));
    CHECK(oracle(ProblemId::Even, size_structure(ProblemId::Even, 6)));
    CHECK_FALSE(oracle(ProblemId::Even, size_structure(ProblemId::Even, 5)));
    CHECK(oracle(ProblemId::SameSize, same_size_structure(4, {0, 1}, {2, 3})));
    CHECK_FALSE(oracle(ProblemId::SameSize, same_size_structure(4, {0}, {2, 3})));
    CHECK(oracle(ProblemId::StConnectivity, st_structure(3, {{0, 1}, {1, 2}}, 0, 2)));
    CHECK_FALSE(oracle(ProblemId::StConnectivity, st_structure(3, {{0, 1}, {2, 1}}, 0, 2)));
    CHECK(oracle(ProblemId::StConnectivity, st_structure(2, {}, 1, 1)));
    //     0
    //    / \
    //   1   2
    //   |
    //   3
    CHECK(oracle(ProblemId::SameGeneration, tree_structure({0, 0, 0, 1}, 1, 2)));
    CHECK_FALSE(oracle(ProblemId::SameGeneration, tree_structure({0, 0, 0, 1}, 3, 2)));
    CHECK(oracle(ProblemId::SameGeneration, tree_structure({0, 0, 0, 1}, 0, 0)));
    // x0 + x0 + x1 = 1 forces x1 = 1; x1 + x1 + x1 = 0 contradicts it
    CHECK(oracle(ProblemId::Mod2LinEq, mod2_structure(2, {{{0, 0, 1}, 1}})));
    CHECK_FALSE(oracle(ProblemId::Mod2LinEq, mod2_structure(2, {{{0, 0, 1}, 1}, {{1, 1, 1}, 0}})));

    CHECK_THROWS_AS(oracle(ProblemId::SameSize, size_structure(ProblemId::Even, 3)), Error);
}

TEST_CASE("programs agree with oracles on small instances") {
    for (auto id : all_problems()) {
        auto p = build_program(id);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            InstanceParams ip;
            ip.n = 3;
            ip.a = id == ProblemId::Mod2LinEq ? 2 : 1;
            ip.b = id == ProblemId::Mod2LinEq ? 2 : 1 + seed % 2;
            auto s = build_instance(id, ip, seed);
            CAPTURE(problem_name(id));
            CAPTURE(serialize_structure(s));
            auto v = run_main_task(p, s);
            REQUIRE(v.kind != VerdictKind::BoundExceeded);
            CHECK((v.kind == VerdictKind::Yes) == oracle(id, s));
        }
    }
}
