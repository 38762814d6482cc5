#include "promise/equivalence.hpp"
#include "promise/program.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace promise;

namespace {

const std::string kGuess = R"(edb U 1
reg P Q
module GuessP { P(x) <~ adom(x) }
module GuessQ { Q(x) <~ adom(x) }
module Never { P(x) <~ U(x), P(x) }
term: id
)";

std::vector<Trace> small_bases() {
    std::vector<Trace> out;
    for (auto text : {"domain a\nedb U 1\nreg P Q", "domain a b\nedb U 1\n a\nreg P Q", "domain a b c\nedb U 1\nreg P Q\nstate P=b"})
        out.emplace_back(parse_structure(text));
    return out;
}

TermPtr term(const std::string& text) { return desugar(parse_term(text)); }

SearchConfig small() {
    SearchConfig cfg;
    cfg.max_trace_length = 5;
    return cfg;
}

} // namespace

TEST_CASE("reference semantics on basic terms") {
    auto p = parse_program(kGuess);
    Trace s(parse_structure("domain a b\nedb U 1\nreg P Q"));
    auto id = denotational_deltas(p, make_id(), s, small());
    REQUIRE(id);
    CHECK(id->extensions == std::set<TraceKey>{s.key()});

    auto anti = denotational_deltas(p, make_anti(make_module("GuessP")), s, small());
    REQUIRE(anti);
    CHECK(anti->extensions.empty());
    auto never = denotational_deltas(p, make_anti(make_module("Never")), s, small());
    REQUIRE(never);
    CHECK(never->extensions.size() == 1);

    CHECK(is_defined(p, make_module("GuessP"), s, small()) == Tri::True);
    CHECK(is_defined(p, make_module("Never"), s, small()) == Tri::False);
    SearchConfig tight;
    tight.max_trace_length = 1;
    CHECK(is_defined(p, make_module("GuessP"), s, tight) == Tri::Unknown);
}

TEST_CASE("strong equivalence examples") {
    auto p = parse_program(kGuess);
    auto bases = small_bases();
    auto cfg = small();
    CHECK(strongly_equivalent(p, term("~~~Never"), term("~Never"), bases, cfg).verdict == Tri::True);
    CHECK(strongly_equivalent(p, term("~~~GuessP"), term("~GuessP"), bases, cfg).verdict == Tri::False);
    CHECK(strongly_equivalent(p, term("~~GuessP"), term("GuessP"), bases, cfg).verdict == Tri::False);
    CHECK(strongly_equivalent(p, term("GuessP"), term("GuessP ; id"), bases, cfg).verdict == Tri::True);
    auto diff = strongly_equivalent(p, term("GuessP"), term("GuessP ; GuessQ"), bases, cfg);
    CHECK(diff.verdict == Tri::False);
    CHECK(diff.counterexample == 0u);
    // no delta on either side is not a witness of equivalence
    CHECK(strongly_equivalent(p, term("fail"), term("fail"), bases, cfg).verdict == Tri::False);
    CHECK(strongly_equivalent(p, term("Never"), term("fail"), bases, cfg).verdict == Tri::False);

    SearchConfig tight;
    tight.max_trace_length = 1;
    CHECK(strongly_equivalent(p, term("GuessP"), term("GuessP"), bases, tight).verdict == Tri::Unknown);
}

TEST_CASE("before-after equivalence") {
    auto p = parse_program(kGuess);
    auto bases = small_bases();
    auto cfg = small();
    // same endpoints through different intermediate letters
    CHECK(strongly_equivalent(p, term("GuessP"), term("GuessP ; GuessP"), bases, cfg).verdict == Tri::False);
    CHECK(before_after_equivalent(p, term("GuessP"), term("GuessP ; GuessP"), bases, cfg).verdict == Tri::True);
    CHECK(before_after_equivalent(p, term("GuessP"), term("GuessQ"), bases, cfg).verdict == Tri::False);
}

TEST_CASE("strong equivalence implies before-after equivalence") {
    auto p = testing::mix_program();
    std::mt19937_64 rng(3);
    std::vector<Trace> bases;
    for (int i = 0; i < 3; ++i)
        bases.emplace_back(testing::random_mix_structure(rng, 2));
    auto cfg = small();
    int strong = 0;
    for (int i = 0; i < 150; ++i) {
        auto t = testing::random_core_term(rng, 3);
        auto g = testing::random_core_term(rng, 3);
        if (i % 3 == 0)
            g = make_seq(t, make_id());
        auto r = strongly_equivalent(p, t, g, bases, cfg);
        if (r.verdict != Tri::True)
            continue;
        ++strong;
        CHECK(before_after_equivalent(p, t, g, bases, cfg).verdict != Tri::False);
    }
    CHECK(strong > 0);
}

TEST_CASE("definedness agrees with the engine") {
    auto p = testing::mix_program();
    std::mt19937_64 rng(11);
    auto cfg = small();
    for (int i = 0; i < 150; ++i) {
        Trace s(testing::random_mix_structure(rng, 3));
        auto t = testing::random_core_term(rng, 3);
        auto ref = is_defined(p, t, s, cfg);
        auto anti = holds_antidomain(p, t, s, cfg);
        if (ref == Tri::Unknown || anti == Tri::Unknown)
            continue;
        CAPTURE(print_term(*t));
        CHECK((ref == Tri::True) == (anti == Tri::False));
    }
}
