#pragma once

// Shared fixtures and generators for the unit and acceptance tests.

#include "promise/evaluator.hpp"
#include "promise/program.hpp"
#include "promise/structure.hpp"
#include "promise/term.hpp"

#include <random>
#include <string>
#include <vector>

namespace promise::testing {

/// Two modules over E/2, U/1 and registers P, Q.
inline const std::string kMixProgram = R"(edb E 2
edb U 1
reg P Q
module M1 { P(x) <~ adom(x) }
module M2 { Q(x) <~ P(y), E(y, x) }
term: id
)";

inline Program mix_program() { return parse_program(kMixProgram); }

/// Random structure for kMixProgram with domain size 1..max_n and random
/// register contents.
inline Structure random_mix_structure(std::mt19937_64& rng, std::size_t max_n) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
    std::bernoulli_distribution coin(0.4);
    std::string text = "domain";
    for (std::size_t i = 0; i < n; ++i)
        text += " e" + std::to_string(i);
    text += "\nedb E 2\n";
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (coin(rng))
                text += " e" + std::to_string(a) + " e" + std::to_string(b) + "\n";
    text += "edb U 1\n";
    for (std::size_t a = 0; a < n; ++a)
        if (coin(rng))
            text += " e" + std::to_string(a) + "\n";
    text += "reg P Q\n";
    auto value = [&] {
        auto v = std::uniform_int_distribution<std::size_t>(0, n)(rng);
        return v == n ? std::string("_") : "e" + std::to_string(v);
    };
    text += "state P=" + value() + " Q=" + value() + "\n";
    return parse_structure(text);
}

/// Random core term over M1, M2 and tests on P, Q, U, adom.
inline TermPtr random_core_term(std::mt19937_64& rng, int depth) {
    static const char* syms[] = {"P", "Q", "U", "adom"};
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (depth <= 1) {
        switch (pick(5)) {
        case 0: return make_id();
        case 1: return make_module("M1");
        case 2: return make_module("M2");
        case 3: return make_eq(syms[pick(4)], syms[pick(4)]);
        default: return make_bg(syms[pick(4)], syms[pick(4)]);
        }
    }
    switch (pick(6)) {
    case 0: return make_seq(random_core_term(rng, depth - 1), random_core_term(rng, depth - 1));
    case 1: return make_pref_union(random_core_term(rng, depth - 1), random_core_term(rng, depth - 1));
    case 2: return make_anti(random_core_term(rng, depth - 1));
    case 3: return make_iterate(random_core_term(rng, depth - 1));
    default: return random_core_term(rng, 1);
    }
}

} // namespace promise::testing
