#pragma once

// The six bundled decision problems: program texts, seeded instance
// generators and brute-force oracles.

#include "promise/program.hpp"
#include "promise/structure.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace promise {

enum class ProblemId { SizeFour, SameSize, Even, StConnectivity, SameGeneration, Mod2LinEq };

const std::vector<ProblemId>& all_problems();
std::string_view problem_name(ProblemId id);
std::optional<ProblemId> problem_from_name(std::string_view name);

const std::string& program_text(ProblemId id);
Program build_program(ProblemId id);

/// Which fields matter depends on the problem:
///   SizeFour, Even: n (domain size)
///   SameSize: n, a = |P|, b = |Q|
///   StConnectivity: n, edge_probability
///   SameGeneration: n (tree size)
///   Mod2LinEq: a = variables, b = equations
struct InstanceParams {
    std::size_t n = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    double edge_probability = 0.5;
};

/// Throws InvalidParams.
Structure build_instance(ProblemId id, const InstanceParams& params, std::uint64_t seed);

bool oracle(ProblemId id, const Structure& s);

// Direct constructors, used by generators and exhaustive sweeps.

Structure size_structure(ProblemId id, std::size_t n);
Structure same_size_structure(std::size_t n, const std::vector<std::size_t>& p, const std::vector<std::size_t>& q);
Structure st_structure(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t s,
                       std::size_t t);
/// parent[0] is ignored; node 0 is the root.
Structure tree_structure(const std::vector<std::size_t>& parent, std::size_t a, std::size_t b);

struct Mod2Equation {
    std::array<std::size_t, 3> vars{};
    int parity = 0;

    auto operator<=>(const Mod2Equation&) const = default;
};

Structure mod2_structure(std::size_t vars, const std::vector<Mod2Equation>& equations);

} // namespace promise
