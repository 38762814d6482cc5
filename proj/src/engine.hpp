#pragma once

// Depth-first search engine shared by the main task, delta enumeration and
// the nested tests of witness replay.

#include "promise/evaluator.hpp"

#include "function_ref.hpp"

#include <unordered_set>

namespace promise::detail {

struct Scope {
    bool bound_hit = false;
    int depth = 0;
    bool main = false;
};

struct VecHash {
    std::size_t operator()(const std::vector<ElementId>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v)
            h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ULL;
        return h;
    }
};

using LetterSet = std::unordered_set<std::vector<ElementId>, VecHash>;

bool test_eq(const BoundProgram::Node& n, const Trace& tr);
bool test_bg(const BoundProgram::Node& n, const Trace& tr);

class Engine {
public:
    using Cont = FunctionRef<bool()>;

    Engine(const BoundProgram& bp, Trace& tr, const Bounds& bounds) : bp_(bp), tr_(tr), bounds_(bounds) {}

    /// Explores every extension of the current trace by `node`, calling `k`
    /// at each one. Returns true as soon as `k` does or the node budget runs
    /// out; the trace is restored either way.
    bool run(int node, Scope& sc, Cont k);

    /// Whether `node` has an extension here, searched one level deeper.
    Tri defined(int node, int depth);

    [[nodiscard]] std::uint64_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] bool exhausted() const noexcept { return exhausted_; }

    /// Module steps of the main scope currently on the trace.
    std::vector<std::pair<std::size_t, std::vector<ElementId>>> choices;

private:
    bool iterate(int body, Scope& sc, Cont k, LetterSet& milestones);

    const BoundProgram& bp_;
    Trace& tr_;
    const Bounds& bounds_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
};

} // namespace promise::detail
