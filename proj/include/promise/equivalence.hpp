#pragma once

// Reference set semantics by structural recursion, and the definedness and
// equivalence checks built on it.

#include "promise/evaluator.hpp"

#include <optional>
#include <set>
#include <vector>

namespace promise {

struct DeltaSet {
    TraceKey base;
    std::set<TraceKey> extensions;
};

/// Materializes every extension within the trace bound; nullopt when the
/// bound cuts off any branch.
std::optional<DeltaSet> denotational_deltas(const Program& p, const TermPtr& core, const Trace& s,
                                            const SearchConfig& cfg);

Tri is_defined(const Program& p, const TermPtr& t, const Trace& s, const SearchConfig& cfg);

struct EquivalenceReport {
    Tri verdict = Tri::Unknown;
    /// Index into the base list of the first counterexample.
    std::optional<std::size_t> counterexample;
    std::size_t trace_cap = 0;
};

EquivalenceReport strongly_equivalent(const Program& p, const TermPtr& t, const TermPtr& g,
                                      const std::vector<Trace>& bases, const SearchConfig& cfg);

/// Compares (start letter, end letter) projections of the delta sets.
EquivalenceReport before_after_equivalent(const Program& p, const TermPtr& t, const TermPtr& g,
                                          const std::vector<Trace>& bases, const SearchConfig& cfg);

} // namespace promise
