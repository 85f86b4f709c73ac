#pragma once
// Composition of history spaces, switch-space enumeration, and causal
// completions.

#include <optional>
#include <vector>

#include "causaltope/history_space.hpp"

namespace ct {

// Union of two spaces on disjoint event sets.
HistorySpace parallel_compose(const HistorySpace& a, const HistorySpace& b);

// a followed unconditionally by b: a's histories plus every join of a maximal
// closure member of a with a history of b.  Event sets must be disjoint.
HistorySpace sequential_compose(const HistorySpace& a, const HistorySpace& b);

// a followed by a branch space chosen by a's maximal closure member.  All
// branches must share one event set and one input alphabet, disjoint from a's.
HistorySpace conditional_compose(const HistorySpace& head,
                                 std::vector<std::pair<PartialFunction, HistorySpace>> branches);

// Every space obtained by nesting input-controlled orderings of the given
// events: pick a first event, then recursively pick a remainder space per
// input value.  Singleton alphabet maps are allowed anywhere.
std::vector<HistorySpace> switch_spaces(const InputFamily& inputs);

// Largest causally complete refinements of the space.  Strategy: a complete
// space is its own sole completion; composed spaces are completed factor by
// factor; small atoms fall back to an exhaustive closed-set search; otherwise
// caller-supplied candidates are validated (completeness and refinement are
// checked, maximality is taken on trust).
struct CompletionResult {
    std::vector<HistorySpace> completions;
    bool relative_to_hints = false;
};
CompletionResult causal_completions(const HistorySpace& space,
                                    const std::vector<HistorySpace>* hints = nullptr);

// Exhaustive search used for small spaces; throws when the partial-function
// universe exceeds max_universe.
std::vector<HistorySpace> causal_completions_brute(const HistorySpace& space,
                                                   std::size_t max_universe = 40);

// Every causally complete space over the alphabet (exhaustive; meant for
// small censuses).
std::vector<HistorySpace> enumerate_causally_complete_spaces(const InputFamily& inputs);

// Orbit count of the given spaces under event renamings that respect alphabet
// sizes and per-event input permutations.
std::size_t count_up_to_relabelling(const std::vector<HistorySpace>& spaces);

}  // namespace ct
