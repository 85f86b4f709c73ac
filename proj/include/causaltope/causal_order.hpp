#pragma once
// Preorders on events and the history spaces they induce.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causaltope/history_space.hpp"

namespace ct {

// A preorder on a finite event set.  Two events may be mutually below each
// other, which models an indefinite relative order between them.
class CausalOrder {
public:
    CausalOrder() = default;
    // Relation pairs (a, b) meaning a happens no later than b; the stored
    // relation is the reflexive-transitive closure.
    CausalOrder(std::vector<EventId> events,
                const std::vector<std::pair<EventId, EventId>>& below);

    static CausalOrder discrete(std::vector<EventId> events);
    // Consecutive levels are strictly ordered; events inside one level are
    // mutually related (their relative order is indefinite).
    static CausalOrder chain(const std::vector<std::vector<EventId>>& levels);

    const std::vector<EventId>& events() const { return events_; }
    bool leq(const EventId& a, const EventId& b) const;
    std::vector<EventId> down(const EventId& e) const;

    // All downward-closed event subsets, including the empty one.
    std::vector<std::vector<EventId>> lowersets() const;

    CausalOrder disjoint_union(const CausalOrder& other) const;
    // Events with no relations to the existing ones are simply appended.
    std::vector<std::vector<EventId>> connected_components() const;

private:
    std::vector<EventId> events_;
    std::vector<std::vector<bool>> leq_;  // leq_[i][j]: events_[i] <= events_[j]

    std::size_t index(const EventId& e) const;
    void close();
};

// Union over events e of all total assignments on the down-closure of e.
// The result is always join-prime.
std::set<PartialFunction> history_set_of_order(const CausalOrder& order, const InputFamily& inputs);

// Union over lowersets U of all total assignments on U (the empty assignment
// appears for U = {}).
std::set<PartialFunction> extended_history_set_of_order(const CausalOrder& order,
                                                        const InputFamily& inputs);

// Order refinement: a <= b iff a's extended history set contains b's.
bool order_leq(const CausalOrder& a, const CausalOrder& b, const InputFamily& inputs);

// The space induced by the order.  Orders with several connected components
// yield parallel provenance so completions can be computed factor by factor.
HistorySpace space_from_order(const CausalOrder& order, const InputFamily& inputs);

}  // namespace ct
