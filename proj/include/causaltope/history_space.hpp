#pragma once
// Spaces of input histories: join-prime families of partial functions, their
// join closures, and the refinement order between spaces.

#include <map>
#include <memory>
#include <vector>

#include "causaltope/partial_function.hpp"

namespace ct {

class HistorySpace;
struct Provenance;
using ProvenancePtr = std::shared_ptr<const Provenance>;

using InputFamily = std::map<EventId, std::vector<Input>>;

// Closure of a finite set of partial functions under joins of compatible
// nonempty subfamilies.  Input need not be sorted; output is sorted and unique.
std::vector<PartialFunction> ext_closure(std::vector<PartialFunction> w);

// Members of w that are not the join of a compatible family of other members.
std::vector<PartialFunction> prime_members(const std::vector<PartialFunction>& w);

// A finite, join-prime family of nonempty partial functions.  Histories are
// stored sorted; the join closure, event list and per-event input alphabets
// are computed once at construction.
class HistorySpace {
public:
    HistorySpace() = default;

    // Validating constructor: sorts, deduplicates, and requires join-primality.
    static HistorySpace from_histories(std::vector<PartialFunction> histories);

    // Trusted constructor for callers that already hold the join closure of a
    // join-prime family (e.g. the closed-set enumerators).
    static HistorySpace from_prime_parts(std::vector<PartialFunction> histories,
                                         std::vector<PartialFunction> closure);

    const std::vector<PartialFunction>& histories() const { return histories_; }
    std::size_t size() const { return histories_.size(); }
    const std::vector<EventId>& events() const { return events_; }
    const InputFamily& inputs() const { return inputs_; }

    // Join closure of the histories (sorted).
    const std::vector<PartialFunction>& ext() const { return ext_; }
    std::vector<PartialFunction> max_ext() const;

    bool contains(const PartialFunction& h) const;
    bool ext_contains(const PartialFunction& k) const;
    std::size_t index_of(const PartialFunction& h) const;

    // Events of h not already fixed by a strictly smaller history of the
    // space; h may be any partial function, typically a member of ext().
    std::vector<EventId> tips(const PartialFunction& h) const;

    // The maximal closure members are exactly the total assignments.
    bool has_free_choice() const;
    // Free choice plus a unique tip event for every history.
    bool is_causally_complete() const;
    // Every event of every closure member is tipped by exactly one history
    // below it.
    bool is_tight() const;

    const ProvenancePtr& provenance() const { return provenance_; }
    HistorySpace with_provenance(ProvenancePtr p) const;

    bool operator==(const HistorySpace& o) const { return histories_ == o.histories_; }
    bool operator!=(const HistorySpace& o) const { return histories_ != o.histories_; }
    bool operator<(const HistorySpace& o) const { return histories_ < o.histories_; }

private:
    std::vector<PartialFunction> histories_;
    std::vector<PartialFunction> ext_;
    std::vector<EventId> events_;
    InputFamily inputs_;
    ProvenancePtr provenance_;

    void finish_construction();
};

// How a space was assembled, kept so that causal completions can be computed
// factor by factor.
struct Provenance {
    enum class Kind { atom, parallel, sequential, conditional };
    Kind kind = Kind::atom;
    // parallel: two or more factors; sequential: exactly two.
    std::vector<HistorySpace> factors;
    // conditional: head in factors[0], one branch per maximal closure member.
    std::vector<std::pair<PartialFunction, HistorySpace>> branches;
};

// Space refinement: finer <= coarser iff the finer closure contains the
// coarser one.
bool space_leq(const HistorySpace& finer, const HistorySpace& coarser);

// Meet (finest common coarsening is the join; the meet refines both):
// prime members of the closure of the union of the two closures.
HistorySpace space_meet(const HistorySpace& a, const HistorySpace& b);
// Join: prime members of the intersection of the two closures.
HistorySpace space_join(const HistorySpace& a, const HistorySpace& b);

// All nonempty partial functions over the given alphabet.
std::vector<PartialFunction> pf_universe(const InputFamily& inputs);
// All total assignments over the given alphabet.
std::vector<PartialFunction> total_assignments(const InputFamily& inputs);

std::string to_string(const HistorySpace& s);

}  // namespace ct
