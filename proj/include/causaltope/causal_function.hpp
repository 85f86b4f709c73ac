#pragma once
// Deterministic causal behaviour on a lowerset: one output value per tip
// class, extension to the closure, consistency checking, and the separability
// test that asks whether a function arises from a causally complete
// refinement of its space.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "causaltope/coordinates.hpp"

namespace ct {

// Pruning filter over partial value assignments (a prefix of the slot order).
// Must be monotone: once a prefix is rejected, all its extensions are too.
using SupportFilter = std::function<bool(const std::vector<Output>& prefix)>;

class CausalFunction {
public:
    // One value per tip class of the context, aligned with tip_classes order.
    CausalFunction(Lowerset context, OutputFamily outputs, std::vector<Output> values);

    const Lowerset& context() const { return context_; }
    const OutputFamily& outputs() const { return outputs_; }
    const std::vector<TipClass>& slots() const { return slots_; }
    const std::vector<Output>& values() const { return values_; }

    // Value at a tip history of the given event.
    Output value_at(const EventId& event, const PartialFunction& tip_history) const;
    // Joint outputs below a closure member: one value per event of k.
    PartialFunction extended_output(const PartialFunction& k) const;

    // JSON object text mapping "(event,class)" to the value, in slot order.
    std::string to_string() const;

    friend bool operator==(const CausalFunction& a, const CausalFunction& b);
    friend bool operator!=(const CausalFunction& a, const CausalFunction& b) { return !(a == b); }
    friend void for_each_causal_function(const Lowerset&, const OutputFamily&,
                                         const std::function<bool(const CausalFunction&)>&,
                                         const SupportFilter&, std::uint64_t);

private:
    Lowerset context_;
    OutputFamily outputs_;
    std::vector<TipClass> slots_;
    std::vector<Output> values_;
    std::map<EventId, std::map<std::uint32_t, std::size_t>> slot_of_;
};

// Number of causal functions on the context: the product over slots of the
// alphabet sizes.
mpz_class causal_function_count(const Lowerset& context, const OutputFamily& outputs);

// Visit functions in canonical order (mixed radix over slots, last fastest);
// the visitor returns false to stop.  Without a filter, throws when the total
// count exceeds the bound.
void for_each_causal_function(const Lowerset& context, const OutputFamily& outputs,
                              const std::function<bool(const CausalFunction&)>& visit,
                              const SupportFilter& filter = {}, std::uint64_t bound = 1ull << 24);
std::vector<CausalFunction> enumerate_causal_functions(const Lowerset& context,
                                                       const OutputFamily& outputs,
                                                       const SupportFilter& filter = {},
                                                       std::uint64_t bound = 1ull << 24);

// Output assignment for every closure member, coherent along extension.
class ExtendedCausalFunction {
public:
    explicit ExtendedCausalFunction(std::map<PartialFunction, PartialFunction> table);
    const std::map<PartialFunction, PartialFunction>& table() const { return table_; }
    const PartialFunction& at(const PartialFunction& k) const;

    friend bool operator==(const ExtendedCausalFunction& a, const ExtendedCausalFunction& b) {
        return a.table_ == b.table_;
    }
    friend bool operator!=(const ExtendedCausalFunction& a, const ExtendedCausalFunction& b) {
        return !(a == b);
    }

private:
    std::map<PartialFunction, PartialFunction> table_;
};

ExtendedCausalFunction extend(const CausalFunction& f);

// True when smaller closure members carry restrictions of larger ones.  Every
// entry must assign outputs exactly on its key's domain.
bool is_consistent(const std::map<PartialFunction, PartialFunction>& table);

// Inverse of extend: reads one value per tip class off the table.
CausalFunction collapse(const ExtendedCausalFunction& F, Lowerset context,
                        const OutputFamily& outputs);

// Proof object that a function cannot arise from any causally complete
// refinement: an extended input history k such that for every event whose
// removal from k lands inside the closure of some refinement (the events a
// refinement could place last), the remainder sits below two closure members
// with clashing outputs.
struct InseparabilityWitness {
    PartialFunction k;
    std::vector<EventId> dropped;             // the removable events of k, sorted
    std::vector<PartialFunction> clashing;    // closure member above k minus the event
    std::vector<EventId> disagreeing;         // event where outputs differ
};

// Both take the causally complete refinements to peel against; they validate
// the set like is_separable does.
bool check_witness(const CausalFunction& f, const InseparabilityWitness& w,
                   const std::vector<HistorySpace>& completions);
std::optional<InseparabilityWitness> find_inseparability_witness(
    const CausalFunction& f, const std::vector<HistorySpace>& completions);

struct SeparabilityResult {
    bool separable;
    std::size_t completion_index;  // first refinement the function arises from
};

// Does f, defined on the whole of its parent space, arise from a causal
// function on one of the given causally complete refinements?
SeparabilityResult is_separable(const CausalFunction& f,
                                const std::vector<HistorySpace>& completions);

// Joint-output index of the function in every context block of the layout.
std::vector<std::size_t> deterministic_profile(const CausalFunction& f,
                                               const CoordinateIndex& coords);

}  // namespace ct
