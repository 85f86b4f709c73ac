#include "causaltope/causal_function.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ct {

namespace {

PartialFunction erase_event(const PartialFunction& k, const EventId& event) {
    PartialFunction::Entries entries = k.entries();
    entries.erase(event);
    return PartialFunction(std::move(entries));
}

}  // namespace

CausalFunction::CausalFunction(Lowerset context, OutputFamily outputs, std::vector<Output> values)
    : context_(std::move(context)), outputs_(std::move(outputs)), values_(std::move(values)) {
    slots_ = tip_classes(context_);
    if (values_.size() != slots_.size())
        throw std::invalid_argument("one output value per tip class expected");
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        auto it = outputs_.find(slots_[s].event);
        if (it == outputs_.end() || it->second.empty())
            throw std::invalid_argument("no output alphabet for event " + slots_[s].event);
        if (std::find(it->second.begin(), it->second.end(), values_[s]) == it->second.end())
            throw std::invalid_argument("output value outside the alphabet of " + slots_[s].event);
        for (auto m : slots_[s].members) slot_of_[slots_[s].event][m] = s;
    }
}

Output CausalFunction::value_at(const EventId& event, const PartialFunction& tip_history) const {
    const auto& parent = context_.parent();
    auto by_event = slot_of_.find(event);
    if (by_event == slot_of_.end())
        throw std::invalid_argument("no tip class at event " + event);
    auto it = by_event->second.find(static_cast<std::uint32_t>(parent.index_of(tip_history)));
    if (it == by_event->second.end())
        throw std::invalid_argument(ct::to_string(tip_history) + " is not a tip history at " +
                                    event);
    return values_[it->second];
}

PartialFunction CausalFunction::extended_output(const PartialFunction& k) const {
    const auto& parent = context_.parent();
    PartialFunction::Entries out;
    for (const auto& [event, input] : k.entries()) {
        auto by_event = slot_of_.find(event);
        bool found = false;
        if (by_event != slot_of_.end()) {
            for (auto m : context_.members()) {
                if (!parent.histories()[m].leq(k)) continue;
                auto it = by_event->second.find(m);
                if (it == by_event->second.end()) continue;
                out[event] = values_[it->second];
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("no tip history below " + ct::to_string(k) + " at " +
                                        event);
    }
    return PartialFunction(std::move(out));
}

std::string CausalFunction::to_string() const {
    std::string out = "{";
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        if (s) out += ",";
        out += "\"(" + slots_[s].event + "," + slots_[s].id + ")\":" + std::to_string(values_[s]);
    }
    return out + "}";
}

bool operator==(const CausalFunction& a, const CausalFunction& b) {
    return a.context_ == b.context_ && a.outputs_ == b.outputs_ && a.values_ == b.values_;
}

mpz_class causal_function_count(const Lowerset& context, const OutputFamily& outputs) {
    mpz_class count = 1;
    for (const auto& cls : tip_classes(context)) {
        auto it = outputs.find(cls.event);
        if (it == outputs.end() || it->second.empty())
            throw std::invalid_argument("no output alphabet for event " + cls.event);
        count *= static_cast<unsigned long>(it->second.size());
    }
    return count;
}

void for_each_causal_function(const Lowerset& context, const OutputFamily& outputs,
                              const std::function<bool(const CausalFunction&)>& visit,
                              const SupportFilter& filter, std::uint64_t bound) {
    if (!filter && causal_function_count(context, outputs) > mpz_class(bound))
        throw std::runtime_error("causal function count exceeds the enumeration bound");
    auto slots = tip_classes(context);
    std::vector<const std::vector<Output>*> alphabets;
    for (const auto& cls : slots) {
        auto it = outputs.find(cls.event);
        if (it == outputs.end() || it->second.empty())
            throw std::invalid_argument("no output alphabet for event " + cls.event);
        alphabets.push_back(&it->second);
    }
    CausalFunction fn(context, outputs,
                      [&] {
                          std::vector<Output> first;
                          for (auto* a : alphabets) first.push_back(a->front());
                          return first;
                      }());
    std::vector<Output> prefix;
    prefix.reserve(slots.size());
    bool stop = false;
    std::function<void()> dfs = [&] {
        if (stop) return;
        if (prefix.size() == slots.size()) {
            fn.values_ = prefix;
            if (!visit(fn)) stop = true;
            return;
        }
        for (Output value : *alphabets[prefix.size()]) {
            prefix.push_back(value);
            if (!filter || filter(prefix)) dfs();
            prefix.pop_back();
            if (stop) return;
        }
    };
    dfs();
}

std::vector<CausalFunction> enumerate_causal_functions(const Lowerset& context,
                                                       const OutputFamily& outputs,
                                                       const SupportFilter& filter,
                                                       std::uint64_t bound) {
    std::vector<CausalFunction> out;
    for_each_causal_function(
        context, outputs,
        [&](const CausalFunction& f) {
            out.push_back(f);
            return true;
        },
        filter, bound);
    return out;
}

ExtendedCausalFunction::ExtendedCausalFunction(std::map<PartialFunction, PartialFunction> table)
    : table_(std::move(table)) {}

const PartialFunction& ExtendedCausalFunction::at(const PartialFunction& k) const {
    auto it = table_.find(k);
    if (it == table_.end())
        throw std::invalid_argument(ct::to_string(k) + " is outside the table");
    return it->second;
}

ExtendedCausalFunction extend(const CausalFunction& f) {
    std::map<PartialFunction, PartialFunction> table;
    for (const auto& k : f.context().closure()) table[k] = f.extended_output(k);
    return ExtendedCausalFunction(std::move(table));
}

bool is_consistent(const std::map<PartialFunction, PartialFunction>& table) {
    for (const auto& [k, out] : table)
        if (k.domain() != out.domain())
            throw std::invalid_argument("outputs of " + ct::to_string(k) +
                                        " are not assigned exactly on its domain");
    for (const auto& [k1, out1] : table)
        for (const auto& [k2, out2] : table)
            if (k1.leq(k2) && !out1.leq(out2)) return false;
    return true;
}

CausalFunction collapse(const ExtendedCausalFunction& F, Lowerset context,
                        const OutputFamily& outputs) {
    const auto& parent = context.parent();
    std::vector<Output> values;
    for (const auto& cls : tip_classes(context)) {
        const auto& rep = parent.histories()[cls.members.front()];
        values.push_back(F.at(rep).at(cls.event));
    }
    return CausalFunction(std::move(context), outputs, std::move(values));
}

namespace {

// Shared validation for the separability family: every candidate must be a
// causally complete refinement presenting the same events, inputs and maximal
// extended histories as the function's own space.
void require_refinements(const CausalFunction& f,
                         const std::vector<HistorySpace>& completions) {
    const auto& parent = f.context().parent();
    if (f.context().size() != parent.size())
        throw std::invalid_argument("separability is defined for functions on the whole space");
    auto max_ext = parent.max_ext();
    std::sort(max_ext.begin(), max_ext.end());
    for (const auto& completion : completions) {
        auto other_max = completion.max_ext();
        std::sort(other_max.begin(), other_max.end());
        if (completion.events() != parent.events() || completion.inputs() != parent.inputs() ||
            !completion.is_causally_complete() || !space_leq(completion, parent) ||
            other_max != max_ext)
            throw std::invalid_argument("not a causally complete refinement of the space");
    }
}

// Events of k whose removal lands inside the closure of at least one of the
// refinements — exactly the events some refinement could place last at k, so
// a witness must exhibit a clash for each of them.
std::vector<EventId> removable_events(const PartialFunction& k,
                                      const std::vector<HistorySpace>& completions) {
    std::set<PartialFunction> pool;
    for (const auto& completion : completions)
        pool.insert(completion.ext().begin(), completion.ext().end());
    std::vector<EventId> removable;
    for (const auto& [event, input] : k.entries())
        if (pool.count(erase_event(k, event))) removable.push_back(event);
    return removable;
}

}  // namespace

bool check_witness(const CausalFunction& f, const InseparabilityWitness& w,
                   const std::vector<HistorySpace>& completions) {
    require_refinements(f, completions);
    auto closure = f.context().closure();
    auto in_closure = [&](const PartialFunction& k) {
        return std::find(closure.begin(), closure.end(), k) != closure.end();
    };
    if (!in_closure(w.k)) return false;
    auto removable = removable_events(w.k, completions);
    if (w.dropped != removable || removable.empty()) return false;
    if (w.clashing.size() != removable.size() || w.disagreeing.size() != removable.size())
        return false;
    auto at_k = f.extended_output(w.k);
    for (std::size_t i = 0; i < removable.size(); ++i) {
        const auto& dropped = w.dropped[i];
        const auto& other = w.clashing[i];
        const auto& xi = w.disagreeing[i];
        if (!in_closure(other)) return false;
        if (!erase_event(w.k, dropped).leq(other)) return false;
        if (xi == dropped || !w.k.defined_at(xi)) return false;
        if (at_k.at(xi) == f.extended_output(other).at(xi)) return false;
    }
    return true;
}

std::optional<InseparabilityWitness> find_inseparability_witness(
    const CausalFunction& f, const std::vector<HistorySpace>& completions) {
    require_refinements(f, completions);
    auto closure = f.context().closure();
    std::map<PartialFunction, PartialFunction> table;
    for (const auto& k : closure) table[k] = f.extended_output(k);
    for (const auto& k : closure) {
        if (k.size() < 2) continue;
        auto removable = removable_events(k, completions);
        if (removable.empty()) continue;
        InseparabilityWitness w;
        w.k = k;
        bool all = true;
        for (const auto& dropped : removable) {
            auto remainder = erase_event(k, dropped);
            bool found = false;
            for (const auto& other : closure) {
                if (!remainder.leq(other)) continue;
                for (const auto& [xi, value] : remainder.entries()) {
                    if (table.at(k).at(xi) != table.at(other).at(xi)) {
                        w.dropped.push_back(dropped);
                        w.clashing.push_back(other);
                        w.disagreeing.push_back(xi);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (!found) {
                all = false;
                break;
            }
        }
        if (all) return w;
    }
    return std::nullopt;
}

SeparabilityResult is_separable(const CausalFunction& f,
                                const std::vector<HistorySpace>& completions) {
    require_refinements(f, completions);
    std::map<PartialFunction, PartialFunction> table;
    for (const auto& k : f.context().closure()) table[k] = f.extended_output(k);
    for (std::size_t c = 0; c < completions.size(); ++c) {
        const auto& closure = completions[c].ext();
        // One unknown per (closure member, event); comparable members share
        // their values on the smaller domain.
        std::map<std::pair<std::size_t, EventId>, std::size_t> slot;
        for (std::size_t i = 0; i < closure.size(); ++i)
            for (const auto& [event, input] : closure[i].entries()) slot[{i, event}] = slot.size();
        std::vector<std::size_t> root(slot.size());
        std::iota(root.begin(), root.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (root[x] != x) x = root[x] = root[root[x]];
            return x;
        };
        for (std::size_t i = 0; i < closure.size(); ++i)
            for (std::size_t j = 0; j < closure.size(); ++j) {
                if (i == j || !closure[i].leq(closure[j])) continue;
                for (const auto& [event, input] : closure[i].entries())
                    root[find(slot.at({i, event}))] = find(slot.at({j, event}));
            }
        std::map<PartialFunction, std::size_t> index;
        for (std::size_t i = 0; i < closure.size(); ++i) index[closure[i]] = i;
        std::map<std::size_t, Output> forced;
        bool ok = true;
        for (const auto& [k, out] : table) {
            auto it = index.find(k);
            if (it == index.end()) {
                ok = false;  // the refinement misses part of the closure
                break;
            }
            for (const auto& [event, value] : out.entries()) {
                auto r = find(slot.at({it->second, event}));
                auto [pos, fresh] = forced.emplace(r, value);
                if (!fresh && pos->second != value) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return {true, c};
    }
    return {false, completions.size()};
}

std::vector<std::size_t> deterministic_profile(const CausalFunction& f,
                                               const CoordinateIndex& coords) {
    std::vector<std::size_t> profile;
    for (const auto& layout : coords.contexts()) {
        if (!layout.context().subset_of(f.context()))
            throw std::invalid_argument("the function does not cover this context");
        const auto& parent = layout.context().parent();
        std::vector<Output> values;
        for (const auto& slot : layout.slots())
            values.push_back(
                f.value_at(slot.cls.event, parent.histories()[slot.cls.members.front()]));
        profile.push_back(layout.index_of(values));
    }
    return profile;
}

}  // namespace ct
