#include "causaltope/compose.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace ct {

namespace {

void require_disjoint_events(const HistorySpace& a, const HistorySpace& b) {
    std::vector<EventId> common;
    std::set_intersection(a.events().begin(), a.events().end(), b.events().begin(),
                          b.events().end(), std::back_inserter(common));
    if (!common.empty())
        throw std::invalid_argument("composed spaces share event " + common.front());
}

ProvenancePtr make_provenance(Provenance p) {
    return std::make_shared<Provenance>(std::move(p));
}

}  // namespace

HistorySpace parallel_compose(const HistorySpace& a, const HistorySpace& b) {
    require_disjoint_events(a, b);
    std::vector<PartialFunction> histories = a.histories();
    histories.insert(histories.end(), b.histories().begin(), b.histories().end());
    auto space = HistorySpace::from_histories(std::move(histories));
    Provenance p;
    p.kind = Provenance::Kind::parallel;
    p.factors = {a, b};
    return space.with_provenance(make_provenance(std::move(p)));
}

HistorySpace sequential_compose(const HistorySpace& a, const HistorySpace& b) {
    require_disjoint_events(a, b);
    std::vector<PartialFunction> histories = a.histories();
    for (const auto& k : a.max_ext())
        for (const auto& h : b.histories()) {
            auto j = pf_join(k, h);
            histories.push_back(*j);
        }
    auto space = HistorySpace::from_histories(std::move(histories));
    Provenance p;
    p.kind = Provenance::Kind::sequential;
    p.factors = {a, b};
    return space.with_provenance(make_provenance(std::move(p)));
}

HistorySpace conditional_compose(const HistorySpace& head,
                                 std::vector<std::pair<PartialFunction, HistorySpace>> branches) {
    std::sort(branches.begin(), branches.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    auto maxima = head.max_ext();
    std::sort(maxima.begin(), maxima.end());
    if (branches.size() != maxima.size())
        throw std::invalid_argument("conditional composition needs one branch per maximal closure member");
    for (std::size_t i = 0; i < maxima.size(); ++i)
        if (branches[i].first != maxima[i])
            throw std::invalid_argument("branch keys must be the maximal closure members of the head");
    for (const auto& [key, branch] : branches) {
        require_disjoint_events(head, branch);
        if (branch.events() != branches.front().second.events() ||
            branch.inputs() != branches.front().second.inputs())
            throw std::invalid_argument("conditional branches must share one input alphabet");
    }
    std::vector<PartialFunction> histories = head.histories();
    for (const auto& [key, branch] : branches)
        for (const auto& h : branch.histories()) histories.push_back(*pf_join(key, h));
    auto space = HistorySpace::from_histories(std::move(histories));
    Provenance p;
    p.kind = Provenance::Kind::conditional;
    p.factors = {head};
    p.branches = std::move(branches);
    return space.with_provenance(make_provenance(std::move(p)));
}

std::vector<HistorySpace> switch_spaces(const InputFamily& inputs) {
    if (inputs.empty()) return {};
    if (inputs.size() == 1) {
        const auto& [event, values] = *inputs.begin();
        std::vector<PartialFunction> histories;
        for (Input v : values) histories.push_back(PartialFunction{{event, v}});
        return {HistorySpace::from_histories(std::move(histories))};
    }
    std::vector<HistorySpace> out;
    for (const auto& [first, values] : inputs) {
        std::vector<PartialFunction> head_histories;
        for (Input v : values) head_histories.push_back(PartialFunction{{first, v}});
        auto head = HistorySpace::from_histories(std::move(head_histories));
        InputFamily rest = inputs;
        rest.erase(first);
        auto tails = switch_spaces(rest);
        // One independent tail choice per input value of the first event.
        std::vector<std::size_t> choice(values.size(), 0);
        while (true) {
            std::vector<std::pair<PartialFunction, HistorySpace>> branches;
            for (std::size_t i = 0; i < values.size(); ++i)
                branches.emplace_back(PartialFunction{{first, values[i]}}, tails[choice[i]]);
            out.push_back(conditional_compose(head, std::move(branches)));
            std::size_t pos = 0;
            while (pos < choice.size() && ++choice[pos] == tails.size()) choice[pos++] = 0;
            if (pos == choice.size()) break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Insert f into a join-closed set and restore closure.
void close_with(std::set<PartialFunction>& closed, const PartialFunction& f) {
    if (!closed.insert(f).second) return;
    std::vector<PartialFunction> frontier{f};
    while (!frontier.empty()) {
        std::vector<PartialFunction> next;
        for (const auto& g : frontier) {
            std::vector<PartialFunction> snapshot(closed.begin(), closed.end());
            for (const auto& h : snapshot) {
                auto j = pf_join(g, h);
                if (j && closed.insert(*j).second) next.push_back(*j);
            }
        }
        frontier = std::move(next);
    }
}

// Visit every join-closed set between base (assumed closed) and base + free,
// each exactly once: a new element may only be added if closing with it drags
// in no smaller free element that was still absent.
void walk_closed_supersets(const std::set<PartialFunction>& base,
                           const std::vector<PartialFunction>& free_elements,
                           const std::function<void(const std::set<PartialFunction>&)>& visit) {
    std::function<void(const std::set<PartialFunction>&, std::size_t)> dfs =
        [&](const std::set<PartialFunction>& current, std::size_t from) {
            visit(current);
            for (std::size_t j = from; j < free_elements.size(); ++j) {
                if (current.count(free_elements[j])) continue;
                std::set<PartialFunction> next = current;
                close_with(next, free_elements[j]);
                bool canonical = true;
                for (std::size_t l = 0; l < j && canonical; ++l)
                    if (!current.count(free_elements[l]) && next.count(free_elements[l]))
                        canonical = false;
                if (canonical) dfs(next, j + 1);
            }
        };
    dfs(base, 0);
}

HistorySpace space_of_closed_set(const std::set<PartialFunction>& closed) {
    std::vector<PartialFunction> all(closed.begin(), closed.end());
    auto primes = prime_members(all);
    return HistorySpace::from_prime_parts(std::move(primes), std::move(all));
}

// Keep the spaces whose closure is not a strict superset of another's
// closure, i.e. the ones closest to the original space in refinement order.
std::vector<HistorySpace> refinement_maxima(std::vector<HistorySpace> spaces) {
    std::vector<HistorySpace> out;
    for (const auto& s : spaces) {
        bool maximal = true;
        for (const auto& t : spaces) {
            if (t.ext().size() >= s.ext().size() || t == s) continue;
            if (std::includes(s.ext().begin(), s.ext().end(), t.ext().begin(), t.ext().end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<HistorySpace> causal_completions_brute(const HistorySpace& space,
                                                   std::size_t max_universe) {
    auto universe = pf_universe(space.inputs());
    if (universe.size() > max_universe)
        throw std::runtime_error("completion search space too large: universe has " +
                                 std::to_string(universe.size()) + " partial functions");
    std::set<PartialFunction> base(space.ext().begin(), space.ext().end());
    for (const auto& t : total_assignments(space.inputs())) close_with(base, t);
    std::vector<PartialFunction> free_elements;
    for (const auto& f : universe)
        if (!base.count(f)) free_elements.push_back(f);
    std::vector<HistorySpace> complete;
    walk_closed_supersets(base, free_elements, [&](const std::set<PartialFunction>& closed) {
        auto candidate = space_of_closed_set(closed);
        if (candidate.is_causally_complete()) complete.push_back(std::move(candidate));
    });
    return refinement_maxima(std::move(complete));
}

namespace {

std::vector<HistorySpace> completions_by_provenance(const HistorySpace& space);

std::vector<HistorySpace> completions_auto(const HistorySpace& space) {
    if (space.is_causally_complete()) return {space};
    if (space.provenance() && space.provenance()->kind != Provenance::Kind::atom)
        return completions_by_provenance(space);
    return causal_completions_brute(space);
}

std::vector<HistorySpace> completions_by_provenance(const HistorySpace& space) {
    const Provenance& p = *space.provenance();
    std::vector<HistorySpace> out;
    switch (p.kind) {
        case Provenance::Kind::parallel: {
            for (const auto& f : p.factors)
                if (!f.has_free_choice()) return causal_completions_brute(space);
            out = completions_auto(p.factors.front());
            for (std::size_t i = 1; i < p.factors.size(); ++i) {
                auto rhs = completions_auto(p.factors[i]);
                std::vector<HistorySpace> next;
                for (const auto& a : out)
                    for (const auto& b : rhs) next.push_back(parallel_compose(a, b));
                out = std::move(next);
            }
            break;
        }
        case Provenance::Kind::sequential: {
            // Fixing one tail after every maximal closure member of the head
            // is not enough: the closest complete refinements may pick a
            // different tail refinement after each one, so the search runs
            // over independent per-branch choices.
            if (!p.factors[0].has_free_choice() || !p.factors[1].has_free_choice())
                return causal_completions_brute(space);
            auto heads = completions_auto(p.factors[0]);
            auto tails = completions_auto(p.factors[1]);
            auto keys = p.factors[0].max_ext();
            std::sort(keys.begin(), keys.end());
            for (const auto& head : heads) {
                std::vector<std::size_t> choice(keys.size(), 0);
                while (true) {
                    std::vector<std::pair<PartialFunction, HistorySpace>> branches;
                    for (std::size_t i = 0; i < keys.size(); ++i)
                        branches.emplace_back(keys[i], tails[choice[i]]);
                    out.push_back(conditional_compose(head, std::move(branches)));
                    std::size_t pos = 0;
                    while (pos < keys.size() && ++choice[pos] == tails.size()) choice[pos++] = 0;
                    if (pos == keys.size()) break;
                }
            }
            break;
        }
        case Provenance::Kind::conditional: {
            if (!p.factors[0].has_free_choice())
                return causal_completions_brute(space);
            for (const auto& [key, branch] : p.branches)
                if (!branch.has_free_choice()) return causal_completions_brute(space);
            const std::size_t n = p.branches.size();
            std::vector<std::vector<HistorySpace>> options;
            for (const auto& [key, branch] : p.branches) options.push_back(completions_auto(branch));
            for (const auto& head : completions_auto(p.factors[0])) {
                std::vector<std::size_t> choice(n, 0);
                while (true) {
                    std::vector<std::pair<PartialFunction, HistorySpace>> branches;
                    for (std::size_t i = 0; i < n; ++i)
                        branches.emplace_back(p.branches[i].first, options[i][choice[i]]);
                    out.push_back(conditional_compose(head, std::move(branches)));
                    std::size_t pos = 0;
                    while (pos < n && ++choice[pos] == options[pos].size()) choice[pos++] = 0;
                    if (pos == n) break;
                }
            }
            break;
        }
        case Provenance::Kind::atom:
            return causal_completions_brute(space);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

CompletionResult causal_completions(const HistorySpace& space,
                                    const std::vector<HistorySpace>* hints) {
    CompletionResult result;
    if (hints) {
        for (const auto& hint : *hints) {
            if (hint.events() != space.events() || hint.inputs() != space.inputs())
                throw std::invalid_argument("completion candidate changes the event alphabet");
            if (!hint.is_causally_complete())
                throw std::invalid_argument("completion candidate is not causally complete: " +
                                            to_string(hint));
            if (!space_leq(hint, space))
                throw std::invalid_argument("completion candidate does not refine the space: " +
                                            to_string(hint));
        }
        result.completions = *hints;
        std::sort(result.completions.begin(), result.completions.end());
        result.completions.erase(
            std::unique(result.completions.begin(), result.completions.end()),
            result.completions.end());
        result.relative_to_hints = true;
        return result;
    }
    result.completions = completions_auto(space);
    std::sort(result.completions.begin(), result.completions.end());
    return result;
}

std::vector<HistorySpace> enumerate_causally_complete_spaces(const InputFamily& inputs) {
    auto universe = pf_universe(inputs);
    std::set<PartialFunction> base;
    for (const auto& t : total_assignments(inputs)) base.insert(t);
    std::vector<PartialFunction> free_elements;
    for (const auto& f : universe)
        if (!base.count(f)) free_elements.push_back(f);
    std::vector<HistorySpace> out;
    walk_closed_supersets(base, free_elements, [&](const std::set<PartialFunction>& closed) {
        auto candidate = space_of_closed_set(closed);
        if (candidate.is_causally_complete()) out.push_back(std::move(candidate));
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count_up_to_relabelling(const std::vector<HistorySpace>& spaces) {
    if (spaces.empty()) return 0;
    const InputFamily& inputs = spaces.front().inputs();
    std::vector<EventId> events;
    for (const auto& [event, values] : inputs) events.push_back(event);
    // All event permutations that preserve alphabet size, combined with all
    // per-event value permutations.
    std::vector<EventId> perm = events;
    std::sort(perm.begin(), perm.end());
    struct Relabelling {
        std::map<EventId, EventId> event_map;
        std::map<EventId, std::map<Input, Input>> value_map;
    };
    std::vector<Relabelling> symmetries;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < events.size() && ok; ++i)
            if (inputs.at(events[i]).size() != inputs.at(perm[i]).size()) ok = false;
        if (!ok) continue;
        std::vector<std::vector<std::vector<Input>>> value_perms(events.size());
        for (std::size_t i = 0; i < events.size(); ++i) {
            std::vector<Input> vp = inputs.at(perm[i]);
            std::sort(vp.begin(), vp.end());
            do value_perms[i].push_back(vp);
            while (std::next_permutation(vp.begin(), vp.end()));
        }
        std::vector<std::size_t> pick(events.size(), 0);
        while (true) {
            Relabelling r;
            for (std::size_t i = 0; i < events.size(); ++i) {
                r.event_map[events[i]] = perm[i];
                const auto& from = inputs.at(events[i]);
                for (std::size_t v = 0; v < from.size(); ++v)
                    r.value_map[events[i]][from[v]] = value_perms[i][pick[i]][v];
            }
            symmetries.push_back(std::move(r));
            std::size_t pos = 0;
            while (pos < pick.size() && ++pick[pos] == value_perms[pos].size()) pick[pos++] = 0;
            if (pos == pick.size()) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::set<std::vector<PartialFunction>> canonical;
    for (const auto& s : spaces) {
        std::vector<PartialFunction> best;
        for (const auto& sym : symmetries) {
            std::vector<PartialFunction> image;
            for (const auto& h : s.histories()) {
                PartialFunction::Entries entries;
                for (const auto& [event, value] : h.entries())
                    entries.emplace(sym.event_map.at(event), sym.value_map.at(event).at(value));
                image.emplace_back(std::move(entries));
            }
            std::sort(image.begin(), image.end());
            if (best.empty() || image < best) best = std::move(image);
        }
        canonical.insert(std::move(best));
    }
    return canonical.size();
}

}  // namespace ct
