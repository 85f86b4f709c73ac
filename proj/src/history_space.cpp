#include "causaltope/history_space.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ct {

std::vector<PartialFunction> ext_closure(std::vector<PartialFunction> w) {
    std::set<PartialFunction> closed(w.begin(), w.end());
    std::vector<PartialFunction> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        std::vector<PartialFunction> next;
        for (const auto& f : frontier) {
            for (const auto& g : closed) {
                auto j = pf_join(f, g);
                if (j && closed.insert(*j).second) next.push_back(*j);
            }
        }
        frontier = std::move(next);
    }
    return {closed.begin(), closed.end()};
}

namespace {

// h is a join of strictly smaller members iff their domains cover dom(h):
// all strictly smaller members agree with h, so the join of all of them
// equals h exactly when the domains add up.
bool is_join_of_others(const PartialFunction& h, const std::vector<PartialFunction>& w) {
    std::set<EventId> covered;
    for (const auto& k : w) {
        if (k.lt(h))
            for (const auto& [event, value] : k.entries()) covered.insert(event);
    }
    return covered.size() == h.size();
}

}  // namespace

std::vector<PartialFunction> prime_members(const std::vector<PartialFunction>& w) {
    std::vector<PartialFunction> out;
    for (const auto& h : w)
        if (!is_join_of_others(h, w)) out.push_back(h);
    return out;
}

HistorySpace HistorySpace::from_histories(std::vector<PartialFunction> histories) {
    std::sort(histories.begin(), histories.end());
    histories.erase(std::unique(histories.begin(), histories.end()), histories.end());
    for (const auto& h : histories)
        if (h.empty()) throw std::invalid_argument("history spaces cannot contain the empty assignment");
    for (const auto& h : histories)
        if (is_join_of_others(h, histories))
            throw std::invalid_argument("history set is not join-prime at " + to_string(h));
    HistorySpace s;
    s.histories_ = std::move(histories);
    s.ext_ = ext_closure(s.histories_);
    s.finish_construction();
    return s;
}

HistorySpace HistorySpace::from_prime_parts(std::vector<PartialFunction> histories,
                                            std::vector<PartialFunction> closure) {
    HistorySpace s;
    s.histories_ = std::move(histories);
    s.ext_ = std::move(closure);
    s.finish_construction();
    return s;
}

void HistorySpace::finish_construction() {
    std::map<EventId, std::set<Input>> seen;
    for (const auto& h : histories_)
        for (const auto& [event, value] : h.entries()) seen[event].insert(value);
    events_.clear();
    inputs_.clear();
    for (const auto& [event, values] : seen) {
        events_.push_back(event);
        inputs_[event] = {values.begin(), values.end()};
    }
}

std::vector<PartialFunction> HistorySpace::max_ext() const {
    std::vector<PartialFunction> out;
    for (const auto& k : ext_) {
        bool maximal = true;
        for (const auto& k2 : ext_)
            if (k.lt(k2)) { maximal = false; break; }
        if (maximal) out.push_back(k);
    }
    return out;
}

bool HistorySpace::contains(const PartialFunction& h) const {
    return std::binary_search(histories_.begin(), histories_.end(), h);
}

bool HistorySpace::ext_contains(const PartialFunction& k) const {
    return std::binary_search(ext_.begin(), ext_.end(), k);
}

std::size_t HistorySpace::index_of(const PartialFunction& h) const {
    auto it = std::lower_bound(histories_.begin(), histories_.end(), h);
    if (it == histories_.end() || *it != h)
        throw std::out_of_range("history " + to_string(h) + " is not in the space");
    return static_cast<std::size_t>(it - histories_.begin());
}

std::vector<EventId> HistorySpace::tips(const PartialFunction& h) const {
    std::set<EventId> fixed_below;
    for (const auto& k : histories_) {
        if (k.lt(h))
            for (const auto& [event, value] : k.entries()) fixed_below.insert(event);
    }
    std::vector<EventId> out;
    for (const auto& [event, value] : h.entries())
        if (!fixed_below.count(event)) out.push_back(event);
    return out;
}

bool HistorySpace::has_free_choice() const {
    std::size_t expected = 1;
    for (const auto& [event, values] : inputs_) expected *= values.size();
    auto maxima = max_ext();
    if (maxima.size() != expected) return false;
    for (const auto& k : maxima)
        if (k.size() != events_.size()) return false;
    return true;
}

bool HistorySpace::is_causally_complete() const {
    if (!has_free_choice()) return false;
    for (const auto& h : histories_)
        if (tips(h).size() != 1) return false;
    return true;
}

bool HistorySpace::is_tight() const {
    for (const auto& k : ext_) {
        std::map<EventId, int> tip_count;
        for (const auto& h : histories_) {
            if (!h.leq(k)) continue;
            for (const auto& event : tips(h)) ++tip_count[event];
        }
        for (const auto& [event, value] : k.entries())
            if (tip_count[event] != 1) return false;
    }
    return true;
}

HistorySpace HistorySpace::with_provenance(ProvenancePtr p) const {
    HistorySpace s = *this;
    s.provenance_ = std::move(p);
    return s;
}

bool space_leq(const HistorySpace& finer, const HistorySpace& coarser) {
    const auto& big = finer.ext();
    for (const auto& k : coarser.ext())
        if (!std::binary_search(big.begin(), big.end(), k)) return false;
    return true;
}

HistorySpace space_meet(const HistorySpace& a, const HistorySpace& b) {
    std::vector<PartialFunction> u = a.ext();
    u.insert(u.end(), b.ext().begin(), b.ext().end());
    auto closed = ext_closure(std::move(u));
    auto primes = prime_members(closed);
    return HistorySpace::from_prime_parts(std::move(primes), std::move(closed));
}

HistorySpace space_join(const HistorySpace& a, const HistorySpace& b) {
    std::vector<PartialFunction> common;
    const auto& bx = b.ext();
    for (const auto& k : a.ext())
        if (std::binary_search(bx.begin(), bx.end(), k)) common.push_back(k);
    // The intersection of two join-closed sets is join-closed.
    auto primes = prime_members(common);
    return HistorySpace::from_prime_parts(std::move(primes), std::move(common));
}

std::vector<PartialFunction> pf_universe(const InputFamily& inputs) {
    std::vector<PartialFunction> out{PartialFunction{}};
    for (const auto& [event, values] : inputs) {
        std::vector<PartialFunction> next;
        for (const auto& f : out) {
            next.push_back(f);
            for (Input v : values) {
                auto entries = f.entries();
                entries.emplace(event, v);
                next.emplace_back(std::move(entries));
            }
        }
        out = std::move(next);
    }
    std::erase_if(out, [](const PartialFunction& f) { return f.empty(); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PartialFunction> total_assignments(const InputFamily& inputs) {
    std::vector<PartialFunction> out{PartialFunction{}};
    for (const auto& [event, values] : inputs) {
        std::vector<PartialFunction> next;
        for (const auto& f : out) {
            for (Input v : values) {
                auto entries = f.entries();
                entries.emplace(event, v);
                next.emplace_back(std::move(entries));
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const HistorySpace& s) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.histories().size(); ++i) {
        if (i) os << "; ";
        os << to_string(s.histories()[i]);
    }
    os << '}';
    return os.str();
}

}  // namespace ct
