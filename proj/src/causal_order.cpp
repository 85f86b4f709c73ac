#include "causaltope/causal_order.hpp"

#include <algorithm>
#include <stdexcept>

namespace ct {

CausalOrder::CausalOrder(std::vector<EventId> events,
                         const std::vector<std::pair<EventId, EventId>>& below)
    : events_(std::move(events)) {
    std::sort(events_.begin(), events_.end());
    if (std::adjacent_find(events_.begin(), events_.end()) != events_.end())
        throw std::invalid_argument("duplicate event in causal order");
    leq_.assign(events_.size(), std::vector<bool>(events_.size(), false));
    for (std::size_t i = 0; i < events_.size(); ++i) leq_[i][i] = true;
    for (const auto& [a, b] : below) leq_[index(a)][index(b)] = true;
    close();
}

CausalOrder CausalOrder::discrete(std::vector<EventId> events) {
    return CausalOrder(std::move(events), {});
}

CausalOrder CausalOrder::chain(const std::vector<std::vector<EventId>>& levels) {
    std::vector<EventId> events;
    std::vector<std::pair<EventId, EventId>> below;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        for (const auto& e : levels[l]) events.push_back(e);
        for (const auto& a : levels[l])
            for (const auto& b : levels[l]) below.emplace_back(a, b);
        for (std::size_t m = l + 1; m < levels.size(); ++m)
            for (const auto& a : levels[l])
                for (const auto& b : levels[m]) below.emplace_back(a, b);
    }
    return CausalOrder(std::move(events), below);
}

std::size_t CausalOrder::index(const EventId& e) const {
    auto it = std::lower_bound(events_.begin(), events_.end(), e);
    if (it == events_.end() || *it != e)
        throw std::out_of_range("unknown event " + e + " in causal order");
    return static_cast<std::size_t>(it - events_.begin());
}

void CausalOrder::close() {
    const std::size_t n = events_.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k][j]) leq_[i][j] = true;
}

bool CausalOrder::leq(const EventId& a, const EventId& b) const {
    return leq_[index(a)][index(b)];
}

std::vector<EventId> CausalOrder::down(const EventId& e) const {
    std::size_t j = index(e);
    std::vector<EventId> out;
    for (std::size_t i = 0; i < events_.size(); ++i)
        if (leq_[i][j]) out.push_back(events_[i]);
    return out;
}

std::vector<std::vector<EventId>> CausalOrder::lowersets() const {
    const std::size_t n = events_.size();
    std::vector<std::vector<EventId>> out;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        bool closed = true;
        for (std::size_t j = 0; j < n && closed; ++j) {
            if (!(mask >> j & 1)) continue;
            for (std::size_t i = 0; i < n && closed; ++i)
                if (leq_[i][j] && !(mask >> i & 1)) closed = false;
        }
        if (!closed) continue;
        std::vector<EventId> set;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) set.push_back(events_[i]);
        out.push_back(std::move(set));
    }
    return out;
}

CausalOrder CausalOrder::disjoint_union(const CausalOrder& other) const {
    std::vector<EventId> events = events_;
    events.insert(events.end(), other.events_.begin(), other.events_.end());
    std::vector<std::pair<EventId, EventId>> below;
    auto collect = [&below](const CausalOrder& o) {
        for (std::size_t i = 0; i < o.events_.size(); ++i)
            for (std::size_t j = 0; j < o.events_.size(); ++j)
                if (i != j && o.leq_[i][j]) below.emplace_back(o.events_[i], o.events_[j]);
    };
    collect(*this);
    collect(other);
    return CausalOrder(std::move(events), below);
}

std::vector<std::vector<EventId>> CausalOrder::connected_components() const {
    const std::size_t n = events_.size();
    std::vector<std::size_t> comp(n, n);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = next;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (comp[j] == n && (leq_[i][j] || leq_[j][i])) {
                    comp[j] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    std::vector<std::vector<EventId>> out(next);
    for (std::size_t i = 0; i < n; ++i) out[comp[i]].push_back(events_[i]);
    return out;
}

namespace {

void assignments_on(const std::vector<EventId>& events, const InputFamily& inputs,
                    std::set<PartialFunction>& sink) {
    std::vector<PartialFunction::Entries> partial{{}};
    for (const auto& event : events) {
        auto it = inputs.find(event);
        if (it == inputs.end())
            throw std::invalid_argument("no input alphabet for event " + event);
        std::vector<PartialFunction::Entries> next;
        for (const auto& entries : partial) {
            for (Input v : it->second) {
                auto e2 = entries;
                e2.emplace(event, v);
                next.push_back(std::move(e2));
            }
        }
        partial = std::move(next);
    }
    for (auto& entries : partial) sink.insert(PartialFunction(std::move(entries)));
}

}  // namespace

std::set<PartialFunction> history_set_of_order(const CausalOrder& order, const InputFamily& inputs) {
    std::set<PartialFunction> out;
    for (const auto& e : order.events()) assignments_on(order.down(e), inputs, out);
    return out;
}

std::set<PartialFunction> extended_history_set_of_order(const CausalOrder& order,
                                                        const InputFamily& inputs) {
    std::set<PartialFunction> out;
    for (const auto& low : order.lowersets()) assignments_on(low, inputs, out);
    return out;
}

bool order_leq(const CausalOrder& a, const CausalOrder& b, const InputFamily& inputs) {
    auto xa = extended_history_set_of_order(a, inputs);
    auto xb = extended_history_set_of_order(b, inputs);
    return std::includes(xa.begin(), xa.end(), xb.begin(), xb.end());
}

HistorySpace space_from_order(const CausalOrder& order, const InputFamily& inputs) {
    auto hs = history_set_of_order(order, inputs);
    auto space = HistorySpace::from_histories({hs.begin(), hs.end()});
    auto components = order.connected_components();
    if (components.size() < 2) return space;
    // Disconnected orders factor into a parallel composition, which is the
    // shape the completion search wants to see.
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::parallel;
    for (const auto& component : components) {
        std::vector<std::pair<EventId, EventId>> below;
        for (const auto& a : component)
            for (const auto& b : component)
                if (a != b && order.leq(a, b)) below.emplace_back(a, b);
        InputFamily sub_inputs;
        for (const auto& e : component) sub_inputs[e] = inputs.at(e);
        CausalOrder sub(component, below);
        auto factor_hs = history_set_of_order(sub, sub_inputs);
        prov->factors.push_back(HistorySpace::from_histories({factor_hs.begin(), factor_hs.end()}));
    }
    return space.with_provenance(std::move(prov));
}

}  // namespace ct
