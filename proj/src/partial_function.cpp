#include "causaltope/partial_function.hpp"

#include <sstream>
#include <stdexcept>

namespace ct {

Input PartialFunction::at(const EventId& event) const {
    auto it = entries_.find(event);
    if (it == entries_.end())
        throw std::out_of_range("partial function undefined at event " + event);
    return it->second;
}

std::vector<EventId> PartialFunction::domain() const {
    std::vector<EventId> out;
    out.reserve(entries_.size());
    for (const auto& [event, value] : entries_) out.push_back(event);
    return out;
}

bool PartialFunction::leq(const PartialFunction& g) const {
    if (entries_.size() > g.entries_.size()) return false;
    for (const auto& [event, value] : entries_) {
        auto it = g.entries_.find(event);
        if (it == g.entries_.end() || it->second != value) return false;
    }
    return true;
}

PartialFunction pf_meet(const PartialFunction& f, const PartialFunction& g) {
    PartialFunction::Entries out;
    for (const auto& [event, value] : f.entries()) {
        auto it = g.entries().find(event);
        if (it != g.entries().end() && it->second == value) out.emplace(event, value);
    }
    return PartialFunction(std::move(out));
}

bool pf_compatible(const PartialFunction& f, const PartialFunction& g) {
    const auto& small = f.size() <= g.size() ? f : g;
    const auto& large = f.size() <= g.size() ? g : f;
    for (const auto& [event, value] : small.entries()) {
        auto it = large.entries().find(event);
        if (it != large.entries().end() && it->second != value) return false;
    }
    return true;
}

std::optional<PartialFunction> pf_join(const PartialFunction& f, const PartialFunction& g) {
    if (!pf_compatible(f, g)) return std::nullopt;
    PartialFunction::Entries out = f.entries();
    out.insert(g.entries().begin(), g.entries().end());
    return PartialFunction(std::move(out));
}

std::optional<PartialFunction> pf_join_all(std::span<const PartialFunction> fs) {
    PartialFunction::Entries out;
    for (const auto& f : fs) {
        for (const auto& [event, value] : f.entries()) {
            auto [it, inserted] = out.emplace(event, value);
            if (!inserted && it->second != value) return std::nullopt;
        }
    }
    return PartialFunction(std::move(out));
}

std::string to_string(const PartialFunction& f) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [event, value] : f.entries()) {
        if (!first) os << ',';
        os << event << ':' << value;
        first = false;
    }
    return os.str();
}

PartialFunction parse_partial_function(const std::string& text) {
    PartialFunction::Entries out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::size_t colon = text.find(':', pos);
        if (colon == std::string::npos || colon >= comma)
            throw std::invalid_argument("malformed partial function entry in '" + text + "'");
        EventId event = text.substr(pos, colon - pos);
        Input value = std::stoi(text.substr(colon + 1, comma - colon - 1));
        if (!out.emplace(event, value).second)
            throw std::invalid_argument("duplicate event '" + event + "' in '" + text + "'");
        pos = comma + 1;
    }
    return PartialFunction(std::move(out));
}

}  // namespace ct
