#pragma once
// Finite partial assignments of input tokens to events, ordered by extension.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ct {

using EventId = std::string;
using Input = int;

// A finite partial function from event identifiers to input tokens.  Entries
// live in a sorted map, so iteration, comparison and serialization are all
// canonical without extra bookkeeping.
class PartialFunction {
public:
    using Entries = std::map<EventId, Input>;

    PartialFunction() = default;
    explicit PartialFunction(Entries entries) : entries_(std::move(entries)) {}
    PartialFunction(std::initializer_list<std::pair<const EventId, Input>> init)
        : entries_(init) {}

    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    bool defined_at(const EventId& event) const { return entries_.count(event) != 0; }
    Input at(const EventId& event) const;

    std::vector<EventId> domain() const;

    // Extension order: *this <= g iff g is defined wherever *this is, with the
    // same values.
    bool leq(const PartialFunction& g) const;
    bool lt(const PartialFunction& g) const { return size() < g.size() && leq(g); }

    bool operator==(const PartialFunction& g) const { return entries_ == g.entries_; }
    bool operator!=(const PartialFunction& g) const { return entries_ != g.entries_; }
    // Canonical total order: lexicographic over the sorted entry sequence.
    bool operator<(const PartialFunction& g) const { return entries_ < g.entries_; }

private:
    Entries entries_;
};

// Greatest common restriction: defined where both agree.
PartialFunction pf_meet(const PartialFunction& f, const PartialFunction& g);

// Compatible iff they agree on the overlap of their domains, i.e. the meet's
// domain is the whole domain intersection.
bool pf_compatible(const PartialFunction& f, const PartialFunction& g);

// Union of the two assignments; absent when the arguments conflict.
std::optional<PartialFunction> pf_join(const PartialFunction& f, const PartialFunction& g);

// Join of a whole family; absent when any two members conflict.
std::optional<PartialFunction> pf_join_all(std::span<const PartialFunction> fs);

// Canonical serialization "A:0,B:1" (events ascending); empty function -> "".
std::string to_string(const PartialFunction& f);
PartialFunction parse_partial_function(const std::string& text);

}  // namespace ct
