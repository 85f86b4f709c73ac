#pragma once
// Covers of a history space: antichains of nonempty lowersets that jointly
// exhaust the space.  Each context carries tip-history classes, the unit of
// output bookkeeping for everything built on top of covers.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "causaltope/history_space.hpp"

namespace ct {

// Shared immutable parent for lowersets and covers.
using SpaceRef = std::shared_ptr<const HistorySpace>;
SpaceRef share(HistorySpace space);

// A down-closed subset of a space's histories, stored as sorted indices into
// the parent's history list.  The canonical key is the serialized list of
// maximal members, which determines the lowerset.
class Lowerset {
public:
    Lowerset(SpaceRef parent, std::vector<std::uint32_t> members);

    // Histories of the parent lying below at least one generator; generators
    // may be arbitrary partial functions (e.g. closure members).
    static Lowerset down_closure(SpaceRef parent, const std::vector<PartialFunction>& generators);
    static Lowerset whole(SpaceRef parent);

    const HistorySpace& parent() const { return *parent_; }
    const SpaceRef& parent_ref() const { return parent_; }
    const std::vector<std::uint32_t>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool contains(std::uint32_t index) const;
    bool contains(const PartialFunction& h) const;
    std::vector<PartialFunction> histories() const;
    // Members with no other member strictly above them.
    std::vector<PartialFunction> maxima() const;
    // Join closure of the member histories.
    std::vector<PartialFunction> closure() const;
    // Union of the member domains, sorted.
    std::vector<EventId> events() const;

    bool subset_of(const Lowerset& other) const;
    Lowerset intersection(const Lowerset& other) const;

    const std::string& key() const { return key_; }
    std::string to_string() const;

    friend bool operator==(const Lowerset& a, const Lowerset& b);
    friend bool operator!=(const Lowerset& a, const Lowerset& b) { return !(a == b); }
    friend bool operator<(const Lowerset& a, const Lowerset& b) { return a.key_ < b.key_; }

private:
    SpaceRef parent_;
    std::vector<std::uint32_t> members_;
    std::string key_;
};

// All nonempty lowersets of the parent.  Throws when the count exceeds cap.
std::vector<Lowerset> enumerate_lowersets(const SpaceRef& parent, std::size_t cap = 4096);
// All nonempty lowersets of the parent contained in `within`.
std::vector<Lowerset> enumerate_sub_lowersets(const Lowerset& within, std::size_t cap = 4096);

// An antichain of nonempty lowersets whose union is the whole space.
// Contexts are kept sorted by canonical key.
class Cover {
public:
    Cover(SpaceRef parent, std::vector<Lowerset> contexts);

    // Downsets of the maximal closure members.
    static Cover standard(SpaceRef parent);
    // Downsets of the maximal histories.
    static Cover fully_solipsistic(SpaceRef parent);
    // The whole space as a single context.
    static Cover classical(SpaceRef parent);

    const HistorySpace& parent() const { return *parent_; }
    const SpaceRef& parent_ref() const { return parent_; }
    const std::vector<Lowerset>& contexts() const { return contexts_; }
    std::size_t size() const { return contexts_.size(); }

    // True when every context of this cover lies inside a context of the
    // coarser cover: this cover is at least as fine.
    bool refines(const Cover& coarser) const;
    // True when the cover is not a refinement of the standard cover.
    bool is_solipsistic() const;

    std::string to_string() const;

    friend bool operator==(const Cover& a, const Cover& b);
    friend bool operator!=(const Cover& a, const Cover& b) { return !(a == b); }
    friend bool operator<(const Cover& a, const Cover& b);

private:
    SpaceRef parent_;
    std::vector<Lowerset> contexts_;
};

// Every cover of the parent, sorted canonically.  The lowerset cap bounds the
// context universe, as in enumerate_lowersets.
std::vector<Cover> enumerate_covers(const SpaceRef& parent, std::size_t lowerset_cap = 4096);

// Histories of a context that have the given event as a tip, grouped by the
// forced-equality relation: two tip histories share a class when consistency
// forces every function on the context to output the same value at the event
// for both.  This is the connected-component relation of pairwise
// compatibility on the tip histories.
struct TipClass {
    EventId event;
    std::vector<std::uint32_t> members;  // sorted indices into the parent's histories
    std::string id;                      // serialization of the least member
};

// All tip classes of the context, sorted by (event, id).  Every event of the
// context owns at least one class.
std::vector<TipClass> tip_classes(const Lowerset& context);

// For each tip class of inner (a lowerset contained in outer, same parent),
// the position of the tip class of outer that contains it.
std::vector<std::size_t> class_inclusion_map(const Lowerset& inner, const Lowerset& outer);

// The lowerset of a finer space (same events and inputs, closure containing
// the parent's) made of the finer histories lying below members of l.
Lowerset induce_lowerset(const Lowerset& l, const SpaceRef& finer);

// Cover induced on a finer space: the maximal induced lowersets.  Distinct
// contexts can induce nested or equal lowersets, so the induced cover may be
// smaller than the original; host_context records, for each original context,
// a cover context containing its induced lowerset.
struct InducedCover {
    Cover cover;
    std::vector<Lowerset> induced;           // per original context
    std::vector<std::size_t> host_context;   // per original context, index into cover
};
InducedCover induce_cover(const Cover& c, const SpaceRef& finer);

// For each tip class of the coarse context, the position of the tip class of
// the induced lowerset it maps onto: the class of any finer history below a
// representative with the same tip event.  Total and well-defined because the
// finer closure contains the coarser one.
std::vector<std::size_t> induced_class_map(const Lowerset& coarse, const Lowerset& induced);

}  // namespace ct
