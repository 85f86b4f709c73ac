#pragma once
// Causaltopes: polytopes of causal probability assignments over a cover's
// joint-output coordinates.  A point assigns one distribution per context
// block; causality equations make overlapping contexts agree on the marginal
// over every shared lowerset, and quasi-normalisation equations make total
// masses agree across contexts.  Dimensions, inclusions and intersections of
// causaltopes are all computed exactly from the reduced row echelon form of
// these systems.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causaltope/coordinates.hpp"
#include "causaltope/equations.hpp"

namespace ct {

enum class CausalityMode {
    // One block of equations per unordered pair of contexts, equating the
    // marginals over their full shared lowerset.  Fewer rows, same span.
    pairwise,
    // One block per distinct shared lowerset, chaining all contexts that
    // contain it.  Matches the itemised per-lowerset bookkeeping used when
    // equations are listed or exported for inspection.
    full,
};

// Marginal-agreement equations binding the context blocks of a cover; both
// modes span the same row space.  Work is split over independent blocks and
// may run on multiple threads; the serial variant is the reference
// implementation producing the identical row list on one thread.
EquationSystem causality_equations(const CoordinateIndex& index,
                                   CausalityMode mode = CausalityMode::pairwise);
EquationSystem causality_equations_serial(const CoordinateIndex& index,
                                          CausalityMode mode = CausalityMode::pairwise);

// Total-mass agreement between consecutive context blocks: one row fewer than
// there are contexts.
EquationSystem qnorm_equations(const CoordinateIndex& index);
// One row per context block summing it to 1.  Kept out of dimension counts,
// which quotient by a single overall normalisation instead.
EquationSystem norm_rows(const CoordinateIndex& index);

// The 0/1 point selecting one joint output per context block.
std::vector<Rational> profile_vector(const CoordinateIndex& index,
                                     const std::vector<std::size_t>& profile);

class Causaltope {
public:
    Causaltope(Cover cover, OutputFamily outputs, CausalityMode mode = CausalityMode::pairwise);
    static Causaltope standard(const SpaceRef& space, const OutputFamily& outputs,
                               CausalityMode mode = CausalityMode::pairwise);
    static Causaltope solipsistic(const SpaceRef& space, const OutputFamily& outputs,
                                  CausalityMode mode = CausalityMode::pairwise);

    const CoordinateIndex& index() const { return index_; }
    const EquationSystem& causality() const { return caus_; }
    const EquationSystem& quasi_norm() const { return qnorm_; }

    // Reduced row echelon form of causality and quasi-normalisation rows
    // together; computed once on first use.
    const EquationSystem& reduced() const;
    std::size_t rank() const { return reduced().size(); }
    // Coordinates, minus one for overall normalisation, minus the rank.
    std::size_t dimension() const { return index_.size() - 1 - rank(); }

    // Membership: componentwise nonnegative, each context block sums to 1,
    // and every causality equation holds — exactly, or within tolerance.
    bool contains(const std::vector<Rational>& u) const;
    bool contains(const std::vector<double>& u, double tolerance = 1e-9) const;

private:
    Causaltope(CoordinateIndex index, EquationSystem caus, EquationSystem qnorm);
    friend Causaltope intersect(const Causaltope& a, const Causaltope& b);

    CoordinateIndex index_;
    EquationSystem caus_;
    EquationSystem qnorm_;
    mutable std::optional<EquationSystem> reduced_;
};

enum class TopeOrder { equal, subset, superset, incomparable };

// Compares two causaltopes over matching coordinates (contexts are aligned by
// the join of their maxima, slots by event and alphabet); `subset` means the
// first is contained in the second.  Throws when coordinates cannot be
// aligned.
TopeOrder compare(const Causaltope& a, const Causaltope& b);

// The causaltope cut out by both systems at once, over the first argument's
// coordinates.
Causaltope intersect(const Causaltope& a, const Causaltope& b);

// The second causaltope's causality rows rewritten onto the first's
// coordinates, under the same context alignment used by compare/intersect.
// Throws when the coordinates cannot be aligned.
EquationSystem causality_onto(const Causaltope& onto, const Causaltope& from);

// The second causaltope's reduced constraint rows (causality and chain
// quasi-normalisation together) rewritten onto the first's coordinates, under
// the same alignment.  Throws when the coordinates cannot be aligned.
EquationSystem constraints_onto(const Causaltope& onto, const Causaltope& from);

// Linear pushforward of points over the induced cover of a finer space into
// the coordinates of the ambient cover.  Each ambient coordinate reads off a
// marginal of the finer point when the context's tip classes collapse
// consistently, and 0 otherwise; the map is injective and sends the induced
// causaltope into the ambient one.
class Embedding {
public:
    Embedding(const Cover& ambient, const OutputFamily& outputs, const SpaceRef& finer);

    // Coordinates over the induced cover of the finer space.
    const CoordinateIndex& domain() const { return domain_; }
    // Coordinates over the ambient cover.
    const CoordinateIndex& codomain() const { return codomain_; }

    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    std::vector<double> apply(const std::vector<double>& v) const;

    // Per codomain coordinate, the domain coordinates it sums.
    const std::vector<std::vector<std::uint32_t>>& terms() const { return terms_; }

private:
    Embedding(const InducedCover& induced, const Cover& ambient, const OutputFamily& outputs);

    CoordinateIndex domain_;
    CoordinateIndex codomain_;
    // Per ambient coordinate: the domain coordinates it sums, empty when the
    // coordinate collapses inconsistently and always reads 0.
    std::vector<std::vector<std::uint32_t>> terms_;
};

}  // namespace ct
