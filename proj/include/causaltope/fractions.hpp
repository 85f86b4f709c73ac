#pragma once
// Recoverable fractions of empirical behaviour: the largest quasi-normalised
// component of a vector inside one causaltope, the largest joint decomposition
// across a family of causaltopes, and the causal, no-signalling, causally
// separable and local fractions built from those linear programs.  Includes
// grid sweeps of a fraction across two experiment parameters.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "causaltope/causaltope.hpp"
#include "causaltope/compose.hpp"
#include "causaltope/simplex.hpp"

namespace ct {

// A componentwise-nonnegative vector over a coordinate index whose context
// block sums all agree; the common block sum is its mass.
template <typename S>
struct QuasiDistribution {
    std::vector<S> values;
    S mass{};
};

// Validates nonnegativity and block-sum agreement (within tolerance in double
// mode), computing the mass; throws std::invalid_argument otherwise.
template <typename S>
QuasiDistribution<S> quasi_distribution(const CoordinateIndex& index, std::vector<S> values,
                                        double tolerance = 1e-9);

// Sum of the first context block.
template <typename S>
S block_mass(const CoordinateIndex& index, const std::vector<S>& values);

template <typename S>
struct FractionResult {
    LPStatus status = LPStatus::optimal;
    S value{};                                     // total recovered mass
    std::vector<QuasiDistribution<S>> components;  // one per member, on the ambient coordinates
    std::size_t pivots = 0;
};

// Largest-mass v satisfying the quasi-normalisation chain of `index`, the
// given homogeneous member rows, and 0 <= v <= u.
template <typename S>
FractionResult<S> max_component(const CoordinateIndex& index, const std::vector<S>& u,
                                const EquationSystem& member_rows,
                                const SimplexOptions& options = {});

// Member rows taken from `member` and rewritten onto the ambient coordinates;
// throws when the two coordinate systems cannot be aligned.
template <typename S>
FractionResult<S> max_component(const Causaltope& ambient, const std::vector<S>& u,
                                const Causaltope& member, const SimplexOptions& options = {});

// Largest total mass of per-member quasi-normalised vectors v_z, each
// satisfying its member's rows, with the sum bounded by u componentwise.
template <typename S>
FractionResult<S> max_decomposition(const CoordinateIndex& index, const std::vector<S>& u,
                                    const std::vector<EquationSystem>& member_rows,
                                    const SimplexOptions& options = {});

template <typename S>
FractionResult<S> max_decomposition(const Causaltope& ambient, const std::vector<S>& u,
                                    const std::vector<const Causaltope*>& members,
                                    const SimplexOptions& options = {});

// Causal fraction of u in a subspace sharing the ambient's events and inputs.
// When the subspace's standard coordinates align with the ambient's, its
// causality rows are rewritten directly; otherwise the member causaltope is
// built over the cover induced on the subspace and pushed forward along the
// embedding into the ambient coordinates.
template <typename S>
FractionResult<S> causal_fraction(const Causaltope& ambient, const std::vector<S>& u,
                                  const HistorySpace& subspace,
                                  const SimplexOptions& options = {});

// Joint causal fraction over a family of subspaces; one component each.
template <typename S>
FractionResult<S> causal_fraction(const Causaltope& ambient, const std::vector<S>& u,
                                  const std::vector<HistorySpace>& subspaces,
                                  const SimplexOptions& options = {});

// Causal fraction in the fully unordered space on the ambient's events: the
// component recoverable without any signalling at all.
template <typename S>
FractionResult<S> no_signalling_fraction(const Causaltope& ambient, const std::vector<S>& u,
                                         const SimplexOptions& options = {});

template <typename S>
struct SeparabilityFractions {
    FractionResult<S> decomposition;  // one component per completion
    S separable{};                    // mass recovered across the completions
    S inseparable{};                  // 1 - separable
};

// Joint causal fraction over the causally complete refinements of the
// ambient space (pass spaces from causal_completions, or validated hints).
template <typename S>
SeparabilityFractions<S> causally_separable_fraction(
    const Causaltope& ambient, const std::vector<S>& u,
    const std::vector<HistorySpace>& completions, const SimplexOptions& options = {});

enum class LocalMode { all, separable_only };

template <typename S>
struct LocalFractionResult {
    FractionResult<S> lp;        // value: the local fraction; one component: the recovered part
    mpz_class functions_total;   // causal functions on the ambient space
    std::size_t columns = 0;     // support-compatible (and separable, when filtered) functions
};

// Largest total weight of a subconvex mixture of deterministic causal
// behaviours dominated by u.  Columns are the functions on the ambient space
// compatible with u's support; separable_only keeps only functions arising
// from a causally complete refinement (the given completions, or the computed
// ones when none are passed).
template <typename S>
LocalFractionResult<S> local_fraction(const Causaltope& ambient, const std::vector<S>& u,
                                      LocalMode mode = LocalMode::all,
                                      const std::vector<HistorySpace>* completions = nullptr,
                                      std::uint64_t enumeration_bound = 1ull << 24,
                                      const SimplexOptions& options = {});

struct LandscapeResult {
    std::vector<double> gamma0;              // row parameter values
    std::vector<double> gamma1;              // column parameter values
    std::vector<std::vector<double>> value;  // value[i][j] at (gamma0[i], gamma1[j]); NaN on failure
    double min_value = 0.0;                  // over successful points
    double min_gamma0 = 0.0;
    double min_gamma1 = 0.0;
    std::vector<std::string> failures;       // "gamma0,gamma1: reason" per failed point

    // Rows "gamma0,gamma1,value" after a header line, row-major.
    std::string to_csv() const;
};

// Evaluates the quantity over the parameter grid; points run in parallel and
// per-point failures are recorded rather than fatal.
LandscapeResult landscape(const std::vector<double>& gamma0, const std::vector<double>& gamma1,
                          const std::function<double(double, double)>& quantity);

#define CT_FRACTIONS_EXTERN(S)                                                                  \
    extern template QuasiDistribution<S> quasi_distribution(const CoordinateIndex&,            \
                                                            std::vector<S>, double);           \
    extern template S block_mass(const CoordinateIndex&, const std::vector<S>&);               \
    extern template FractionResult<S> max_component(const CoordinateIndex&,                    \
                                                    const std::vector<S>&,                     \
                                                    const EquationSystem&,                     \
                                                    const SimplexOptions&);                    \
    extern template FractionResult<S> max_component(const Causaltope&, const std::vector<S>&,  \
                                                    const Causaltope&, const SimplexOptions&); \
    extern template FractionResult<S> max_decomposition(                                       \
        const CoordinateIndex&, const std::vector<S>&, const std::vector<EquationSystem>&,     \
        const SimplexOptions&);                                                                \
    extern template FractionResult<S> max_decomposition(const Causaltope&,                     \
                                                        const std::vector<S>&,                 \
                                                        const std::vector<const Causaltope*>&, \
                                                        const SimplexOptions&);                \
    extern template FractionResult<S> causal_fraction(const Causaltope&, const std::vector<S>&, \
                                                      const HistorySpace&,                     \
                                                      const SimplexOptions&);                  \
    extern template FractionResult<S> causal_fraction(const Causaltope&, const std::vector<S>&, \
                                                      const std::vector<HistorySpace>&,        \
                                                      const SimplexOptions&);                  \
    extern template FractionResult<S> no_signalling_fraction(                                  \
        const Causaltope&, const std::vector<S>&, const SimplexOptions&);                      \
    extern template SeparabilityFractions<S> causally_separable_fraction(                      \
        const Causaltope&, const std::vector<S>&, const std::vector<HistorySpace>&,            \
        const SimplexOptions&);                                                                \
    extern template LocalFractionResult<S> local_fraction(                                     \
        const Causaltope&, const std::vector<S>&, LocalMode,                                   \
        const std::vector<HistorySpace>*, std::uint64_t, const SimplexOptions&);

CT_FRACTIONS_EXTERN(Rational)
CT_FRACTIONS_EXTERN(double)
#undef CT_FRACTIONS_EXTERN

}  // namespace ct
