#pragma once
// Linear programming over box-bounded variables: maximise a linear objective
// subject to equality rows and 0 <= x <= u, by the two-phase primal simplex
// method on a dense tableau.  Exact over rationals, tolerance-based over
// doubles.  Entering columns follow the largest-coefficient rule until a
// degenerate stall, then Bland's rule until progress resumes, so runs are
// deterministic and cycling is impossible.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "causaltope/equations.hpp"

namespace ct {

enum class LPStatus { optimal, infeasible };

// maximise  objective . x   subject to   terms . x (= | <=) rhs,  0 <= x <= upper.
// A missing upper bound leaves the variable unbounded above.  Inequality rows
// are realised at solve time through slack columns appended after the
// declared variables.
template <typename S>
struct LinearProgram {
    struct Row {
        std::vector<std::pair<std::uint32_t, S>> terms;
        S rhs;
        bool leq;  // true: terms.x <= rhs; false: terms.x = rhs
    };

    std::vector<S> objective;
    std::vector<std::optional<S>> upper;
    std::vector<Row> rows;

    std::size_t variables() const { return objective.size(); }

    std::size_t add_variable(S objective_coefficient, std::optional<S> upper_bound) {
        objective.push_back(std::move(objective_coefficient));
        upper.push_back(std::move(upper_bound));
        return objective.size() - 1;
    }
    void add_eq_row(std::vector<std::pair<std::uint32_t, S>> terms, S rhs) {
        rows.push_back(Row{std::move(terms), std::move(rhs), false});
    }
    void add_le_row(std::vector<std::pair<std::uint32_t, S>> terms, S rhs) {
        rows.push_back(Row{std::move(terms), std::move(rhs), true});
    }
};

template <typename S>
struct SimplexResult {
    LPStatus status = LPStatus::optimal;
    S value{};                // objective at the optimum; 0 when infeasible
    std::vector<S> solution;  // one entry per declared variable; empty when infeasible
    std::size_t pivots = 0;   // basis changes and bound flips across both phases
};

struct SimplexOptions {
    // Comparison tolerance in double mode; ignored for rationals.
    double tolerance = 1e-9;
    // Hard cap on pivots; 0 scales the cap with the instance size.
    std::size_t max_pivots = 0;
};

// Throws std::invalid_argument on malformed input (negative upper bound,
// column index out of range) and std::logic_error when the objective is
// unbounded or the pivot cap is hit.
template <typename S>
SimplexResult<S> solve(const LinearProgram<S>& lp, const SimplexOptions& options = {});

extern template SimplexResult<Rational> solve(const LinearProgram<Rational>&,
                                              const SimplexOptions&);
extern template SimplexResult<double> solve(const LinearProgram<double>&, const SimplexOptions&);

}  // namespace ct
