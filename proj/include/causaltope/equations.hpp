#pragma once
// Labelled sparse linear equations over exact rationals, incremental Gaussian
// elimination, and the unique reduced row echelon form.  Equation systems over
// the joint-output coordinates of a cover carve out causaltopes: marginal
// agreement rows bind overlapping context blocks together, quasi-normalisation
// rows equate total masses across blocks, and ranks of the reduced systems
// give polytope dimensions and inclusions.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ct {

using Rational = mpq_class;

// One sparse equation over a fixed column range: sum_i c_i * x_i = rhs.
struct EquationRow {
    std::string label;
    std::map<std::uint32_t, Rational> coefficients;  // nonzero entries only
    Rational rhs{0};
};

// Compares label, coefficients and right-hand side.
bool operator==(const EquationRow& a, const EquationRow& b);

// sum_i c_i * u_i - rhs
Rational residual(const EquationRow& row, const std::vector<Rational>& u);
double residual(const EquationRow& row, const std::vector<double>& u);

// A list of rows over a fixed number of columns, with unique labels.
class EquationSystem {
public:
    explicit EquationSystem(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    const std::vector<EquationRow>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    // Validates the column range and label uniqueness.  Rows that are
    // identically zero (no coefficients, zero right-hand side) are dropped.
    void add(EquationRow row);
    // Adds a copy of every row of `other`; widths must match.  The prefix is
    // prepended to each label, letting two systems merge without collisions.
    void append(const EquationSystem& other, const std::string& label_prefix = "");

    // Row-by-row equality of coefficients and right-hand sides, ignoring
    // labels.
    bool same_rows(const EquationSystem& other) const;

private:
    std::size_t width_;
    std::vector<EquationRow> rows_;
    std::set<std::string> labels_;
};

// Incremental exact Gaussian elimination.  Rows are absorbed one at a time,
// the rank is available throughout, and the unique reduced row echelon form
// of everything absorbed so far can be extracted at any point.
class RrefBuilder {
public:
    explicit RrefBuilder(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    // Reduces the row against the current basis and keeps it when it is
    // independent.  Returns true when the rank grew.
    bool absorb(EquationRow row);
    void absorb_all(const EquationSystem& system);
    std::size_t rank() const { return basis_.size(); }
    // True once some absorbed row reduced to 0 = c with c nonzero.
    bool infeasible() const { return infeasible_; }
    // The reduced row echelon form: pivots strictly increase from row to row,
    // each pivot coefficient is 1 and its column is cleared everywhere else.
    // This matrix is unique for the absorbed row space; each row's label is
    // inherited from the row that introduced its pivot.
    EquationSystem reduced() const;

private:
    std::size_t width_;
    std::map<std::uint32_t, EquationRow> basis_;  // keyed by leading column
    bool infeasible_ = false;
};

// Reduced row echelon form, rank, and row-space equality of whole systems.
EquationSystem rref(const EquationSystem& system);
std::size_t rank(const EquationSystem& system);
bool same_row_space(const EquationSystem& a, const EquationSystem& b);

// One line per row: the label, then width() signed coefficient entries, in
// column order, comma-separated.
std::string to_csv(const EquationSystem& system);

}  // namespace ct
