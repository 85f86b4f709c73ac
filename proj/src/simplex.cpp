#include "causaltope/simplex.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ct {

namespace {

template <typename S>
struct Ops;

template <>
struct Ops<Rational> {
    static constexpr bool exact = true;
    static bool pos(const Rational& x, double) { return x > 0; }
    static bool neg(const Rational& x, double) { return x < 0; }
    static bool zero(const Rational& x, double) { return x == 0; }
    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
    static Rational floor_zero(const Rational& x) { return x < 0 ? Rational(0) : x; }
};

template <>
struct Ops<double> {
    static constexpr bool exact = false;
    static bool pos(double x, double eps) { return x > eps; }
    static bool neg(double x, double eps) { return x < -eps; }
    static bool zero(double x, double eps) { return std::abs(x) <= eps; }
    static double magnitude(double x) { return std::abs(x); }
    static double floor_zero(double x) { return x < 0 ? 0.0 : x; }
};

enum : int { kBasic = -1, kLower = 0, kUpper = 1 };

// Dense simplex tableau over box-bounded columns.  Rows keep the invariant
// that each basic column is a unit vector; nonbasic columns rest at one of
// their bounds and `beta` carries the implied basic values.
template <typename S>
class Tableau {
public:
    Tableau(const LinearProgram<S>& lp, const SimplexOptions& options) : eps_(options.tolerance) {
        const std::size_t structural = lp.variables();
        std::size_t slacks = 0;
        for (const auto& row : lp.rows) slacks += row.leq ? 1 : 0;
        n_ = structural + slacks;
        m_ = lp.rows.size();

        upper_.assign(n_, std::nullopt);
        for (std::size_t j = 0; j < structural; ++j) {
            if (lp.upper[j] && *lp.upper[j] < 0)
                throw std::invalid_argument("negative upper bound on a variable");
            upper_[j] = lp.upper[j];
        }
        status_.assign(n_, kLower);

        rows_.assign(m_, std::vector<S>(n_, S{}));
        rhs_.assign(m_, S{});
        std::size_t slack = structural;
        for (std::size_t i = 0; i < m_; ++i) {
            for (const auto& [col, coeff] : lp.rows[i].terms) {
                if (col >= structural)
                    throw std::invalid_argument("row references an undeclared variable");
                rows_[i][col] += coeff;
            }
            rhs_[i] = lp.rows[i].rhs;
            if (lp.rows[i].leq) rows_[i][slack++] = S(1);
            if (rhs_[i] < 0) {
                for (auto& x : rows_[i]) x = -x;
                rhs_[i] = -rhs_[i];
            }
        }

        pivot_cap_ = options.max_pivots
                         ? options.max_pivots
                         : std::max<std::size_t>(10000, 20 * (m_ + n_ + slacks));
    }

    // Two-phase solve; fills status/value/solution of the result.
    SimplexResult<S> run(const LinearProgram<S>& lp) {
        SimplexResult<S> result;
        crash_basis();
        if (!phase_one()) {
            result.status = LPStatus::infeasible;
            result.pivots = pivots_;
            return result;
        }
        objective_.assign(n_, S{});
        for (std::size_t j = 0; j < lp.variables(); ++j) objective_[j] = lp.objective[j];
        canonicalise_objective();
        iterate();

        result.status = LPStatus::optimal;
        result.solution.assign(lp.variables(), S{});
        std::vector<S> x(n_, S{});
        for (std::size_t j = 0; j < n_; ++j)
            if (status_[j] == kUpper) x[j] = *upper_[j];
        for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = beta_[i];
        S value{};
        for (std::size_t j = 0; j < lp.variables(); ++j) {
            result.solution[j] = x[j];
            value += lp.objective[j] * x[j];
        }
        result.value = value;
        result.pivots = pivots_;
        return result;
    }

private:
    using O = Ops<S>;

    // Use singleton columns with positive coefficients as the initial basis
    // where their implied value respects the bounds; remaining rows receive
    // artificial columns.
    void crash_basis() {
        basis_.assign(m_, n_);  // n_ marks "artificial pending"
        beta_.assign(m_, S{});
        std::vector<std::size_t> count(n_, 0), owner(n_, 0);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (!O::zero(rows_[i][j], eps_)) {
                    ++count[j];
                    owner[j] = i;
                }
        std::vector<bool> covered(m_, false);
        for (std::size_t j = 0; j < n_; ++j) {
            if (count[j] != 1) continue;
            const std::size_t i = owner[j];
            if (covered[i]) continue;
            const S& coeff = rows_[i][j];
            if (!O::pos(coeff, eps_)) continue;
            S value = rhs_[i] / coeff;
            if (upper_[j] && value > *upper_[j]) continue;
            for (auto& x : rows_[i]) x /= coeff;
            rhs_[i] = value;
            rows_[i][j] = S(1);
            basis_[i] = j;
            status_[j] = kBasic;
            beta_[i] = value;
            covered[i] = true;
        }
        artificials_ = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (!covered[i]) ++artificials_;
        if (artificials_ == 0) return;
        const std::size_t total = n_ + artificials_;
        for (auto& row : rows_) row.resize(total, S{});
        status_.resize(total, kLower);
        upper_.resize(total, std::nullopt);
        std::size_t next = n_;
        for (std::size_t i = 0; i < m_; ++i) {
            if (covered[i]) continue;
            rows_[i][next] = S(1);
            basis_[i] = next;
            beta_[i] = rhs_[i];
            status_[next] = kBasic;
            ++next;
        }
    }

    // Maximise minus the artificial total; true when a feasible basis without
    // artificial columns remains.
    bool phase_one() {
        if (artificials_ == 0) return true;
        const std::size_t total = n_ + artificials_;
        objective_.assign(total, S{});
        for (std::size_t j = n_; j < total; ++j) objective_[j] = S(-1);
        canonicalise_objective();
        iterate();

        S infeasibility{};
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_) infeasibility += O::floor_zero(beta_[i]);
        const double feas_tol = O::exact ? 0.0 : eps_ * static_cast<double>(m_ + 1);
        if constexpr (O::exact) {
            if (infeasibility != 0) return false;
        } else {
            if (O::magnitude(infeasibility) > feas_tol) return false;
        }

        // Swap surviving artificial columns out of the basis at step zero, or
        // drop their rows as redundant.
        for (std::size_t r = m_; r-- > 0;) {
            if (basis_[r] < n_) continue;
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (status_[j] != kBasic && !O::zero(rows_[r][j], eps_)) {
                    enter = j;
                    break;
                }
            if (enter == n_) {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                beta_.erase(beta_.begin() + static_cast<std::ptrdiff_t>(r));
                --m_;
                continue;
            }
            const S entering_value = status_[enter] == kUpper ? *upper_[enter] : S{};
            status_[basis_[r]] = kLower;
            pivot(r, enter);
            basis_[r] = enter;
            status_[enter] = kBasic;
            beta_[r] = entering_value;
        }
        for (auto& row : rows_) row.resize(n_);
        status_.resize(n_);
        upper_.resize(n_);
        artificials_ = 0;
        return true;
    }

    void canonicalise_objective() {
        for (std::size_t i = 0; i < m_; ++i) {
            const S coeff = objective_[basis_[i]];
            if (O::zero(coeff, 0.0)) continue;
            const auto& row = rows_[i];
            for (std::size_t j = 0; j < objective_.size(); ++j)
                if (!O::zero(row[j], 0.0)) objective_[j] -= coeff * row[j];
            objective_[basis_[i]] = S{};
        }
    }

    void pivot(std::size_t r, std::size_t j) {
        const S piv = rows_[r][j];
        if (O::zero(piv, 0.0)) throw std::logic_error("zero pivot element");
        for (auto& x : rows_[r]) x /= piv;
        rhs_[r] /= piv;
        rows_[r][j] = S(1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const S factor = rows_[i][j];
            if (O::zero(factor, 0.0)) continue;
            const auto& src = rows_[r];
            auto& dst = rows_[i];
            for (std::size_t c = 0; c < dst.size(); ++c)
                if (!O::zero(src[c], 0.0)) dst[c] -= factor * src[c];
            dst[j] = S{};
            rhs_[i] -= factor * rhs_[r];
        }
        const S factor = objective_[j];
        if (!O::zero(factor, 0.0)) {
            const auto& src = rows_[r];
            for (std::size_t c = 0; c < objective_.size(); ++c)
                if (!O::zero(src[c], 0.0)) objective_[c] -= factor * src[c];
            objective_[j] = S{};
        }
    }

    void refresh_beta() {
        for (std::size_t i = 0; i < m_; ++i) {
            S value = rhs_[i];
            for (std::size_t j = 0; j < status_.size(); ++j)
                if (status_[j] == kUpper && !O::zero(rows_[i][j], 0.0))
                    value -= rows_[i][j] * *upper_[j];
            beta_[i] = value;
        }
    }

    // Entering column under the active rule; total column count of the
    // current tableau taken from status_.
    std::size_t pick_entering(bool bland) const {
        const std::size_t total = status_.size();
        std::size_t best = total;
        double best_mag = 0.0;
        for (std::size_t j = 0; j < total; ++j) {
            if (status_[j] == kBasic) continue;
            if (upper_[j] && O::zero(*upper_[j], eps_)) continue;  // fixed at 0
            const bool eligible = status_[j] == kLower ? O::pos(objective_[j], eps_)
                                                       : O::neg(objective_[j], eps_);
            if (!eligible) continue;
            if (bland) return j;
            const double mag = O::magnitude(objective_[j]);
            if (mag > best_mag) {
                best_mag = mag;
                best = j;
            }
        }
        return best;
    }

    void iterate() {
        const std::size_t stall_limit = m_ + 16;
        std::size_t stall = 0;
        bool bland = false;
        while (true) {
            if (pivots_ >= pivot_cap_)
                throw std::logic_error("simplex pivot cap exceeded (" +
                                       std::to_string(pivot_cap_) + ")");
            const std::size_t total = status_.size();
            const std::size_t j = pick_entering(bland);
            if (j == total) return;  // optimal for the active objective
            const int sign = status_[j] == kLower ? 1 : -1;

            // Ratio test: smallest step at which a basic column or the
            // entering column itself hits a bound.  Ties prefer the smallest
            // variable index (Bland), which also anti-cycles the stalled case.
            bool found = false;
            S step{};
            std::size_t leave_row = m_;       // m_ means "bound flip"
            std::size_t leave_var = total;
            bool leave_to_upper = false;
            auto consider = [&](const S& t, std::size_t row, std::size_t var, bool to_upper) {
                if (!found || t < step) {
                    found = true;
                    step = t;
                    leave_row = row;
                    leave_var = var;
                    leave_to_upper = to_upper;
                    return;
                }
                const bool tie = O::exact ? t == step : O::magnitude(t - step) <= eps_;
                if (tie && var < leave_var) {
                    if (t < step) step = t;
                    leave_row = row;
                    leave_var = var;
                    leave_to_upper = to_upper;
                }
            };
            for (std::size_t i = 0; i < m_; ++i) {
                const S& w = rows_[i][j];
                const S d = sign > 0 ? w : S(-w);
                if (O::pos(d, eps_)) {
                    consider(O::floor_zero(beta_[i]) / d, i, basis_[i], false);
                } else if (O::neg(d, eps_) && upper_[basis_[i]]) {
                    consider(O::floor_zero(*upper_[basis_[i]] - beta_[i]) / S(-d), i, basis_[i],
                             true);
                }
            }
            if (upper_[j]) consider(*upper_[j], m_, j, false);
            if (!found) throw std::logic_error("unbounded objective in the simplex");

            if (leave_row == m_ && leave_var == j) {
                // Bound flip: the entering column crosses to its other bound.
                status_[j] = status_[j] == kLower ? kUpper : kLower;
                for (std::size_t i = 0; i < m_; ++i)
                    if (!O::zero(rows_[i][j], 0.0))
                        beta_[i] -= S(sign) * step * rows_[i][j];
            } else {
                const std::size_t r = leave_row;
                const S entering_value =
                    (sign > 0 ? S{} : *upper_[j]) + S(sign) * step;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (i == r) continue;
                    if (!O::zero(rows_[i][j], 0.0))
                        beta_[i] -= S(sign) * step * rows_[i][j];
                }
                status_[basis_[r]] = leave_to_upper ? kUpper : kLower;
                pivot(r, j);
                basis_[r] = j;
                status_[j] = kBasic;
                beta_[r] = entering_value;
            }
            ++pivots_;
            if constexpr (!O::exact) {
                if (pivots_ % 256 == 0) refresh_beta();
            }
            if (O::zero(step, eps_)) {
                if (++stall > stall_limit) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
        }
    }

    double eps_;
    std::size_t n_ = 0;            // structural + slack columns
    std::size_t m_ = 0;            // live rows
    std::size_t artificials_ = 0;  // phase-1 columns beyond n_
    std::size_t pivots_ = 0;
    std::size_t pivot_cap_ = 0;
    std::vector<std::vector<S>> rows_;
    std::vector<S> rhs_;
    std::vector<S> objective_;
    std::vector<S> beta_;
    std::vector<std::size_t> basis_;
    std::vector<int> status_;
    std::vector<std::optional<S>> upper_;
};

}  // namespace

template <typename S>
SimplexResult<S> solve(const LinearProgram<S>& lp, const SimplexOptions& options) {
    Tableau<S> tableau(lp, options);
    return tableau.run(lp);
}

template SimplexResult<Rational> solve(const LinearProgram<Rational>&, const SimplexOptions&);
template SimplexResult<double> solve(const LinearProgram<double>&, const SimplexOptions&);

}  // namespace ct
