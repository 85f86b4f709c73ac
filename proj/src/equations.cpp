#include "causaltope/equations.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace ct {

bool operator==(const EquationRow& a, const EquationRow& b) {
    return a.label == b.label && a.coefficients == b.coefficients && a.rhs == b.rhs;
}

Rational residual(const EquationRow& row, const std::vector<Rational>& u) {
    Rational acc = -row.rhs;
    for (const auto& [col, coeff] : row.coefficients) acc += coeff * u.at(col);
    return acc;
}

double residual(const EquationRow& row, const std::vector<double>& u) {
    double acc = -row.rhs.get_d();
    for (const auto& [col, coeff] : row.coefficients) acc += coeff.get_d() * u.at(col);
    return acc;
}

void EquationSystem::add(EquationRow row) {
    for (auto it = row.coefficients.begin(); it != row.coefficients.end();) {
        if (it->first >= width_) throw std::invalid_argument("equation column out of range");
        if (it->second == 0)
            it = row.coefficients.erase(it);
        else
            ++it;
    }
    if (row.coefficients.empty() && row.rhs == 0) return;
    if (!labels_.insert(row.label).second)
        throw std::invalid_argument("duplicate equation label: " + row.label);
    rows_.push_back(std::move(row));
}

void EquationSystem::append(const EquationSystem& other, const std::string& label_prefix) {
    if (other.width_ != width_) throw std::invalid_argument("appending differently sized system");
    for (const auto& row : other.rows_) {
        EquationRow copy = row;
        copy.label = label_prefix + copy.label;
        add(std::move(copy));
    }
}

bool EquationSystem::same_rows(const EquationSystem& other) const {
    if (width_ != other.width_ || rows_.size() != other.rows_.size()) return false;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].coefficients != other.rows_[i].coefficients || rows_[i].rhs != other.rows_[i].rhs)
            return false;
    return true;
}

bool RrefBuilder::absorb(EquationRow row) {
    for (const auto& [col, coeff] : row.coefficients)
        if (col >= width_) throw std::invalid_argument("equation column out of range");
    while (!row.coefficients.empty()) {
        const std::uint32_t lead = row.coefficients.begin()->first;
        auto it = basis_.find(lead);
        if (it == basis_.end()) {
            basis_.emplace(lead, std::move(row));
            return true;
        }
        const EquationRow& pivot = it->second;
        Rational factor = row.coefficients.begin()->second / pivot.coefficients.begin()->second;
        for (const auto& [col, coeff] : pivot.coefficients) {
            auto entry = row.coefficients.find(col);
            if (entry == row.coefficients.end()) {
                row.coefficients.emplace(col, -factor * coeff);
            } else {
                entry->second -= factor * coeff;
                if (entry->second == 0) row.coefficients.erase(entry);
            }
        }
        row.rhs -= factor * pivot.rhs;
    }
    if (row.rhs != 0) infeasible_ = true;
    return false;
}

void RrefBuilder::absorb_all(const EquationSystem& system) {
    if (system.width() != width_) throw std::invalid_argument("absorbing differently sized system");
    for (const auto& row : system.rows()) absorb(row);
}

EquationSystem RrefBuilder::reduced() const {
    std::vector<EquationRow> rows;
    rows.reserve(basis_.size());
    for (const auto& [lead, row] : basis_) rows.push_back(row);
    // Clear every pivot column above its pivot row, last pivot first, and
    // normalise the pivots to 1; the result no longer depends on the order in
    // which rows were absorbed.
    for (std::size_t i = rows.size(); i-- > 0;) {
        const std::uint32_t lead = rows[i].coefficients.begin()->first;
        Rational pivot = rows[i].coefficients.begin()->second;
        if (pivot != 1) {
            for (auto& [col, coeff] : rows[i].coefficients) coeff /= pivot;
            rows[i].rhs /= pivot;
        }
        for (std::size_t j = 0; j < i; ++j) {
            auto entry = rows[j].coefficients.find(lead);
            if (entry == rows[j].coefficients.end()) continue;
            Rational factor = entry->second;
            for (const auto& [col, coeff] : rows[i].coefficients) {
                auto target = rows[j].coefficients.find(col);
                if (target == rows[j].coefficients.end()) {
                    rows[j].coefficients.emplace(col, -factor * coeff);
                } else {
                    target->second -= factor * coeff;
                    if (target->second == 0) rows[j].coefficients.erase(target);
                }
            }
            rows[j].rhs -= factor * rows[i].rhs;
        }
    }
    EquationSystem out(width_);
    for (auto& row : rows) out.add(std::move(row));
    return out;
}

EquationSystem rref(const EquationSystem& system) {
    RrefBuilder builder(system.width());
    builder.absorb_all(system);
    return builder.reduced();
}

std::size_t rank(const EquationSystem& system) {
    RrefBuilder builder(system.width());
    builder.absorb_all(system);
    return builder.rank();
}

bool same_row_space(const EquationSystem& a, const EquationSystem& b) {
    if (a.width() != b.width()) return false;
    RrefBuilder ra(a.width());
    ra.absorb_all(a);
    RrefBuilder rb(b.width());
    rb.absorb_all(b);
    if (ra.rank() != rb.rank()) return false;
    RrefBuilder ru = ra;
    ru.absorb_all(b);
    return ru.rank() == ra.rank();
}

std::string to_csv(const EquationSystem& system) {
    std::ostringstream out;
    for (const auto& row : system.rows()) {
        out << row.label;
        auto it = row.coefficients.begin();
        for (std::uint32_t col = 0; col < system.width(); ++col) {
            out << ',';
            if (it != row.coefficients.end() && it->first == col) {
                out << it->second.get_str();
                ++it;
            } else {
                out << '0';
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ct
