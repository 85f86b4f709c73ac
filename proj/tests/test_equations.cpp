// Unit tests for sparse exact equation systems and reduced row echelon form.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "causaltope/equations.hpp"

using namespace ct;

namespace {

EquationRow row(const std::string& label, const std::vector<std::pair<std::uint32_t, int>>& entries,
                int rhs = 0) {
    EquationRow r;
    r.label = label;
    for (auto [col, coeff] : entries) r.coefficients[col] = coeff;
    r.rhs = rhs;
    return r;
}

// Dense view of a system's coefficients and right-hand sides.
std::vector<std::vector<Rational>> dense(const EquationSystem& system) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : system.rows()) {
        std::vector<Rational> d(system.width() + 1, Rational(0));
        for (const auto& [col, coeff] : r.coefficients) d[col] = coeff;
        d[system.width()] = r.rhs;
        rows.push_back(std::move(d));
    }
    return rows;
}

}  // namespace

TEST_CASE("systems validate rows as they are added") {
    EquationSystem system(3);
    system.add(row("a", {{0, 1}, {2, -1}}));
    CHECK(system.size() == 1);

    SUBCASE("zero rows are dropped") {
        system.add(row("zero", {{1, 0}}, 0));
        CHECK(system.size() == 1);
    }
    SUBCASE("duplicate labels are rejected") {
        CHECK_THROWS_AS(system.add(row("a", {{1, 1}})), std::invalid_argument);
    }
    SUBCASE("columns outside the width are rejected") {
        CHECK_THROWS_AS(system.add(row("b", {{3, 1}})), std::invalid_argument);
    }
    SUBCASE("append prefixes labels to keep them unique") {
        EquationSystem other(3);
        other.add(row("a", {{1, 1}}));
        system.append(other, "other:");
        CHECK(system.size() == 2);
        CHECK(system.rows()[1].label == "other:a");
        EquationSystem narrow(2);
        CHECK_THROWS_AS(system.append(narrow), std::invalid_argument);
    }
}

TEST_CASE("residuals evaluate rows at a point") {
    auto r = row("r", {{0, 2}, {2, -1}}, 3);
    std::vector<Rational> u{Rational(2), Rational(7), Rational(1)};
    CHECK(residual(r, u) == 0);
    u[2] = 2;
    CHECK(residual(r, u) == -1);
    std::vector<double> v{2.0, 7.0, 1.0};
    CHECK(residual(r, v) == doctest::Approx(0.0));
}

TEST_CASE("a dependent row does not grow the rank") {
    RrefBuilder builder(3);
    CHECK(builder.absorb(row("a", {{0, 1}, {1, 2}}, 3)));
    CHECK_FALSE(builder.absorb(row("2a", {{0, 2}, {1, 4}}, 6)));
    CHECK(builder.rank() == 1);
    CHECK_FALSE(builder.infeasible());

    auto reduced = builder.reduced();
    auto d = dense(reduced);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == std::vector<Rational>{1, 2, 0, 3});
}

TEST_CASE("contradictory rows are flagged infeasible") {
    RrefBuilder builder(2);
    builder.absorb(row("a", {{0, 1}, {1, 1}}, 1));
    CHECK_FALSE(builder.absorb(row("b", {{0, 1}, {1, 1}}, 2)));
    CHECK(builder.rank() == 1);
    CHECK(builder.infeasible());
}

TEST_CASE("an invertible system reduces to the identity with its solution") {
    // x + y + z = 6, 2y + z = 5, 3z = 9  =>  (2, 1, 3)
    EquationSystem system(3);
    system.add(row("r0", {{0, 1}, {1, 1}, {2, 1}}, 6));
    system.add(row("r1", {{1, 2}, {2, 1}}, 5));
    system.add(row("r2", {{2, 3}}, 9));
    auto reduced = rref(system);
    auto d = dense(reduced);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == std::vector<Rational>{1, 0, 0, 2});
    CHECK(d[1] == std::vector<Rational>{0, 1, 0, 1});
    CHECK(d[2] == std::vector<Rational>{0, 0, 1, 3});
    CHECK(rank(system) == 3);
}

TEST_CASE("fractions appear and cancel exactly") {
    EquationSystem system(2);
    system.add(row("r0", {{0, 3}, {1, 7}}));
    system.add(row("r1", {{0, 2}, {1, 5}}));
    auto d = dense(rref(system));
    REQUIRE(d.size() == 2);
    CHECK(d[0] == std::vector<Rational>{1, 0, 0});
    CHECK(d[1] == std::vector<Rational>{0, 1, 0});
}

TEST_CASE("the reduced form does not depend on the order rows arrive in") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t width = 6;
        std::vector<EquationRow> rows;
        for (int i = 0; i < 7; ++i) {
            EquationRow r;
            r.label = "r" + std::to_string(i);
            for (std::uint32_t c = 0; c < width; ++c) {
                int value = coeff(rng);
                if (value != 0) r.coefficients[c] = value;
            }
            r.rhs = 0;
            rows.push_back(std::move(r));
        }
        EquationSystem forward(width);
        for (const auto& r : rows) forward.add(r);
        std::shuffle(rows.begin(), rows.end(), rng);
        EquationSystem shuffled(width);
        for (const auto& r : rows) shuffled.add(r);
        CHECK(rref(forward).same_rows(rref(shuffled)));
        CHECK(rank(forward) == rank(shuffled));
    }
}

TEST_CASE("rank matches a known factorisation") {
    // A 6x8 product of a 6x3 and a 3x8 integer matrix has rank exactly 3:
    // both factors contain an identity block.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-4, 4);
    const std::size_t r = 3, n = 6, m = 8;
    std::vector<std::vector<int>> a(n, std::vector<int>(r, 0));
    std::vector<std::vector<int>> b(r, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < r; ++i) a[i][i] = 1;
    for (std::size_t i = r; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) a[i][j] = entry(rng);
    for (std::size_t i = 0; i < r; ++i) {
        b[i][i] = 1;
        for (std::size_t j = r; j < m; ++j) b[i][j] = entry(rng);
    }
    EquationSystem system(m);
    for (std::size_t i = 0; i < n; ++i) {
        EquationRow row;
        row.label = "p" + std::to_string(i);
        for (std::uint32_t j = 0; j < m; ++j) {
            int acc = 0;
            for (std::size_t k = 0; k < r; ++k) acc += a[i][k] * b[k][j];
            if (acc != 0) row.coefficients[j] = acc;
        }
        system.add(std::move(row));
    }
    CHECK(rank(system) == r);
}

TEST_CASE("rref is idempotent") {
    EquationSystem system(4);
    system.add(row("r0", {{0, 2}, {1, 4}, {3, 2}}));
    system.add(row("r1", {{1, 1}, {2, 1}}));
    system.add(row("r2", {{0, 1}, {1, 3}, {2, 1}, {3, 1}}));
    auto once = rref(system);
    auto twice = rref(once);
    CHECK(once.same_rows(twice));
}

TEST_CASE("row spaces compare by content, not presentation") {
    EquationSystem a(3);
    a.add(row("s", {{0, 1}, {1, 1}}));
    EquationSystem b(3);
    b.add(row("t", {{0, 2}, {1, 2}}));
    EquationSystem c(3);
    c.add(row("u", {{0, 1}, {1, -1}}));
    CHECK(same_row_space(a, b));
    CHECK_FALSE(same_row_space(a, c));
    EquationSystem ab(3);
    ab.append(a, "a:");
    ab.append(b, "b:");
    CHECK(same_row_space(ab, a));
}

TEST_CASE("csv lists the label and every signed coefficient") {
    EquationSystem system(4);
    system.add(row("first", {{0, 1}, {2, -1}}));
    system.add(row("second", {{1, 2}, {3, -2}}));
    CHECK(to_csv(system) == "first,1,0,-1,0\nsecond,0,2,0,-2\n");
}
