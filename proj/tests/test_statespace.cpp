#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numeric>

#include "superrad/basis.hpp"
#include "superrad/generator.hpp"

using namespace superrad;

TEST_CASE("twice_inversion counts excited minus ground") {
    CHECK(twice_inversion({0b11, 2}).twice_m == 2);
    CHECK(twice_inversion({0b01, 2}).twice_m == 0);
    CHECK(twice_inversion({0b000, 3}).twice_m == -3);
    for (int l = 1; l <= 6; ++l)
        for (std::uint32_t q = 0; q < (1u << l); ++q) {
            const BasisState s{q, l};
            CHECK(excited_count(s) + ground_count(s) == l);
            CHECK(twice_inversion(s).twice_m == excited_count(s) - ground_count(s));
        }
}

TEST_CASE("lower_set enumerates one state per excited atom") {
    auto f = lower_set({0b11, 2});
    REQUIRE(f.size() == 2);
    CHECK(((f[0].index == 0b10 && f[1].index == 0b01) ||
           (f[0].index == 0b01 && f[1].index == 0b10)));

    CHECK(lower_set({0b000, 3}).empty());

    auto f3 = lower_set({0b101, 3});
    REQUIRE(f3.size() == 2);
    CHECK(((f3[0].index == 0b100 && f3[1].index == 0b001) ||
           (f3[0].index == 0b001 && f3[1].index == 0b100)));
}

TEST_CASE("raise_set enumerates one state per ground atom") {
    auto g = raise_set({0b01, 2});
    REQUIRE(g.size() == 1);
    CHECK(g[0].index == 0b11);

    CHECK(raise_set({0b111, 3}).empty());

    auto g2 = raise_set({0b00, 2});
    REQUIRE(g2.size() == 2);
    CHECK(((g2[0].index == 0b01 && g2[1].index == 0b10) ||
           (g2[0].index == 0b10 && g2[1].index == 0b01)));
}

TEST_CASE("set sizes match excitation counts") {
    for (int l = 1; l <= 8; ++l)
        for (std::uint32_t q = 0; q < (1u << l); ++q) {
            const BasisState s{q, l};
            CHECK(lower_set(s).size() == static_cast<std::size_t>(excited_count(s)));
            CHECK(raise_set(s).size() == static_cast<std::size_t>(ground_count(s)));
        }
}

TEST_CASE("build_generator hand-checked rows") {
    const auto gen2 = CollectiveGenerator::build(2);
    auto row01 = gen2.row(0b01);
    REQUIRE(row01.size() == 2);
    CHECK(row01[0].col == 0b01);
    CHECK(row01[0].multiplicity == 1);
    CHECK(row01[1].col == 0b10);
    CHECK(row01[1].multiplicity == 1);

    auto row11 = gen2.row(0b11);
    REQUIRE(row11.size() == 1);
    CHECK(row11[0].col == 0b11);
    CHECK(row11[0].multiplicity == 2);

    CHECK(gen2.row(0b00).empty());

    const auto gen1 = CollectiveGenerator::build(1);
    REQUIRE(gen1.row(0b1).size() == 1);
    CHECK(gen1.row(0b1)[0].multiplicity == 1);
    CHECK(gen1.row(0b0).empty());

    const auto gen4 = CollectiveGenerator::build(4);
    int diag = 0;
    for (const auto& e : gen4.row(0b0011))
        if (e.col == 0b0011) diag = e.multiplicity;
    CHECK(diag == 2);
}

TEST_CASE("build_generator rejects out-of-range L") {
    CHECK_THROWS_AS(CollectiveGenerator::build(0), std::length_error);
    CHECK_THROWS_AS(CollectiveGenerator::build(17), std::length_error);
    CHECK_THROWS_WITH_AS(CollectiveGenerator::build(5, 4),
                         doctest::Contains("[1, 4]"), std::length_error);
}

TEST_CASE("oracle_generator single atom") {
    const Eigen::MatrixXd m = oracle_generator(1);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 0) == 0.0);
    CHECK(m(1, 1) == 1.0);
    CHECK_THROWS_AS(oracle_generator(9), std::length_error);
}

TEST_CASE("generator equals dense S+S- oracle for L <= 8") {
    for (int l = 1; l <= 8; ++l) {
        const auto gen = CollectiveGenerator::build(l);
        const Eigen::MatrixXd sparse = gen.dense();
        const Eigen::MatrixXd oracle = oracle_generator(l);
        CHECK(sparse == oracle);  // exact integer-valued entries
    }
}

TEST_CASE("generator structure: symmetry, diagonal, sectors, row counts") {
    for (int l = 1; l <= 7; ++l) {
        const auto gen = CollectiveGenerator::build(l);
        const Eigen::MatrixXd a = gen.dense();
        CHECK(a == a.transpose().eval());
        for (std::uint32_t q = 0; q < gen.dim(); ++q) {
            const BasisState s{q, l};
            CHECK(a(q, q) == excited_count(s));
            int total = 0;
            for (const auto& e : gen.row(q)) {
                CHECK(twice_inversion({e.col, l}).twice_m == twice_inversion(s).twice_m);
                total += e.multiplicity;
            }
            CHECK(total == excited_count(s) * (ground_count(s) + 1));
        }
    }
}

TEST_CASE("generator is positive semidefinite") {
    for (int l = 1; l <= 8; ++l) {
        const auto gen = CollectiveGenerator::build(l);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gen.dense());
        CHECK(solver.eigenvalues().minCoeff() > -1e-10);
    }
}
