#include "singmod/zagier.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace singmod;

TEST_CASE("w6 is the eta(2tau)^12 combination of the generators") {
    long prec = 400;
    DenseZ th = dz::theta_dense(1, prec);
    DenseZ f2 = dz::f2_dense(prec);
    DenseZ t4 = dz::power(th, 4, prec);
    DenseZ comb = dz::mul(dz::mul(f2, dz::sub(t4, dz::scale(f2, Int(16))), prec), t4, prec);
    DenseZ w6 = w6_dense(prec);
    CHECK(dz::sub(comb, w6).to_qseries().is_zero());
    CHECK(w6.coeff(1) == 1);
    CHECK(w6.coeff(0) == 0);
}

TEST_CASE("g1 anchors") {
    DenseZ g1 = gD_from_ambient(1, 120);
    CHECK(g1.coeff(-1) == 1);
    CHECK(g1.coeff(0) == -2);
    CHECK(g1.coeff(3) == 248);
    CHECK(g1.coeff(4) == -492);
    CHECK(g1.coeff(7) == 4119);
    CHECK(g1.coeff(8) == -7256);
    CHECK(g1.coeff(11) == 33512);
    // plus condition
    for (long n = 1; n < 120; ++n)
        if (n % 4 == 1 || n % 4 == 2) CHECK(g1.coeff(n) == 0);
}

TEST_CASE("g4 anchors and the square rule") {
    DenseZ g4 = gD_from_ambient(4, 120);
    CHECK(g4.coeff(-4) == 1);
    CHECK(g4.coeff(-1) == 0);
    CHECK(g4.coeff(0) == -2);  // square D: constant term -2
    CHECK(g4.coeff(3) == -26752);
    DenseZ g5 = gD_from_ambient(5, 80);
    CHECK(g5.coeff(0) == 0);  // non-square D: constant term 0
}

TEST_CASE("trace oracle matches the basis coefficients") {
    DenseZ g1 = gD_from_ambient(1, 40);
    for (long d : {3L, 4L, 7L, 8L, 11L, 12L, 15L, 16L, 19L, 20L, 23L}) {
        INFO("d = " << d);
        CHECK(g1.coeff(d) == cm_trace_oracle(d));
    }
}

TEST_CASE("trace oracle input validation") {
    CHECK_THROWS_AS(cm_trace_oracle(5), std::invalid_argument);
    CHECK_THROWS_AS(cm_trace_oracle(-3), std::invalid_argument);
    CHECK(cm_trace_oracle(3) == 248);
}

TEST_CASE("solve_gD returns the sparse series") {
    QSeries g1 = solve_gD(1, 30);
    CHECK(g1.coeff(-1) == Rat(1));
    CHECK(g1.coeff(3) == Rat(248));
    CHECK_THROWS_AS(solve_gD(2, 30), std::invalid_argument);
    CHECK_THROWS_AS(solve_gD(7, 30), std::invalid_argument);
}

TEST_CASE("gtable columns agree with the direct solve") {
    GTable t = build_gtable(13, 200);
    for (long D : {5L, 8L, 9L, 12L, 13L}) {
        INFO("D = " << D);
        DenseZ direct = gD_from_ambient(D, 120);
        for (long n = -D; n < 120; ++n) CHECK(t.cols.at(D).coeff(n) == direct.coeff(n));
    }
}

TEST_CASE("gtable B conventions") {
    GTable t = build_gtable(4, 60);
    CHECK(t.B(1, 3) == 248);
    CHECK(t.B(1, -1) == 1);   // principal part
    CHECK(t.B(1, -2) == 0);
    CHECK(t.B(2, 5) == 0);    // invalid D
    CHECK(t.B(3, 5) == 0);
    CHECK(t.B(1, 5) == 0);    // d = 1 mod 4
    CHECK(t.B(1, 6) == 0);    // d = 2 mod 4
    CHECK(t.B(4, -4) == 1);
    CHECK_THROWS_AS(t.B(8, 3), PrecisionError);    // column not built
    CHECK_THROWS_AS(t.B(1, 1000), PrecisionError); // beyond window
}

TEST_CASE("hecke extraction reproduces the solved column") {
    GTable t = build_gtable(4, 2000);
    extend_by_hecke(t, 3, 1);
    REQUIRE(t.has_col(9));
    DenseZ direct = gD_from_ambient(9, 150);
    for (long n = -9; n < 150; ++n) CHECK(t.cols.at(9).coeff(n) == direct.coeff(n));

    extend_by_hecke(t, 5, 1);
    REQUIRE(t.has_col(25));
    CHECK(t.B(25, 0) == -2);

    ensure_hecke_tower(t, 3, 4, 1);
    REQUIRE(t.has_col(36));
    DenseZ d36 = gD_from_ambient(36, 60);
    for (long n = -36; n < 60; ++n) CHECK(t.cols.at(36).coeff(n) == d36.coeff(n));
}

TEST_CASE("deep g1 window is consistent with a shorter build") {
    DenseZ a = gD_from_ambient(1, 600);
    DenseZ b = gD_from_ambient(1, 350);
    REQUIRE(a.prec() >= 600);
    for (long n = -1; n < b.prec(); ++n) CHECK(a.coeff(n) == b.coeff(n));
}
