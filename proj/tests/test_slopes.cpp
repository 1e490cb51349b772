#include "singmod/slopes.hpp"

#include "singmod/eta.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace singmod;

TEST_CASE("dimension formulas") {
    CHECK(dim_modular_forms(0) == 1);
    CHECK(dim_modular_forms(2) == 0);
    CHECK(dim_modular_forms(4) == 1);
    CHECK(dim_modular_forms(12) == 2);
    CHECK(dim_modular_forms(14) == 1);
    CHECK(dim_cusp_forms(10) == 0);
    CHECK(dim_cusp_forms(12) == 1);
    CHECK(dim_cusp_forms(20) == 1);
    CHECK(dim_cusp_forms(24) == 2);
    CHECK(dim_cusp_forms(26) == 1);
    CHECK(dim_cusp_forms(13) == 0);
}

TEST_CASE("victor-miller basis is echelon and starts with delta") {
    auto b = victor_miller(12, 40);
    REQUIRE(b.size() == 1);
    CHECK(b[0].coeff(1) == 1);
    CHECK(b[0].coeff(2) == -24);
    CHECK(b[0].coeff(3) == 252);
    DenseZ eta24 = eta_product_dense({{{1, 24}}}, 40);
    for (long n = 1; n < 40; ++n) CHECK(b[0].coeff(n) == eta24.coeff(n));

    auto b24 = victor_miller(24, 60);
    REQUIRE(b24.size() == 2);
    for (long j = 1; j <= 2; ++j)
        for (long i = 1; i <= 2; ++i) CHECK(b24[static_cast<size_t>(j - 1)].coeff(i) == Int(i == j ? 1 : 0));
}

TEST_CASE("hecke matrix on S_12") {
    auto b = victor_miller(12, 40);
    auto t3 = hecke_matrix(12, 3, b);
    REQUIRE(t3.size() == 1);
    CHECK(t3[0][0] == 252);
    auto t5 = hecke_matrix(12, 5, b);
    CHECK(t5[0][0] == 4830);
    CHECK_THROWS_AS(hecke_matrix(12, 41, b), PrecisionError);
}

TEST_CASE("characteristic polynomial conventions") {
    std::vector<std::vector<Int>> a{{Int(2)}};
    auto c1 = charpoly(a);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0] == -2);
    CHECK(c1[1] == 1);
    std::vector<std::vector<Int>> b{{Int(1), Int(2)}, {Int(3), Int(4)}};
    auto c2 = charpoly(b);
    CHECK(c2[0] == Int(1 * 4 - 2 * 3));
    CHECK(c2[1] == -5);
    CHECK(c2[2] == 1);
    // nilpotent: x^2
    std::vector<std::vector<Int>> nil{{Int(0), Int(1)}, {Int(0), Int(0)}};
    auto cn = charpoly(nil);
    CHECK(cn[0] == 0);
    CHECK(cn[1] == 0);
    CHECK(cn[2] == 1);
    // modular reduction agrees with the exact result
    auto c2m = slp::charpoly_berkowitz(b, Int(97));
    for (size_t i = 0; i < c2.size(); ++i) CHECK(c2m[i] == slp::mreduce(c2[i], Int(97)));
}

TEST_CASE("newton polygon toy polynomials") {
    // x^2 - 5x + 25: twin slopes 1, 1
    auto a = newton_slopes({Int(25), Int(-5), Int(1)}, 5);
    REQUIRE(a.slopes.size() == 2);
    CHECK(a.slopes[0] == Rat(1));
    CHECK(a.slopes[1] == Rat(1));
    CHECK(a.tail == 0);
    // x^2 - x: one unit root, one zero root (infinite slope, excluded)
    auto b = newton_slopes({Int(0), Int(-1), Int(1)}, 5);
    REQUIRE(b.slopes.size() == 1);
    CHECK(b.slopes[0] == Rat(0));
    CHECK(b.tail == 1);
    CHECK(!b.min_nonzero);
    // (x - 1)^2: ordinary twice
    auto c = newton_slopes({Int(1), Int(-2), Int(1)}, 7);
    REQUIRE(c.slopes.size() == 2);
    CHECK(c.slopes[0] == Rat(0));
    // x - 252 at p = 3: tau(3) has 3-adic valuation 2
    auto d = newton_slopes({Int(-252), Int(1)}, 3);
    REQUIRE(d.slopes.size() == 1);
    CHECK(d.slopes[0] == Rat(2));
    CHECK(d.min_nonzero == Rat(2));
}

TEST_CASE("chord certification of the minimal slope") {
    // only ">= M" is known at j = 0; the chord bound still pins the min slope
    auto r = slp::newton_from_vals({std::nullopt, std::optional<long>(1), std::optional<long>(0)}, 64);
    REQUIRE(r.min_nonzero);
    CHECK(*r.min_nonzero == Rat(1));
    CHECK(r.certified_min);
    // with M tiny the hidden coefficient could undercut: not certified
    auto r2 = slp::newton_from_vals({std::nullopt, std::optional<long>(5), std::optional<long>(0)}, 6);
    CHECK(!r2.certified_min);
}

TEST_CASE("modular pipeline agrees with the exact one at k = 44, p = 7") {
    auto basis = victor_miller(44, 7 * 3 + 10);
    auto cp = charpoly(hecke_matrix(44, 7, basis));
    auto exact = newton_slopes(cp, 7);
    REQUIRE(exact.slopes.size() == 3);
    CHECK(exact.slopes[0] == Rat(2));
    CHECK(exact.slopes[1] == Rat(3));
    CHECK(exact.slopes[2] == Rat(4));

    auto run = slope_run(7, 1, 64);
    CHECK(run.k == 44);
    CHECK(run.dim == 3);
    REQUIRE(run.min_nonzero);
    CHECK(*run.min_nonzero == Rat(2));
    CHECK(run.certified);
    REQUIRE(run.slopes.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(run.slopes[i] == exact.slopes[i]);
}

TEST_CASE("charpoly is basis independent") {
    // raw (non-echelon) unit-triangular basis for S_24
    long prec = 60;
    DenseZ e4 = dz::eisenstein_e4(prec);
    DenseZ e6 = dz::eisenstein_e6(prec);
    DenseZ dl = dz::delta_dense(prec);
    std::vector<DenseZ> raw;
    raw.push_back(dz::mul(dl, dz::power(e4, 3, prec), prec));           // j = 1, weight 24
    raw.push_back(dz::mul(dl, dl, prec));                               // j = 2
    auto cp_raw = charpoly(hecke_matrix(24, 2, raw));
    auto cp_ech = charpoly(hecke_matrix(24, 2, victor_miller(24, prec)));
    REQUIRE(cp_raw.size() == cp_ech.size());
    for (size_t i = 0; i < cp_raw.size(); ++i) CHECK(cp_raw[i] == cp_ech[i]);
    // trace of T_2 on S_24 is 1080
    CHECK(cp_ech[1] == -1080);
}

TEST_CASE("small stabilized runs") {
    auto r13 = min_nonzero_slope(13, 1);
    CHECK(r13.k == 158);
    CHECK(r13.dim == 12);
    REQUIRE(r13.min_nonzero);
    CHECK(*r13.min_nonzero == Rat(1));
    CHECK(r13.certified);

    auto s5 = stabilize(5);
    REQUIRE(s5.min_nonzero);
    CHECK(*s5.min_nonzero == Rat(2));
    CHECK(s5.certified);
    CHECK(s5.A == 2);
}
