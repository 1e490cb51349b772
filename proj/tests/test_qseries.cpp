#include "singmod/densez.hpp"
#include "singmod/eta.hpp"
#include "singmod/qseries.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace singmod;

namespace {

// deterministic sparse random series for property checks
QSeries random_series(std::mt19937& rng, long low, long prec, int terms) {
    QSeries f(low, prec);
    std::uniform_int_distribution<long> expo(low, prec - 1);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 7);
    for (int i = 0; i < terms; ++i) f.set(expo(rng), make_rat(num(rng), den(rng)));
    return f;
}

// brute-force r_3(n): lattice points on |x|,|y|,|z| <= bound with x^2+y^2+z^2 = n
long r3(long n, long bound) {
    long count = 0;
    for (long x = -bound; x <= bound; ++x)
        for (long y = -bound; y <= bound; ++y)
            for (long z = -bound; z <= bound; ++z)
                if (x * x + y * y + z * z == n) ++count;
    return count;
}

}  // namespace

TEST_CASE("u_op basics") {
    QSeries f(-1, 7);
    f.set(-1, Rat(1));
    f.set(6, Rat(3));
    QSeries g = u_op(f, 3);
    CHECK(g.prec() == 3);
    CHECK(g.coeff(2) == Rat(3));
    CHECK(g.coeff(0) == Rat(0));
    CHECK(g.coeff(1) == Rat(0));

    QSeries id = u_op(f, 1);
    CHECK(id.coeff(-1) == Rat(1));
    CHECK(id.coeff(6) == Rat(3));
}

TEST_CASE("v_op basics") {
    QSeries f(0, 2);
    f.set(0, Rat(1));
    f.set(1, Rat(1));
    QSeries g = v_op(f, 5);
    CHECK(g.prec() == 10);
    CHECK(g.coeff(0) == Rat(1));
    CHECK(g.coeff(5) == Rat(1));
    CHECK(g.coeff(3) == Rat(0));
}

TEST_CASE("twist kills multiples of p") {
    long p = 5;
    QSeries f(0, p + 1);
    f.set(p, Rat(1));
    QSeries g = twist(f, p);
    CHECK(g.is_zero());
}

TEST_CASE("operator identities on random series") {
    std::mt19937 rng(20240817);
    for (long p : {3L, 5L, 11L}) {
        for (int rep = 0; rep < 12; ++rep) {
            QSeries f = random_series(rng, -4, 120, 25);
            // f|V|U = f
            QSeries vu = u_op(v_op(f, p), p);
            CHECK(sub(vu, f.truncated(vu.prec())).is_zero());
            // (f|V^2) tensor chi_p = 0
            CHECK(twist(v_op(f, p * p), p).is_zero());
            // (f tensor chi_p)|U^2 = 0
            CHECK(u_op(twist(f, p), p * p).is_zero());
            // U_p o U_p = U_{p^2}
            QSeries uu = u_op(u_op(f, p), p);
            CHECK(sub(uu, u_op(f, p * p)).is_zero());
        }
    }
}

TEST_CASE("mul ring axioms on the truncation window") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        QSeries f = random_series(rng, 0, 40, 10);
        QSeries g = random_series(rng, 0, 40, 10);
        QSeries h = random_series(rng, 0, 40, 10);
        QSeries fg = mul(f, g), gf = mul(g, f);
        CHECK(sub(fg, gf).is_zero());
        QSeries lhs = mul(mul(f, g), h);
        QSeries rhs = mul(f, mul(g, h));
        CHECK(sub(lhs.truncated(std::min(lhs.prec(), rhs.prec())),
                  rhs.truncated(std::min(lhs.prec(), rhs.prec())))
                  .is_zero());
        QSeries dist = sub(mul(f, add(g, h)), add(mul(f, g), mul(f, h)));
        CHECK(dist.is_zero());
    }
}

TEST_CASE("laurent product (q^-1)(q) = 1") {
    QSeries a(-1, 5), b(1, 5);
    a.set(-1, Rat(1));
    b.set(1, Rat(1));
    QSeries p = mul(a, b);
    CHECK(p.coeff(0) == Rat(1));
}

TEST_CASE("theta cubed counts r_3(n)") {
    QSeries t = theta(1, 10);
    QSeries t3 = mul(mul(t, t), t);
    for (long n = 0; n < 10; ++n) CHECK(t3.coeff(n) == Rat(r3(n, 3)));
    CHECK(t3.coeff(1) == Rat(6));
    CHECK(t3.coeff(2) == Rat(12));
    CHECK(t3.coeff(3) == Rat(8));
    CHECK(t3.coeff(5) == Rat(24));
}

TEST_CASE("theta definition") {
    QSeries t = theta(1, 5);
    CHECK(t.coeff(0) == Rat(1));
    CHECK(t.coeff(1) == Rat(2));
    CHECK(t.coeff(4) == Rat(2));
    CHECK(t.coeff(2) == Rat(0));
}

TEST_CASE("eta products") {
    SECTION("eta^24 = Delta") {
        EtaProduct d{{{1, 24}}};
        QSeries s = eta_product(d, 6);
        CHECK(s.coeff(1) == Rat(1));
        CHECK(s.coeff(2) == Rat(-24));
        CHECK(s.coeff(3) == Rat(252));
        CHECK(s.coeff(4) == Rat(-1472));
        // cross-check against (E4^3-E6^2)/1728
        DenseZ delta = dz::delta_dense(8);
        DenseZ e4 = dz::eisenstein_e4(8);
        DenseZ e6 = dz::eisenstein_e6(8);
        DenseZ num = dz::sub(dz::power(e4, 3, 8), dz::power(e6, 2, 8));
        for (long n = 1; n < 8; ++n) CHECK(num.coeff(n) == 1728 * delta.coeff(n));
    }
    SECTION("eta(q)^2 eta(q^11)^2 leading term q (form F)") {
        EtaProduct f{{{1, 2}, {11, 2}}};
        QSeries s = eta_product(f, 8);
        CHECK(s.coeff(1) == Rat(1));
        CHECK(s.coeff(2) == Rat(-2));
        CHECK(s.coeff(3) == Rat(-1));
        CHECK(s.coeff(4) == Rat(2));
    }
    SECTION("fractional power bookkeeping") {
        EtaProduct g{{{2, 1}, {22, 1}}};
        CHECK(g.fractional_power() == Rat(1));
        EtaProduct bad{{{1, 1}}};
        CHECK_THROWS_AS(eta_product(bad, 5), std::invalid_argument);
    }
}

TEST_CASE("p-adic valuation of series") {
    QSeries f(0, 3);
    f.set(0, Rat(3));
    f.set(1, Rat(9));
    auto v = padic_val_series(f, 3);
    REQUIRE(v.has_value());
    CHECK(*v == 1);

    auto inf = padic_val_series(sub(f, f), 3);
    CHECK(!inf.has_value());

    QSeries empty(5, 5);
    CHECK_THROWS_AS(padic_val_series(empty, 3), PrecisionError);
}

TEST_CASE("valuation ultrametric property") {
    std::mt19937 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        QSeries f = random_series(rng, 0, 30, 8);
        QSeries g = random_series(rng, 0, 30, 8);
        auto vf = padic_val_series(f, 5), vg = padic_val_series(g, 5);
        auto vs = padic_val_series(add(f, g), 5);
        if (!vf || !vg) continue;
        long m = std::min(*vf, *vg);
        if (vs) CHECK(*vs >= m);
        if (*vf != *vg) {
            REQUIRE(vs.has_value());
            CHECK(*vs == m);
        }
    }
}

TEST_CASE("precision is tracked pessimistically") {
    QSeries f(0, 10);
    f.set(0, Rat(1));
    CHECK_THROWS_AS(f.coeff(10), PrecisionError);
    QSeries u = u_op(f, 3);
    CHECK(u.prec() == 4);  // ceil(10/3)
    CHECK_THROWS_AS(u.coeff(4), PrecisionError);
}

TEST_CASE("dense division round-trips") {
    std::mt19937 rng(3);
    DenseZ g = DenseZ::zero(0, 40);
    g.at(0) = 1;
    std::uniform_int_distribution<long> coef(-9, 9);
    for (long n = 1; n < 40; ++n) g.at(n) = coef(rng);
    DenseZ f = DenseZ::zero(0, 40);
    for (long n = 0; n < 40; ++n) f.at(n) = coef(rng);
    DenseZ prod = dz::mul(f, g, 40);
    DenseZ back = dz::divide(prod, g, 40);
    for (long n = 0; n < back.prec(); ++n) CHECK(back.coeff(n) == f.coeff(n));
}
