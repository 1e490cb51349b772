#include "singmod/classnum.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace singmod;

namespace {

// Independent Hurwitz oracle: weighted count of all (not necessarily
// primitive) reduced forms of discriminant -n; weight 1/2 for (a,0,a),
// 1/3 for (a,a,a), 1 otherwise.
Rat hurwitz_weighted_count(long n) {
    Rat total(0);
    for (long a = 1; 3 * a * a <= n; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b + n;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (b == 0 && a == c)
                total += make_rat(1, 2);
            else if (a == b && b == c)
                total += make_rat(1, 3);
            else
                total += 1;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("fundamental decomposition") {
    auto d3 = fundamental_decomp(3);
    CHECK(d3.r == 3);
    CHECK(d3.f == 1);
    auto d12 = fundamental_decomp(12);
    CHECK(d12.r == 3);
    CHECK(d12.f == 2);
    auto d27 = fundamental_decomp(27);
    CHECK(d27.r == 3);
    CHECK(d27.f == 3);
    CHECK_THROWS_AS(fundamental_decomp(5), std::invalid_argument);
    CHECK_THROWS_AS(fundamental_decomp(6), std::invalid_argument);
}

TEST_CASE("fundamental decomposition round-trips") {
    for (long n = 3; n <= 4000; ++n) {
        if (n % 4 == 1 || n % 4 == 2) continue;
        auto [r, f] = fundamental_decomp(n);
        CHECK(r * f * f == n);
        CHECK(is_fundamental_neg(r));
    }
}

TEST_CASE("class numbers of small fundamental discriminants") {
    CHECK(class_number_h(3) == 1);
    CHECK(units_w(3) == 3);
    CHECK(class_number_h(4) == 1);
    CHECK(units_w(4) == 2);
    CHECK(class_number_h(23) == 3);
    CHECK(units_w(23) == 1);
    CHECK_THROWS_AS(class_number_h(12), std::invalid_argument);
}

TEST_CASE("warm table agrees with direct enumeration") {
    warm_hurwitz(3000);
    for (long r = 3; r <= 3000; ++r) {
        if (!is_fundamental_neg(r)) continue;
        CHECK(detail::HurwitzTable::instance().h(r) == class_number_h(r));
    }
}

TEST_CASE("hurwitz anchors") {
    CHECK(hurwitz_H(0) == make_rat(-1, 12));
    CHECK(hurwitz_H(3) == make_rat(1, 3));
    CHECK(hurwitz_H(4) == make_rat(1, 2));
    CHECK(hurwitz_H(12) == make_rat(4, 3));
    CHECK(hurwitz_H(7) == Rat(1));
    CHECK(hurwitz_H(23) == Rat(3));
    CHECK(hurwitz_H(27) == make_rat(4, 3));  // H(27) via r=3, f=3
    CHECK(hurwitz_H(1) == Rat(0));
    CHECK(hurwitz_H(2) == Rat(0));
    CHECK_THROWS_AS(hurwitz_H(-1), std::invalid_argument);
}

TEST_CASE("hurwitz formula matches weighted form count") {
    for (long n = 3; n <= 2500; ++n) {
        if (n % 4 == 1 || n % 4 == 2) continue;
        INFO("n = " << n);
        CHECK(hurwitz_H(n) == hurwitz_weighted_count(n));
    }
}

TEST_CASE("hurwitz positivity and denominators") {
    for (long n = 3; n <= 2000; ++n) {
        if (n % 4 == 1 || n % 4 == 2) continue;
        Rat h = hurwitz_H(n);
        CHECK(sgn(h) > 0);
        CHECK(Int(6) % h.get_den() == 0);
    }
}

TEST_CASE("series_H coefficients") {
    QSeries h = series_H(30);
    CHECK(h.coeff(0) == make_rat(-1, 12));
    CHECK(h.coeff(3) == make_rat(1, 3));
    CHECK(h.coeff(4) == make_rat(1, 2));
    CHECK(h.coeff(1) == Rat(0));
    CHECK(h.coeff(2) == Rat(0));
}

TEST_CASE("u_op on H hits H(9d)") {
    // coefficient of q^3 in H|U^2 at p=3 is H(27)
    QSeries h = series_H(100);
    QSeries hu = u_op(h, 9);
    CHECK(hu.coeff(3) == hurwitz_H(27));
    CHECK(hurwitz_H(27) == hurwitz_weighted_count(27));
}
