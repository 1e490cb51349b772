#ifndef SINGMOD_EISENSTEIN_HPP
#define SINGMOD_EISENSTEIN_HPP

#include "singmod/classnum.hpp"
#include "singmod/qseries.hpp"

namespace singmod {

// tildeH(d) = H(d)(1 - (-d/p)) - p H(d/p^2), with H(d/p^2) = 0 when p^2 does
// not divide d.  Constant term (p-1)/12.
inline Rat tilde_H_coeff(long p, long d) {
    if (d == 0) return make_rat(p - 1, 12);
    if (d < 0 || d % 4 == 1 || d % 4 == 2) return Rat(0);
    Rat v = hurwitz_H(d) * (1 - chi_p(d, p));
    long p2 = p * p;
    if (d % p2 == 0) v -= p * hurwitz_H(d / p2);
    return v;
}

// The modified Zagier-Eisenstein series tildeH = H - H tensor chi_p - p H|V^2.
struct ModEisenstein {
    long p = 0;
    QSeries series;

    long prec() const { return series.prec(); }
};

inline ModEisenstein tilde_H_series(long p, long prec) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("tilde_H_series: p must be an odd prime (p=2 unsupported)");
    warm_hurwitz(prec);
    ModEisenstein m;
    m.p = p;
    QSeries s(0, prec);
    for (long d = 0; d < prec; ++d) {
        Rat v = tilde_H_coeff(p, d);
        if (sgn(v) != 0) s.set(d, v);
    }
    m.series = std::move(s);
    return m;
}

// tildeG = H - (1/p) H tensor chi_p - H|V^2; satisfies tildeG|U^2 = p tildeG.
inline QSeries tilde_G_series(long p, long prec) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("tilde_G_series: p must be an odd prime");
    QSeries h = series_H(prec);
    QSeries r = sub(h, scale(twist(h, p), make_rat(1, p)));
    return sub(r, v_op(h, p * p).truncated(prec));
}

// G2 = -1/24 + sum sigma_1(n) q^n (not modular; the weight-2 analogy).
inline QSeries g2_series(long prec) {
    QSeries r(0, prec);
    r.set(0, make_rat(-1, 24));
    std::vector<long> s(static_cast<size_t>(prec), 0);
    for (long d = 1; d < prec; ++d)
        for (long n = d; n < prec; n += d) s[static_cast<size_t>(n)] += d;
    for (long n = 1; n < prec; ++n) r.set(n, Rat(s[static_cast<size_t>(n)]));
    return r;
}

// tildeG2 = G2 - p G2|V, the p-stabilization; tildeG2|U = tildeG2.
inline QSeries tilde_g2(long p, long prec) {
    QSeries g2 = g2_series(prec);
    return sub(g2, scale(v_op(g2, p).truncated(prec), Rat(p)));
}

}  // namespace singmod

#endif
