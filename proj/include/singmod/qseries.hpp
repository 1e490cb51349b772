#ifndef SINGMOD_QSERIES_HPP
#define SINGMOD_QSERIES_HPP

#include "singmod/rational.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace singmod {

// Truncated Laurent series in q with exact rational coefficients.
//
// Coefficients are trusted for every exponent n < prec; asking for a
// coefficient at n >= prec is a programming error, not silent garbage.
// `low` bounds the support from below.  All operations combine precisions
// pessimistically, so a coefficient you can read is always exact.
class QSeries {
public:
    QSeries() : low_(0), prec_(0) {}
    QSeries(long low, long prec) : low_(low), prec_(prec) { assert(low <= prec); }

    static QSeries zero(long prec) { return QSeries(prec, prec); }
    static QSeries constant(const Rat& c, long prec) {
        QSeries f(0, prec);
        f.set(0, c);
        return f;
    }

    long low() const { return low_; }
    long prec() const { return prec_; }

    Rat coeff(long n) const {
        if (n >= prec_)
            throw PrecisionError("QSeries::coeff: exponent " + std::to_string(n) +
                                 " beyond trusted precision " + std::to_string(prec_));
        auto it = c_.find(n);
        return it == c_.end() ? Rat(0) : it->second;
    }

    void set(long n, const Rat& v) {
        assert(n >= low_ && n < prec_);
        if (sgn(v) == 0)
            c_.erase(n);
        else
            c_[n] = v;
    }

    const std::map<long, Rat>& terms() const { return c_; }

    bool is_zero() const { return c_.empty(); }

    // Lowers prec (cannot raise it).
    QSeries truncated(long new_prec) const {
        assert(new_prec <= prec_);
        QSeries r(std::min(low_, new_prec), new_prec);
        for (const auto& [n, v] : c_)
            if (n < new_prec) r.c_[n] = v;
        return r;
    }

private:
    std::map<long, Rat> c_;
    long low_;
    long prec_;
};

inline QSeries add(const QSeries& f, const QSeries& g) {
    QSeries r(std::min(f.low(), g.low()), std::min(f.prec(), g.prec()));
    for (const auto& [n, v] : f.terms())
        if (n < r.prec()) r.set(n, v);
    for (const auto& [n, v] : g.terms())
        if (n < r.prec()) r.set(n, r.coeff(n) + v);
    return r;
}

inline QSeries scale(const QSeries& f, const Rat& c) {
    QSeries r(f.low(), f.prec());
    if (sgn(c) == 0) return r;
    for (const auto& [n, v] : f.terms()) r.set(n, v * c);
    return r;
}

inline QSeries sub(const QSeries& f, const QSeries& g) { return add(f, scale(g, Rat(-1))); }

// Cauchy product truncated at min(f.prec + g.low, g.prec + f.low).
inline QSeries mul(const QSeries& f, const QSeries& g) {
    long prec = std::min(f.prec() + g.low(), g.prec() + f.low());
    QSeries r(f.low() + g.low(), prec);
    std::map<long, Rat> acc;
    for (const auto& [i, a] : f.terms()) {
        if (i + g.low() >= prec) break;
        for (const auto& [j, b] : g.terms()) {
            if (i + j >= prec) break;
            acc[i + j] += a * b;
        }
    }
    for (const auto& [n, v] : acc)
        if (sgn(v) != 0) r.set(n, v);
    return r;
}

// (sum a(n) q^n) | U_p = sum a(pn) q^n.
inline QSeries u_op(const QSeries& f, long p) {
    assert(p >= 1);
    if (p == 1) return f;
    auto cdiv = [](long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); };
    QSeries r(cdiv(f.low(), p), cdiv(f.prec(), p));
    for (const auto& [n, v] : f.terms()) {
        if (n % p != 0) continue;
        long m = n / p;
        if (m < r.prec()) r.set(m, v);
    }
    return r;
}

// (sum a(m) q^m) | V_p = sum a(m) q^{pm}.
inline QSeries v_op(const QSeries& f, long p) {
    assert(p >= 1);
    if (p == 1) return f;
    QSeries r(f.low() * p, f.prec() * p);
    for (const auto& [n, v] : f.terms()) r.set(n * p, v);
    return r;
}

// f tensor chi_p: a(m) -> (-m/p) a(m).
inline QSeries twist(const QSeries& f, long p) {
    assert(p >= 3 && p % 2 == 1);
    QSeries r(f.low(), f.prec());
    for (const auto& [n, v] : f.terms()) {
        int chi = chi_p(n, p);
        if (chi != 0) r.set(n, chi * v);
    }
    return r;
}

// Weight-3/2 Hecke operator: f|U_ell^2 + f tensor chi_ell + p_coeff * f|V_ell^2.
// The scalar on the V-part is a parameter; ell is the consistent reading.
inline QSeries hecke_T_ell2(const QSeries& f, long ell, const Rat& p_coeff) {
    if (ell % 2 == 0) throw std::invalid_argument("hecke_T_ell2: ell must be odd");
    QSeries r = add(u_op(f, ell * ell), twist(f, ell));
    return add(r, scale(v_op(f, ell * ell), p_coeff));
}

inline QSeries hecke_T_ell2(const QSeries& f, long ell) {
    return hecke_T_ell2(f, ell, Rat(ell));
}

// theta(q^scale) = 1 + 2 sum_{n>=1} q^{scale n^2}.
inline QSeries theta(long scale, long prec) {
    assert(scale >= 1 && prec >= 1);
    QSeries r(0, prec);
    r.set(0, Rat(1));
    for (long n = 1; scale * n * n < prec; ++n) r.set(scale * n * n, Rat(2));
    return r;
}

// ord_p of a series: inf over the trusted window of coefficient valuations.
// nullopt = +infinity (all window coefficients vanish).
inline std::optional<long> padic_val_series(const QSeries& f, long p) {
    if (f.low() >= f.prec()) throw PrecisionError("padic_val_series: empty trusted window");
    std::optional<long> best;
    for (const auto& [n, v] : f.terms()) {
        auto w = padic_val(v, p);
        if (w && (!best || *w < *best)) best = *w;
    }
    return best;
}

// f == g (mod p^m) coefficient-wise over the common trusted window.
inline bool congruent_mod(const QSeries& f, const QSeries& g, long p, long m) {
    auto v = padic_val_series(sub(f, g), p);
    return !v || *v >= m;
}

}  // namespace singmod

#endif
