#ifndef SINGMOD_DENSEZ_HPP
#define SINGMOD_DENSEZ_HPP

#include "singmod/qseries.hpp"
#include "singmod/rational.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace singmod {

// Dense integer Laurent series: a[i] is the coefficient of q^{low+i}.
// Trusted window is [low, low + a.size()); used inside multiplication and
// division hot loops where the sparse rational carrier is too slow.
struct DenseZ {
    long low = 0;
    std::vector<Int> a;

    long prec() const { return low + static_cast<long>(a.size()); }

    const Int& coeff(long n) const {
        static const Int zero(0);
        if (n < low) return zero;
        assert(n < prec());
        return a[static_cast<size_t>(n - low)];
    }

    Int& at(long n) {
        assert(n >= low && n < prec());
        return a[static_cast<size_t>(n - low)];
    }

    static DenseZ zero(long low, long prec) {
        DenseZ f;
        f.low = low;
        f.a.assign(static_cast<size_t>(prec - low), Int(0));
        return f;
    }

    static DenseZ one(long prec) {
        DenseZ f = zero(0, prec);
        f.a[0] = 1;
        return f;
    }

    QSeries to_qseries() const {
        QSeries r(low, prec());
        for (size_t i = 0; i < a.size(); ++i)
            if (sgn(a[i]) != 0) r.set(low + static_cast<long>(i), Rat(a[i]));
        return r;
    }

    static DenseZ from_qseries(const QSeries& f) {
        DenseZ r = zero(f.low(), f.prec());
        for (const auto& [n, v] : f.terms()) {
            assert(v.get_den() == 1);
            r.at(n) = v.get_num();
        }
        return r;
    }
};

namespace dz {

inline DenseZ add(const DenseZ& f, const DenseZ& g) {
    DenseZ r = DenseZ::zero(std::min(f.low, g.low), std::min(f.prec(), g.prec()));
    for (long n = r.low; n < r.prec(); ++n) r.at(n) = f.coeff(n) + g.coeff(n);
    return r;
}

inline DenseZ sub(const DenseZ& f, const DenseZ& g) {
    DenseZ r = DenseZ::zero(std::min(f.low, g.low), std::min(f.prec(), g.prec()));
    for (long n = r.low; n < r.prec(); ++n) r.at(n) = f.coeff(n) - g.coeff(n);
    return r;
}

inline void submul(DenseZ& f, const Int& c, const DenseZ& g) {
    long hi = std::min(f.prec(), g.prec());
    assert(f.low <= g.low);
    for (long n = g.low; n < hi; ++n)
        mpz_submul(f.at(n).get_mpz_t(), c.get_mpz_t(), g.coeff(n).get_mpz_t());
}

// Schoolbook product, truncated at min(f.prec + g.low, g.prec + f.low, cap).
inline DenseZ mul(const DenseZ& f, const DenseZ& g, long cap = std::numeric_limits<long>::max()) {
    long prec = std::min({f.prec() + g.low, g.prec() + f.low, cap});
    DenseZ r = DenseZ::zero(f.low + g.low, prec);
    const long nf = static_cast<long>(f.a.size());
    const long ng = static_cast<long>(g.a.size());
    for (long i = 0; i < nf; ++i) {
        if (sgn(f.a[i]) == 0) continue;
        long base = f.low + i + g.low;
        if (base >= prec) break;
        long jmax = std::min(ng, prec - base);
        const mpz_srcptr fi = f.a[i].get_mpz_t();
        for (long j = 0; j < jmax; ++j) {
            if (sgn(g.a[j]) == 0) continue;
            mpz_addmul(r.a[static_cast<size_t>(base - r.low + j)].get_mpz_t(), fi,
                       g.a[j].get_mpz_t());
        }
    }
    return r;
}

inline DenseZ scale(const DenseZ& f, const Int& c) {
    DenseZ r = f;
    for (auto& x : r.a) x *= c;
    return r;
}

// f / g by long division.  g must lead with a unit (+-1) at g.low; every
// quotient coefficient must come out integral (checked when lead = -1 only
// trivially; with lead +-1 division is always exact).
inline DenseZ divide(const DenseZ& f, const DenseZ& g, long cap = std::numeric_limits<long>::max()) {
    // locate the true leading term of g
    size_t gi = 0;
    while (gi < g.a.size() && sgn(g.a[gi]) == 0) ++gi;
    if (gi == g.a.size()) throw std::invalid_argument("DenseZ divide: zero divisor");
    long glow = g.low + static_cast<long>(gi);
    const Int& lead = g.a[gi];
    if (lead != 1 && lead != -1)
        throw std::invalid_argument("DenseZ divide: divisor must lead with a unit");
    bool neg = (lead == -1);

    long qlow = f.low - glow;
    // q(e) is determined by g-coefficients up to exponent e + glow - qlow,
    // so the divisor's own precision caps the trusted quotient window.
    long qprec = std::min({f.prec() - glow, g.prec() - glow + qlow, cap});
    DenseZ q = DenseZ::zero(qlow, qprec);
    const long qi_max = static_cast<long>(q.a.size());
    const long gstart = static_cast<long>(gi);
    const long gn = static_cast<long>(g.a.size());
    Int acc;
    for (long i = 0; i < qi_max; ++i) {
        acc = f.coeff(qlow + glow + i);
        // subtract contributions of earlier quotient terms
        long jmax = std::min(gn, gstart + i + 1);
        for (long j = gstart + 1; j < jmax; ++j) {
            const Int& qc = q.a[static_cast<size_t>(i - (j - gstart))];
            if (sgn(qc) == 0 || sgn(g.a[j]) == 0) continue;
            mpz_submul(acc.get_mpz_t(), qc.get_mpz_t(), g.a[j].get_mpz_t());
        }
        q.a[static_cast<size_t>(i)] = neg ? Int(-acc) : acc;
    }
    return q;
}

inline DenseZ power(const DenseZ& f, unsigned long e, long cap) {
    if (e == 0) {
        assert(cap != std::numeric_limits<long>::max());
        return DenseZ::one(cap);
    }
    DenseZ base = f;
    DenseZ result;
    bool have = false;
    while (e > 0) {
        if (e & 1) {
            result = have ? mul(result, base, cap) : base;
            have = true;
        }
        e >>= 1;
        if (e) base = mul(base, base, cap);
    }
    return result;
}

// q^k
inline DenseZ monomial(long k, long prec) {
    DenseZ f = DenseZ::zero(k, prec);
    if (k < prec) f.at(k) = 1;
    return f;
}

// substitute q -> q^m
inline DenseZ dilate(const DenseZ& f, long m) {
    assert(m >= 1);
    DenseZ r = DenseZ::zero(f.low * m, f.prec() * m);
    for (size_t i = 0; i < f.a.size(); ++i)
        if (sgn(f.a[i]) != 0) r.at((f.low + static_cast<long>(i)) * m) = f.a[i];
    return r;
}

// coefficient extraction a(mn) q^n
inline DenseZ subsample(const DenseZ& f, long m) {
    assert(m >= 1);
    auto cdiv = [](long x, long y) { return x >= 0 ? (x + y - 1) / y : -((-x) / y); };
    DenseZ r = DenseZ::zero(cdiv(f.low, m), cdiv(f.prec(), m));
    for (long n = r.low; n < r.prec(); ++n) r.at(n) = f.coeff(n * m);
    return r;
}

// Euler product prod_{n>=1} (1 - q^n) via the pentagonal number theorem.
inline DenseZ euler_product(long prec) {
    DenseZ f = DenseZ::zero(0, prec);
    f.at(0) = 1;
    for (long k = 1;; ++k) {
        long g1 = k * (3 * k - 1) / 2;
        long g2 = k * (3 * k + 1) / 2;
        if (g1 >= prec && g2 >= prec) break;
        Int s = (k % 2 == 1) ? Int(-1) : Int(1);
        if (g1 < prec) f.at(g1) = s;
        if (g2 < prec) f.at(g2) = s;
    }
    return f;
}

inline DenseZ theta_dense(long scale, long prec) {
    DenseZ f = DenseZ::zero(0, prec);
    f.at(0) = 1;
    for (long n = 1; scale * n * n < prec; ++n) f.at(scale * n * n) = 2;
    return f;
}

// sigma_k(n) divisor sums, n = 1..prec-1.
inline std::vector<Int> sigma_table(long k, long prec) {
    std::vector<Int> s(static_cast<size_t>(std::max(prec, 1L)), Int(0));
    for (long d = 1; d < prec; ++d) {
        Int dk = pow_int(d, static_cast<unsigned long>(k));
        for (long n = d; n < prec; n += d) s[static_cast<size_t>(n)] += dk;
    }
    return s;
}

inline DenseZ eisenstein_e4(long prec) {
    DenseZ f = DenseZ::zero(0, prec);
    f.at(0) = 1;
    auto s = sigma_table(3, prec);
    for (long n = 1; n < prec; ++n) f.at(n) = 240 * s[static_cast<size_t>(n)];
    return f;
}

inline DenseZ eisenstein_e6(long prec) {
    DenseZ f = DenseZ::zero(0, prec);
    f.at(0) = 1;
    auto s = sigma_table(5, prec);
    for (long n = 1; n < prec; ++n) f.at(n) = -504 * s[static_cast<size_t>(n)];
    return f;
}

// F2 = sum_{n odd} sigma_1(n) q^n, the second weight-2 generator on Gamma0(4).
inline DenseZ f2_dense(long prec) {
    DenseZ f = DenseZ::zero(0, prec);
    for (long d = 1; d < prec; d += 1)
        for (long n = d; n < prec; n += 2 * d)
            if (n % 2 == 1) f.at(n) += d;
    return f;
}

// Delta = eta(q)^24 = q prod (1-q^n)^24; also equals (E4^3 - E6^2)/1728.
inline DenseZ delta_dense(long prec) {
    DenseZ e24 = power(euler_product(prec), 24, prec);
    DenseZ r = DenseZ::zero(1, prec);
    for (long n = 1; n < prec; ++n) r.at(n) = e24.coeff(n - 1);
    return r;
}

}  // namespace dz
}  // namespace singmod

#endif
