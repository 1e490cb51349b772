#ifndef SINGMOD_DENSEMOD_HPP
#define SINGMOD_DENSEMOD_HPP

#include "singmod/densez.hpp"
#include "singmod/zagier.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace singmod {

// Dense series with uint64 coefficients mod m (m < 2^54 so that Kronecker
// slots never overflow): the workhorse for deep q-expansions mod p^M where
// exact integers are hopeless.  Same window semantics as DenseZ.
struct DenseMod {
    uint64_t m = 0;
    long low = 0;
    std::vector<uint64_t> a;

    long prec() const { return low + static_cast<long>(a.size()); }

    uint64_t coeff(long n) const {
        if (n < low) return 0;
        assert(n < prec());
        return a[static_cast<size_t>(n - low)];
    }

    static DenseMod zero(uint64_t m, long low, long prec) {
        DenseMod f;
        f.m = m;
        f.low = low;
        f.a.assign(static_cast<size_t>(prec - low), 0);
        return f;
    }
};

namespace dm {

inline uint64_t mulmod(uint64_t x, uint64_t y, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(x) * y) % m);
}

inline uint64_t addmod(uint64_t x, uint64_t y, uint64_t m) {
    uint64_t s = x + y;  // no overflow: both < m < 2^54
    return s >= m ? s - m : s;
}

inline uint64_t submod(uint64_t x, uint64_t y, uint64_t m) { return x >= y ? x - y : x + m - y; }

inline uint64_t reduce_int(const Int& v, uint64_t m) {
    Int r = v % static_cast<unsigned long>(m);
    if (sgn(r) < 0) r += static_cast<unsigned long>(m);
    return r.get_ui();
}

inline uint64_t invmod(uint64_t x, uint64_t m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), Int(x).get_mpz_t(), Int(m).get_mpz_t()) == 0)
        throw std::invalid_argument("DenseMod: non-invertible element");
    return r.get_ui();
}

inline DenseMod from_densez(const DenseZ& f, uint64_t m) {
    DenseMod r = DenseMod::zero(m, f.low, f.prec());
    for (size_t i = 0; i < f.a.size(); ++i) r.a[i] = reduce_int(f.a[i], m);
    return r;
}

inline DenseMod add(const DenseMod& f, const DenseMod& g) {
    assert(f.m == g.m);
    DenseMod r = DenseMod::zero(f.m, std::min(f.low, g.low), std::min(f.prec(), g.prec()));
    for (long n = r.low; n < r.prec(); ++n)
        r.a[static_cast<size_t>(n - r.low)] = addmod(f.coeff(n), g.coeff(n), f.m);
    return r;
}

inline DenseMod sub(const DenseMod& f, const DenseMod& g) {
    assert(f.m == g.m);
    DenseMod r = DenseMod::zero(f.m, std::min(f.low, g.low), std::min(f.prec(), g.prec()));
    for (long n = r.low; n < r.prec(); ++n)
        r.a[static_cast<size_t>(n - r.low)] = submod(f.coeff(n), g.coeff(n), f.m);
    return r;
}

inline DenseMod scale(const DenseMod& f, uint64_t c) {
    DenseMod r = f;
    for (auto& x : r.a) x = mulmod(x, c, f.m);
    return r;
}

// Kronecker substitution: pack coefficients into 128-bit slots, multiply the
// two big integers with GMP (FFT for large sizes), unpack and reduce.
inline DenseMod mul(const DenseMod& f, const DenseMod& g, long cap = std::numeric_limits<long>::max()) {
    assert(f.m == g.m);
    const uint64_t m = f.m;
    assert(m < (1ULL << 54));
    long prec = std::min({f.prec() + g.low, g.prec() + f.low, cap});
    DenseMod r = DenseMod::zero(m, f.low + g.low, prec);
    size_t nf = f.a.size(), ng = g.a.size();
    if (nf == 0 || ng == 0 || r.a.empty()) return r;
    // raw convolution coefficients are < min(nf,ng) m^2 < 2^19 * 2^108
    assert(std::min(nf, ng) <= (1u << 19));
    static_assert(GMP_LIMB_BITS == 64, "64-bit limbs expected");

    std::vector<mp_limb_t> bf(2 * nf, 0), bg(2 * ng, 0);
    for (size_t i = 0; i < nf; ++i) bf[2 * i] = f.a[i];
    for (size_t i = 0; i < ng; ++i) bg[2 * i] = g.a[i];
    Int zf, zg, zp;
    mpz_import(zf.get_mpz_t(), bf.size(), -1, sizeof(mp_limb_t), 0, 0, bf.data());
    mpz_import(zg.get_mpz_t(), bg.size(), -1, sizeof(mp_limb_t), 0, 0, bg.data());
    mpz_mul(zp.get_mpz_t(), zf.get_mpz_t(), zg.get_mpz_t());

    size_t words = mpz_size(zp.get_mpz_t());
    const mp_limb_t* pl = mpz_limbs_read(zp.get_mpz_t());
    size_t need = r.a.size();
    for (size_t i = 0; i < need; ++i) {
        unsigned __int128 slot = 0;
        if (2 * i + 1 < words) slot = (static_cast<unsigned __int128>(pl[2 * i + 1]) << 64);
        if (2 * i < words) slot |= pl[2 * i];
        r.a[i] = static_cast<uint64_t>(slot % m);
    }
    return r;
}

// f * s where s has few nonzero terms: plain accumulation over the support.
inline DenseMod mul_sparse(const DenseMod& f, const DenseMod& s,
                           long cap = std::numeric_limits<long>::max()) {
    assert(f.m == s.m);
    const uint64_t m = f.m;
    long prec = std::min({f.prec() + s.low, s.prec() + f.low, cap});
    DenseMod r = DenseMod::zero(m, f.low + s.low, prec);
    for (size_t j = 0; j < s.a.size(); ++j) {
        if (s.a[j] == 0) continue;
        long base = s.low + static_cast<long>(j) + f.low;
        if (base >= prec) break;
        uint64_t c = s.a[j];
        size_t imax = static_cast<size_t>(std::min<long>(static_cast<long>(f.a.size()), prec - base));
        for (size_t i = 0; i < imax; ++i) {
            if (f.a[i] == 0) continue;
            size_t k = static_cast<size_t>(base - r.low) + i;
            r.a[k] = addmod(r.a[k], mulmod(c, f.a[i], m), m);
        }
    }
    return r;
}

// Long division, efficient when the divisor is sparse; same window rule as
// the exact kernel: the quotient is trusted only where the divisor is.
inline DenseMod divide(const DenseMod& f, const DenseMod& g,
                       long cap = std::numeric_limits<long>::max()) {
    assert(f.m == g.m);
    const uint64_t m = f.m;
    size_t gi = 0;
    while (gi < g.a.size() && g.a[gi] == 0) ++gi;
    if (gi == g.a.size()) throw std::invalid_argument("DenseMod divide: zero divisor");
    long glow = g.low + static_cast<long>(gi);
    uint64_t linv = invmod(g.a[gi], m);

    long qlow = f.low - glow;
    long qprec = std::min({f.prec() - glow, g.prec() - glow + qlow, cap});
    DenseMod q = DenseMod::zero(m, qlow, qprec);
    // support of the divisor beyond its leading term
    std::vector<std::pair<long, uint64_t>> tail;
    for (size_t j = gi + 1; j < g.a.size(); ++j)
        if (g.a[j] != 0) tail.emplace_back(static_cast<long>(j - gi), g.a[j]);
    const long qi_max = static_cast<long>(q.a.size());
    for (long i = 0; i < qi_max; ++i) {
        uint64_t acc = f.coeff(qlow + glow + i);
        for (const auto& [off, c] : tail) {
            if (off > i) break;
            uint64_t qc = q.a[static_cast<size_t>(i - off)];
            if (qc) acc = submod(acc, mulmod(qc, c, m), m);
        }
        q.a[static_cast<size_t>(i)] = mulmod(acc, linv, m);
    }
    return q;
}

inline DenseMod dilate(const DenseMod& f, long k) {
    DenseMod r = DenseMod::zero(f.m, f.low * k, f.prec() * k);
    for (size_t i = 0; i < f.a.size(); ++i)
        if (f.a[i] != 0) r.a[static_cast<size_t>((f.low + static_cast<long>(i)) * k - r.low)] = f.a[i];
    return r;
}

inline DenseMod subsample(const DenseMod& f, long k) {
    auto cdiv = [](long x, long y) { return x >= 0 ? (x + y - 1) / y : -((-x) / y); };
    DenseMod r = DenseMod::zero(f.m, cdiv(f.low, k), cdiv(f.prec(), k));
    for (long n = r.low; n < r.prec(); ++n) r.a[static_cast<size_t>(n - r.low)] = f.coeff(n * k);
    return r;
}

inline DenseMod theta_dense(uint64_t m, long scale, long prec) {
    DenseMod f = DenseMod::zero(m, 0, prec);
    f.a[0] = 1 % m;
    for (long n = 1; scale * n * n < prec; ++n) f.a[static_cast<size_t>(scale * n * n)] = 2 % m;
    return f;
}

inline DenseMod f2_dense(uint64_t m, long prec) {
    DenseMod f = DenseMod::zero(m, 0, prec);
    for (long d = 1; d < prec; ++d)
        for (long n = d; n < prec; n += 2 * d)
            if (n % 2 == 1) {
                size_t i = static_cast<size_t>(n);
                f.a[i] = addmod(f.a[i], static_cast<uint64_t>(d) % m, m);
            }
    return f;
}

inline DenseMod euler_product(uint64_t m, long prec) {
    DenseMod f = DenseMod::zero(m, 0, prec);
    f.a[0] = 1 % m;
    for (long k = 1;; ++k) {
        long g1 = k * (3 * k - 1) / 2;
        long g2 = k * (3 * k + 1) / 2;
        if (g1 >= prec && g2 >= prec) break;
        uint64_t s = (k % 2 == 1) ? m - 1 : 1;
        if (g1 < prec) f.a[static_cast<size_t>(g1)] = s;
        if (g2 < prec) f.a[static_cast<size_t>(g2)] = s;
    }
    return f;
}

// g_1 mod m on a deep window: the exact ambient coordinates give the
// numerator g_1 w6 = sum_b y_b theta^{15-4b} F2^b; w6 = q prod(1-q^{2n})^12
// is divided out one sparse euler factor at a time.
inline DenseMod deep_g1(uint64_t m, long prec) {
    auto x = solve_gD_coords(1);
    Int L(1);
    for (const auto& r : x) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), r.get_den_mpz_t());
    std::vector<uint64_t> y(x.size());
    for (size_t b = 0; b < x.size(); ++b) {
        Rat v = x[b] * Rat(L);
        assert(v.get_den() == 1);
        y[b] = reduce_int(Int(v.get_num()), m);
    }

    long wp = prec + 4;
    DenseMod th = theta_dense(m, 1, wp);
    DenseMod f2 = f2_dense(m, wp);

    long mb = 3;
    DenseMod P = DenseMod::zero(m, 0, wp);
    P.a[0] = y[static_cast<size_t>(mb)];
    DenseMod Tk;  // theta^{4(mb-b)} at step b
    bool have_tk = false;
    for (long b = mb - 1; b >= 0; --b) {
        P = mul(P, f2, wp);
        if (!have_tk) {
            Tk = th;
            for (int i = 0; i < 3; ++i) Tk = mul_sparse(Tk, th, wp);
            have_tk = true;
        } else {
            for (int i = 0; i < 4; ++i) Tk = mul_sparse(Tk, th, wp);
        }
        if (y[static_cast<size_t>(b)] != 0) P = add(P, scale(Tk, y[static_cast<size_t>(b)]));
    }
    for (int i = 0; i < 3; ++i) P = mul_sparse(P, th, wp);

    // divide by w6 = q * E(q^2)^12
    DenseMod e2 = dilate(euler_product(m, wp / 2 + 2), 2);
    if (e2.prec() > wp) e2.a.resize(static_cast<size_t>(wp - e2.low));
    for (int i = 0; i < 12; ++i) P = divide(P, e2, wp);
    P.low -= 1;

    if (L != 1) P = scale(P, invmod(reduce_int(L, m), m));
    if (P.prec() > prec) P.a.resize(static_cast<size_t>(prec - P.low));
    if (P.low != -1 || P.prec() < prec)
        throw PrecisionError("deep_g1: window bookkeeping failure");
    return P;
}

// exact p-adic valuation of a residue class x mod p^M: certified only when
// the answer is < M (nullopt means "0 mod p^M", i.e. valuation >= M).
inline std::optional<long> padic_val_mod(uint64_t x, long p, long M) {
    if (x == 0) return std::nullopt;
    long v = 0;
    while (x % static_cast<uint64_t>(p) == 0) {
        x /= static_cast<uint64_t>(p);
        ++v;
    }
    assert(v < M);
    return v;
}

}  // namespace dm
}  // namespace singmod

#endif
