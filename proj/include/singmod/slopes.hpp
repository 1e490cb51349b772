#ifndef SINGMOD_SLOPES_HPP
#define SINGMOD_SLOPES_HPP

#include "singmod/densez.hpp"
#include "singmod/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace singmod {

// Slopes of U_p on level-1 cusp forms of weight k = 2 + (p-1) p^A via the
// Newton polygon of the characteristic polynomial of T_p mod p^M.

inline long dim_modular_forms(long k) {
    if (k < 0 || k % 2 != 0) return 0;
    return (k % 12 == 2) ? k / 12 : k / 12 + 1;
}

inline long dim_cusp_forms(long k) {
    if (k < 12 || k % 2 != 0) return 0;
    return dim_modular_forms(k) - 1;
}

namespace slp {

inline long ipow(long b, long e) {
    long r = 1;
    while (e--) r *= b;
    return r;
}

// E4^a E6^c complement of Delta^j inside weight k: c is fixed by k mod 4.
inline long eis_c(long k) { return ((k - 12) % 4) / 2; }
inline long eis_a(long k, long j) {
    long w = k - 12 * j - 6 * eis_c(k);
    assert(w >= 0 && w % 4 == 0);
    return w / 4;
}

// ---- dense series over Z/m with Kronecker-substitution multiplication ----

struct MSeries {
    std::vector<Int> a;  // exponents 0..prec-1, coefficients reduced mod m
};

inline Int mreduce(const Int& x, const Int& m) {
    Int r = x % m;
    if (sgn(r) < 0) r += m;
    return r;
}

inline MSeries ms_from_densez(const DenseZ& f, const Int& m, long prec) {
    assert(f.low >= 0 && f.prec() >= prec);
    MSeries r;
    r.a.resize(static_cast<size_t>(prec));
    for (long n = 0; n < prec; ++n) r.a[static_cast<size_t>(n)] = mreduce(f.coeff(n), m);
    return r;
}

inline MSeries ms_mul(const MSeries& f, const MSeries& g, const Int& m, size_t cap) {
    size_t nf = f.a.size(), ng = g.a.size();
    size_t prec = std::min(cap, nf + ng - 1);
    size_t mb = mpz_sizeinbase(m.get_mpz_t(), 2);
    size_t slot = (2 * mb + 24 + 63) / 64;  // limbs per slot, room for carries
    auto pack = [&](const std::vector<Int>& v) {
        std::vector<mp_limb_t> buf(v.size() * slot, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            size_t words = 0;
            if (sgn(v[i]) != 0)
                mpz_export(&buf[i * slot], &words, -1, sizeof(mp_limb_t), 0, 0, v[i].get_mpz_t());
            assert(words <= slot);
        }
        Int z;
        mpz_import(z.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
        return z;
    };
    Int zp = pack(f.a) * pack(g.a);
    size_t words = mpz_size(zp.get_mpz_t());
    const mp_limb_t* pl = mpz_limbs_read(zp.get_mpz_t());
    MSeries r;
    r.a.resize(prec);
    for (size_t i = 0; i < prec; ++i) {
        size_t base = i * slot;
        size_t cnt = base < words ? std::min(slot, words - base) : 0;
        Int c(0);
        if (cnt) mpz_import(c.get_mpz_t(), cnt, -1, sizeof(mp_limb_t), 0, 0, pl + base);
        r.a[i] = c % m;
    }
    return r;
}

inline MSeries ms_pow(MSeries base, unsigned long e, const Int& m, size_t cap) {
    MSeries r;
    r.a.assign(1, Int(1));
    while (e) {
        if (e & 1) r = ms_mul(r, base, m, cap);
        e >>= 1;
        if (e) base = ms_mul(base, base, m, cap);
    }
    r.a.resize(cap, Int(0));
    return r;
}

// f / g for g with unit constant term (schoolbook; used once per run).
inline MSeries ms_div_unit(const MSeries& f, const MSeries& g, const Int& m) {
    assert(!g.a.empty());
    Int ginv;
    if (mpz_invert(ginv.get_mpz_t(), g.a[0].get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("ms_div_unit: non-unit constant term");
    size_t n = f.a.size();
    MSeries q;
    q.a.resize(n);
    for (size_t i = 0; i < n; ++i) {
        Int acc = f.a[i];
        size_t jmax = std::min(i, g.a.size() - 1);
        for (size_t j = 1; j <= jmax; ++j)
            if (sgn(g.a[j]) != 0 && sgn(q.a[i - j]) != 0) acc -= g.a[j] * q.a[i - j];
        q.a[i] = mreduce(acc * ginv, m);
    }
    return q;
}

// ---- characteristic polynomial (Berkowitz: division-free, any ring) ----

// Returns coefficients ascending: c[0] + c[1] x + ... + c[n] x^n, c[n] = 1.
// m = 0 means exact integer arithmetic.
inline std::vector<Int> charpoly_berkowitz(const std::vector<std::vector<Int>>& A, const Int& m) {
    size_t n = A.size();
    auto red = [&](const Int& x) { return sgn(m) == 0 ? x : mreduce(x, m); };
    std::vector<Int> p{Int(1)};  // descending coefficients of the 0x0 minor
    for (size_t i = 0; i < n; ++i) {
        // Toeplitz column for the (i+1)x(i+1) principal minor
        std::vector<Int> t(i + 2);
        t[0] = 1;
        t[1] = red(-A[i][i]);
        if (i >= 1) {
            std::vector<Int> w(i);
            for (size_t r = 0; r < i; ++r) w[r] = A[r][i];
            for (size_t kk = 2; kk <= i + 1; ++kk) {
                Int dot(0);
                for (size_t r = 0; r < i; ++r)
                    if (sgn(w[r]) != 0) dot += A[i][r] * w[r];
                t[kk] = red(-dot);
                if (kk <= i) {
                    std::vector<Int> w2(i);
                    for (size_t r = 0; r < i; ++r) {
                        Int acc(0);
                        for (size_t s = 0; s < i; ++s)
                            if (sgn(w[s]) != 0) acc += A[r][s] * w[s];
                        w2[r] = red(acc);
                    }
                    w.swap(w2);
                }
            }
        }
        std::vector<Int> np(i + 2);
        for (size_t r = 0; r <= i + 1; ++r) {
            Int acc(0);
            for (size_t kk = 0; kk <= std::min(r, i + 1); ++kk)
                if (r - kk < p.size()) acc += t[kk] * p[r - kk];
            np[r] = red(acc);
        }
        p.swap(np);
    }
    std::reverse(p.begin(), p.end());
    return p;
}

// ---- Newton polygon over the certified valuation data ----

struct NewtonAnalysis {
    std::vector<Rat> slopes;  // certified root valuations, ascending
    long tail = 0;            // roots whose valuation exceeds the certified range
    std::optional<Rat> min_nonzero;
    bool certified_min = false;
};

namespace detail_np {

struct Pt {
    long x, y;
};

inline std::vector<Pt> lower_hull(const std::vector<Pt>& pts) {
    std::vector<Pt> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            const Pt &a = h[h.size() - 2], &b = h.back();
            __int128 cr = static_cast<__int128>(b.x - a.x) * (p.y - a.y) -
                          static_cast<__int128>(b.y - a.y) * (p.x - a.x);
            if (cr <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

}  // namespace detail_np

// v[j] = valuation of the x^j coefficient, nullopt when only ">= M" is known
// (M absent: nullopt means the coefficient is exactly zero).  The top
// coefficient must be a unit (v[n] = 0).
inline NewtonAnalysis newton_from_vals(const std::vector<std::optional<long>>& v,
                                       std::optional<long> M) {
    using detail_np::Pt;
    long n = static_cast<long>(v.size()) - 1;
    assert(n >= 0 && v[static_cast<size_t>(n)] == 0);
    std::vector<Pt> opt, pess;
    for (long j = 0; j <= n; ++j) {
        auto& vj = v[static_cast<size_t>(j)];
        if (vj) {
            opt.push_back({j, *vj});
            pess.push_back({j, *vj});
        } else if (M) {
            pess.push_back({j, *M});
        }
    }
    auto ho = detail_np::lower_hull(opt);
    auto hp = M ? detail_np::lower_hull(pess) : ho;

    // the common suffix of the two hulls is certified
    size_t io = ho.size(), ip = hp.size();
    while (io > 0 && ip > 0 && ho[io - 1].x == hp[ip - 1].x && ho[io - 1].y == hp[ip - 1].y) {
        --io;
        --ip;
    }
    NewtonAnalysis r;
    // certified segments live between consecutive common vertices
    for (size_t s = ho.size() - 1; s > io; --s) {
        const Pt &a = ho[s - 1], &b = ho[s];
        Rat slope = make_rat(a.y - b.y, b.x - a.x);
        for (long t = 0; t < b.x - a.x; ++t) r.slopes.push_back(slope);
    }
    r.tail = io < ho.size() ? ho[io].x : n;
    std::sort(r.slopes.begin(), r.slopes.end());
    for (const auto& s : r.slopes)
        if (sgn(s) > 0) {
            r.min_nonzero = s;
            break;
        }
    // anything beyond the certified range has valuation >= the largest
    // certified slope, so a certified positive slope is the global minimum
    // unless every certified slope is zero and roots remain unaccounted for
    r.certified_min = r.min_nonzero.has_value() || r.tail == 0;

    // The rightmost hull segment is the minimal chord slope to (n, 0); it
    // can be certified locally even when the bulk of the polygon sits far
    // above p^M: a hidden coefficient at j could only undercut the candidate
    // if M/(n-j) were smaller.
    std::optional<Rat> s0;
    for (const auto& pt : opt) {
        if (pt.x == n) continue;
        Rat chord = make_rat(pt.y, n - pt.x);
        if (!s0 || chord < *s0) s0 = chord;
    }
    if (s0 && sgn(*s0) > 0) {
        bool chord_cert = true;
        if (M)
            for (long j = 0; j < n; ++j)
                if (!v[static_cast<size_t>(j)] && make_rat(*M, n - j) < *s0) chord_cert = false;
        if (chord_cert) {
            r.min_nonzero = s0;
            r.certified_min = true;
        }
    }
    return r;
}

}  // namespace slp

// ---- exact Victor-Miller cusp basis and Hecke matrix (moderate weights) ----

// Echelon basis f_1, ..., f_dim of S_k: f_i = q^i + O(q^{dim+1}), exact.
inline std::vector<DenseZ> victor_miller(long k, long prec) {
    long dim = dim_cusp_forms(k);
    if (dim == 0) return {};
    if (prec <= dim) throw std::invalid_argument("victor_miller: prec must exceed dim");
    DenseZ e4 = dz::eisenstein_e4(prec);
    DenseZ e6 = dz::eisenstein_e6(prec);
    DenseZ dl = dz::delta_dense(prec);
    long c = slp::eis_c(k);
    std::vector<DenseZ> basis;
    DenseZ dj = dl;
    for (long j = 1; j <= dim; ++j) {
        DenseZ f = dz::mul(dj, dz::power(e4, static_cast<unsigned long>(slp::eis_a(k, j)), prec), prec);
        if (c) f = dz::mul(f, e6, prec);
        basis.push_back(f);
        if (j < dim) dj = dz::mul(dj, dl, prec);
    }
    // clear above-diagonal entries; leading coefficients are 1, so this stays integral
    for (long j = dim - 1; j >= 1; --j)
        for (long i = j + 1; i <= dim; ++i) {
            Int c0 = basis[static_cast<size_t>(j - 1)].coeff(i);
            if (sgn(c0) != 0)
                basis[static_cast<size_t>(j - 1)] = dz::sub(
                    basis[static_cast<size_t>(j - 1)],
                    dz::scale(basis[static_cast<size_t>(i - 1)], c0));
        }
    for (long j = 1; j <= dim; ++j)
        for (long i = 1; i <= dim; ++i)
            assert(basis[static_cast<size_t>(j - 1)].coeff(i) == Int(i == j ? 1 : 0));
    return basis;
}

// Matrix of T_p in a unit-triangular basis (column j = image of basis[j]),
// by forward substitution on coefficients 1..dim.
inline std::vector<std::vector<Int>> hecke_matrix(long k, long p, const std::vector<DenseZ>& basis) {
    long dim = static_cast<long>(basis.size());
    if (dim == 0) return {};
    if (basis[0].prec() <= p * dim)
        throw PrecisionError("hecke_matrix: basis window too small");
    Int pk = pow_int(p, static_cast<unsigned long>(k - 1));
    std::vector<std::vector<Int>> M(static_cast<size_t>(dim), std::vector<Int>(static_cast<size_t>(dim)));
    for (long j = 0; j < dim; ++j) {
        std::vector<Int> g(static_cast<size_t>(dim) + 1);
        for (long n = 1; n <= dim; ++n) {
            g[static_cast<size_t>(n)] = basis[static_cast<size_t>(j)].coeff(p * n);
            if (n % p == 0) g[static_cast<size_t>(n)] += pk * basis[static_cast<size_t>(j)].coeff(n / p);
        }
        for (long i = 1; i <= dim; ++i) {
            Int c = g[static_cast<size_t>(i)];
            M[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] = c;
            if (sgn(c) != 0)
                for (long n = i; n <= dim; ++n)
                    g[static_cast<size_t>(n)] -= c * basis[static_cast<size_t>(i - 1)].coeff(n);
        }
    }
    return M;
}

inline std::vector<Int> charpoly(const std::vector<std::vector<Int>>& A) {
    return slp::charpoly_berkowitz(A, Int(0));
}

// Newton-polygon analysis of an exact integer polynomial (ascending coeffs).
inline slp::NewtonAnalysis newton_slopes(const std::vector<Int>& c, long p) {
    std::vector<std::optional<long>> v(c.size());
    for (size_t j = 0; j < c.size(); ++j) v[j] = padic_val(c[j], p);
    return slp::newton_from_vals(v, std::nullopt);
}

// ---- the p-adic pipeline mod p^M for large weights ----

struct SlopeRun {
    long p = 0, A = 0, k = 0, dim = 0, M = 0;
    std::vector<Rat> slopes;
    long tail = 0;
    std::optional<Rat> min_nonzero;
    bool certified = false;
};

inline SlopeRun slope_run(long p, long A, long M) {
    SlopeRun run;
    run.p = p;
    run.A = A;
    run.M = M;
    run.k = 2 + (p - 1) * slp::ipow(p, A);
    run.dim = dim_cusp_forms(run.k);
    if (run.dim == 0) {
        run.certified = true;
        return run;
    }
    long k = run.k, dim = run.dim;
    size_t prec = static_cast<size_t>(p * dim + 1);
    Int m = pow_int(p, static_cast<unsigned long>(M));

    DenseZ e4z = dz::eisenstein_e4(static_cast<long>(prec));
    DenseZ e6z = dz::eisenstein_e6(static_cast<long>(prec));
    DenseZ dlz = dz::delta_dense(static_cast<long>(prec));
    slp::MSeries E4 = slp::ms_from_densez(e4z, m, static_cast<long>(prec));
    slp::MSeries DL = slp::ms_from_densez(dlz, m, static_cast<long>(prec));
    long c = slp::eis_c(k);

    // f_1 = Delta E4^{a_1} (E6^c); f_{j+1} = f_j * (Delta / E4^3)
    slp::MSeries f = slp::ms_mul(DL, slp::ms_pow(E4, static_cast<unsigned long>(slp::eis_a(k, 1)), m, prec), m, prec);
    if (c) f = slp::ms_mul(f, slp::ms_from_densez(e6z, m, static_cast<long>(prec)), m, prec);
    slp::MSeries R = slp::ms_div_unit(DL, slp::ms_pow(E4, 3, m, prec), m);

    std::vector<slp::MSeries> basis;
    basis.reserve(static_cast<size_t>(dim));
    for (long j = 1; j <= dim; ++j) {
        basis.push_back(f);
        if (j < dim) f = slp::ms_mul(f, R, m, prec);
    }
    for (long j = 1; j <= dim; ++j)
        assert(basis[static_cast<size_t>(j - 1)].a[static_cast<size_t>(j)] == 1 % m);

    // p^{k-1} mod m (vanishes when k-1 >= M)
    Int pk(0), pb(p);
    mpz_powm_ui(pk.get_mpz_t(), pb.get_mpz_t(), static_cast<unsigned long>(k - 1), m.get_mpz_t());
    std::vector<std::vector<Int>> mat(static_cast<size_t>(dim), std::vector<Int>(static_cast<size_t>(dim)));
    for (long j = 0; j < dim; ++j) {
        std::vector<Int> g(static_cast<size_t>(dim) + 1);
        for (long n = 1; n <= dim; ++n) {
            Int t = basis[static_cast<size_t>(j)].a[static_cast<size_t>(p * n)];
            if (n % p == 0) t += pk * basis[static_cast<size_t>(j)].a[static_cast<size_t>(n / p)];
            g[static_cast<size_t>(n)] = slp::mreduce(t, m);
        }
        for (long i = 1; i <= dim; ++i) {
            Int cij = g[static_cast<size_t>(i)];
            mat[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] = cij;
            if (sgn(cij) != 0)
                for (long n = i; n <= dim; ++n)
                    g[static_cast<size_t>(n)] = slp::mreduce(
                        g[static_cast<size_t>(n)] - cij * basis[static_cast<size_t>(i - 1)].a[static_cast<size_t>(n)], m);
        }
    }

    auto cp = slp::charpoly_berkowitz(mat, m);
    std::vector<std::optional<long>> vals(cp.size());
    for (size_t j = 0; j < cp.size(); ++j) {
        vals[j] = padic_val(cp[j], p);
        if (vals[j]) assert(*vals[j] < M);
    }
    auto na = slp::newton_from_vals(vals, M);
    run.slopes = na.slopes;
    run.tail = na.tail;
    run.min_nonzero = na.min_nonzero;
    run.certified = na.certified_min;
    return run;
}

inline SlopeRun min_nonzero_slope(long p, long A, long M0 = 64) {
    long M = M0;
    for (int tries = 0; tries < 4; ++tries) {
        SlopeRun r = slope_run(p, A, M);
        if (r.certified) return r;
        M *= 2;
    }
    SlopeRun r = slope_run(p, A, M);
    return r;  // caller sees certified = false
}

// Increase A until the minimal nonzero slope agrees on consecutive levels.
inline SlopeRun stabilize(long p, long M0 = 64) {
    long Amax = (p == 3) ? 5 : 2;
    std::optional<Rat> prev;
    SlopeRun last;
    for (long A = 1; A <= Amax; ++A) {
        SlopeRun r = min_nonzero_slope(p, A, M0);
        if (r.dim == 0) continue;
        if (!r.certified) return r;
        if (prev && r.min_nonzero && *prev == *r.min_nonzero) return r;
        prev = r.min_nonzero;
        last = r;
    }
    last.certified = false;  // never stabilized within the A budget
    return last;
}

}  // namespace singmod

#endif
