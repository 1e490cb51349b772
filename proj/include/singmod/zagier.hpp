#ifndef SINGMOD_ZAGIER_HPP
#define SINGMOD_ZAGIER_HPP

#include "singmod/classnum.hpp"
#include "singmod/densez.hpp"
#include "singmod/qseries.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace singmod {

// ---------------------------------------------------------------------------
// Generators of the (half-)integral weight ring on Gamma0(4):
//   theta = 1 + 2q + 2q^4 + ...      (weight 1/2)
//   F2    = q + 4q^3 + 6q^5 + ...    (weight 2)
//   w6    = F2 (theta^4 - 16 F2) theta^4 = eta(2tau)^12   (weight 6 cusp form,
//           nonvanishing away from the cusps; leading term q)
// Weakly holomorphic weight-3/2 forms are realized as
//   theta^a F2^b / w6^N  with a + 4b = 3 + 12N.
// ---------------------------------------------------------------------------

inline DenseZ w6_dense(long prec) {
    long half = prec / 2 + 2;
    DenseZ e = dz::euler_product(half);
    DenseZ e3 = dz::mul(e, dz::mul(e, e, half), half);
    DenseZ e6 = dz::mul(e3, e3, half);
    DenseZ e12 = dz::mul(e6, e6, half);
    DenseZ r = dz::dilate(e12, 2);
    r.low += 1;  // eta(2tau)^12 = q prod (1-q^{2n})^12
    if (r.prec() > prec) r.a.resize(static_cast<size_t>(prec - r.low));
    return r;
}

namespace detail_z {

// Exact Gauss-Jordan solve of an overdetermined consistent system.
inline std::vector<Rat> gauss_solve(std::vector<std::vector<Rat>> rows, size_t cols) {
    size_t rank = 0;
    std::vector<size_t> pivots;
    for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
        size_t p = rank;
        while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[rank], rows[p]);
        Rat inv = rows[rank][c];
        for (size_t j = c; j <= cols; ++j) rows[rank][j] /= inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || sgn(rows[i][c]) == 0) continue;
            Rat f = rows[i][c];
            for (size_t j = c; j <= cols; ++j) rows[i][j] -= f * rows[rank][j];
        }
        pivots.push_back(c);
        ++rank;
    }
    if (rank < cols)
        throw std::runtime_error("solve_gD: underdetermined system; raise precision");
    for (size_t i = rank; i < rows.size(); ++i)
        if (sgn(rows[i][cols]) != 0)
            throw std::runtime_error("solve_gD: inconsistent surplus constraint");
    std::vector<Rat> x(cols);
    for (size_t i = 0; i < rank; ++i) x[pivots[i]] = rows[i][cols];
    return x;
}

inline long emod4(long n) { return ((n % 4) + 4) % 4; }

inline bool is_square(long n) {
    if (n < 0) return false;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

// Principal part q^{-D}, plus condition, constant-term rule.
inline void verify_basis_form(const DenseZ& g, long D) {
    if (g.coeff(-D) != 1)
        throw std::logic_error("g_D: leading coefficient at q^{-D} is not 1 (D=" +
                               std::to_string(D) + ")");
    for (long n = g.low; n < g.prec(); ++n) {
        if (n == -D) continue;
        bool must_vanish = (n < 0) || emod4(n) == 1 || emod4(n) == 2;
        if (must_vanish && sgn(g.coeff(n)) != 0)
            throw std::logic_error("g_D: unexpected coefficient at exponent " +
                                   std::to_string(n) + " (D=" + std::to_string(D) + ")");
    }
    if (g.prec() > 0) {
        Int want(is_square(D) ? -2 : 0);
        if (g.coeff(0) != want)
            throw std::logic_error("g_D: constant term violates the square rule (D=" +
                                   std::to_string(D) + ")");
    }
}

}  // namespace detail_z

// Ambient weight-3/2 weak forms theta^{3+12N-4b} F2^b / w6^N, b = 0..3N.
// Element b has q-order b - N; exact for exponents < prec.
inline std::vector<DenseZ> build_ambient(long N, long prec) {
    if (N < 1) throw std::invalid_argument("build_ambient: N >= 1 required");
    if (prec <= 4 * N) throw std::invalid_argument("build_ambient: insufficient prec");
    long wp = prec + 2 * N;  // division by w6^N (order N) costs 2N of window
    DenseZ th = dz::theta_dense(1, wp);
    DenseZ f2 = dz::f2_dense(wp);
    DenseZ t4 = dz::power(th, 4, wp);
    DenseZ w6N = dz::power(w6_dense(wp), static_cast<unsigned long>(N), wp);
    DenseZ tp = dz::power(th, static_cast<unsigned long>(3 + 12 * N), wp);
    DenseZ fb = DenseZ::one(wp);
    std::vector<DenseZ> elems;
    for (long b = 0; b <= 3 * N; ++b) {
        elems.push_back(dz::divide(dz::mul(tp, fb, wp), w6N, prec));
        if (b < 3 * N) {
            tp = dz::divide(tp, t4, wp);
            fb = dz::mul(fb, f2, wp);
        }
    }
    return elems;
}

// Coordinates of g_D in the ambient basis with N = D: the unique combination
// with principal part q^{-D} and plus-condition vanishing.  Surplus
// constraints are kept in the system and must come out consistent.
inline std::vector<Rat> solve_gD_coords(long D) {
    if (D < 1 || (D % 4 != 0 && D % 4 != 1))
        throw std::invalid_argument("solve_gD: D must be positive, 0 or 1 mod 4");
    long N = D;
    long dim = 3 * N + 1;
    long eprec = 4 * N + 64;
    auto elems = build_ambient(N, eprec);
    long need = dim + 20;
    std::vector<std::vector<Rat>> rows;
    for (long e = -N; e < eprec && static_cast<long>(rows.size()) < need; ++e) {
        Rat rhs(0);
        bool constrain = false;
        if (e < 0) {
            constrain = true;
            if (e == -D) rhs = 1;
        } else {
            constrain = (e % 4 == 1 || e % 4 == 2);
        }
        if (!constrain) continue;
        std::vector<Rat> row(static_cast<size_t>(dim) + 1);
        for (long b = 0; b < dim; ++b) row[static_cast<size_t>(b)] = Rat(elems[static_cast<size_t>(b)].coeff(e));
        row[static_cast<size_t>(dim)] = rhs;
        rows.push_back(std::move(row));
    }
    return detail_z::gauss_solve(std::move(rows), static_cast<size_t>(dim));
}

// Expand g_D to the requested precision through the numerator
//   g_D w6^D = sum_b y_b theta^{3+12D-4b} F2^b
// evaluated by a Horner scheme (one dense F2 product per step; theta powers
// advance by cheap sparse products) followed by a single division by w6^D.
inline DenseZ gD_from_ambient(long D, long prec) {
    auto x = solve_gD_coords(D);
    long m = 3 * D;
    Int L(1);
    for (const auto& r : x) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), r.get_den_mpz_t());
    std::vector<Int> y(static_cast<size_t>(m) + 1);
    for (long b = 0; b <= m; ++b) {
        Rat v = x[static_cast<size_t>(b)] * Rat(L);
        assert(v.get_den() == 1);
        y[static_cast<size_t>(b)] = v.get_num();
    }

    long wp = prec + 2 * D + 2;  // division by w6^D (order D) costs 2D of window
    DenseZ th = dz::theta_dense(1, wp);
    DenseZ f2 = dz::f2_dense(wp);
    auto thmul = [&](const DenseZ& f) { return dz::mul(th, f, wp); };
    DenseZ t4 = dz::power(th, 4, wp);

    DenseZ P = dz::scale(DenseZ::one(wp), y[static_cast<size_t>(m)]);
    DenseZ Tk;  // theta^{4(m-b)} at step b
    bool have_tk = false;
    for (long b = m - 1; b >= 0; --b) {
        P = dz::mul(P, f2, wp);
        Tk = have_tk ? thmul(thmul(thmul(thmul(Tk)))) : t4;
        have_tk = true;
        if (sgn(y[static_cast<size_t>(b)]) != 0)
            P = dz::add(P, dz::scale(Tk, y[static_cast<size_t>(b)]));
    }
    DenseZ num = thmul(thmul(thmul(P)));

    DenseZ w6 = w6_dense(wp);
    DenseZ den = (D == 1) ? w6 : dz::power(w6, static_cast<unsigned long>(D), wp);
    DenseZ g = dz::divide(num, den, prec);
    if (L != 1) {
        for (auto& c : g.a) {
            Int q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), L.get_mpz_t());
            if (sgn(r) != 0) throw std::logic_error("gD_from_ambient: non-integral coefficient");
            c = q;
        }
    }
    detail_z::verify_basis_form(g, D);
    return g;
}

// The unique basis form as a sparse exact series (linear-algebra route).
inline QSeries solve_gD(long D, long dmax) {
    if (dmax < 1) throw std::invalid_argument("solve_gD: dmax >= 1 required");
    return gD_from_ambient(D, dmax).to_qseries();
}

// j(4 tau) = q^{-4} + 744 + 196884 q^4 + ...; support in 4Z.
inline DenseZ j4_dense(long prec) {
    long p4 = prec / 4 + 4;
    DenseZ e4 = dz::eisenstein_e4(p4);
    DenseZ num = dz::mul(e4, dz::mul(e4, e4, p4), p4);
    DenseZ j = dz::divide(num, dz::delta_dense(p4), p4 - 1);
    return dz::dilate(j, 4);
}

// ---------------------------------------------------------------------------
// GTable: columns D -> dense expansion of g_D (coefficient of q^d = B(D,d)).
// ---------------------------------------------------------------------------
struct GTable {
    std::map<long, DenseZ> cols;

    bool has_col(long D) const { return cols.count(D) != 0; }
    long col_prec(long D) const {
        auto it = cols.find(D);
        return it == cols.end() ? 0 : it->second.prec();
    }

    // B(D,d) with the zero conventions: invalid D or d indices give 0; the
    // principal part is forced; in-window coefficients come from the column.
    Int B(long D, long d) const {
        if (D <= 0 || D % 4 == 2 || D % 4 == 3) return Int(0);
        long dm = detail_z::emod4(d);
        if (dm == 1 || dm == 2) return Int(0);
        if (d < 0) return Int(d == -D ? 1 : 0);
        auto it = cols.find(D);
        if (it == cols.end())
            throw PrecisionError("gtable: column D=" + std::to_string(D) +
                                 " not computed (table window too small)");
        if (d >= it->second.prec())
            throw PrecisionError("gtable: B(" + std::to_string(D) + "," + std::to_string(d) +
                                 ") beyond column precision " + std::to_string(it->second.prec()) +
                                 " (table window too small)");
        return it->second.coeff(d);
    }
};

// Columns for D <= Dmax (D = 0,1 mod 4): g_1 and g_4 by the ambient solve,
// the rest by the multiplication-by-j(4tau) recursion, cancelling lower
// principal parts with already-known columns.  Every column is re-verified.
inline GTable build_gtable(long Dmax, long col_prec, long g1_prec = 0) {
    if (Dmax < 1) throw std::invalid_argument("build_gtable: Dmax >= 1");
    long margin = 40;
    GTable t;
    t.cols[1] = gD_from_ambient(1, std::max(g1_prec, col_prec + margin));
    if (Dmax >= 4) t.cols[4] = gD_from_ambient(4, col_prec + margin);
    if (Dmax >= 5) {
        DenseZ j4 = j4_dense(col_prec + margin + 4 * Dmax);
        for (long D = 5; D <= Dmax; ++D) {
            if (D % 4 != 0 && D % 4 != 1) continue;
            DenseZ h = dz::mul(j4, t.cols.at(D - 4), col_prec + margin);
            for (long Dp = D - 1; Dp >= 1; --Dp) {
                Int c = h.coeff(-Dp);
                if (sgn(c) == 0) continue;
                if (Dp % 4 == 2 || Dp % 4 == 3)
                    throw std::logic_error("build_gtable: pole in a plus-forbidden class");
                dz::submul(h, c, t.cols.at(Dp));
            }
            DenseZ col = DenseZ::zero(-D, h.prec());
            for (long n = -D; n < h.prec(); ++n) col.at(n) = h.coeff(n);
            detail_z::verify_basis_form(col, D);
            t.cols[D] = std::move(col);
        }
    }
    return t;
}

// g_{p^2 D} extracted from the weight-3/2 Hecke action
//   g_D | T_{p^2} = p g_{p^2 D} + (D/p) g_D + g_{D/p^2},
// with T_{p^2} = U_{p^2} + (tensor chi_p) + p V_{p^2}.  The result is
// verified (monic principal part, plus condition, integrality).
inline void extend_by_hecke(GTable& t, long p, long D) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("extend_by_hecke: odd prime p");
    long target = p * p * D;
    if (t.has_col(target)) return;
    const DenseZ& g = t.cols.at(D);
    const DenseZ* lower = nullptr;
    if (D % (p * p) == 0) {
        auto it = t.cols.find(D / (p * p));
        if (it == t.cols.end())
            throw PrecisionError("extend_by_hecke: column D/p^2 missing");
        lower = &it->second;
    }
    long out_prec = (g.prec() + p * p - 1) / (p * p);
    if (lower) out_prec = std::min(out_prec, lower->prec());
    if (out_prec < 1)
        throw PrecisionError("extend_by_hecke: source column too short");
    int Dp = kronecker(D, p);
    DenseZ r = DenseZ::zero(-target, out_prec);
    for (long n = -target; n < out_prec; ++n) {
        Int acc(0);
        long pn = p * p * n;
        if (pn >= g.low && pn < g.prec()) acc += g.coeff(pn);
        int ch = chi_p(n, p);
        if (ch != 0 && n >= g.low && n < g.prec()) acc += ch * g.coeff(n);
        if (n % (p * p) == 0) {
            long q = n / (p * p);
            if (q >= g.low && q < g.prec()) acc += p * g.coeff(q);
        }
        if (Dp != 0 && n >= g.low && n < g.prec()) acc -= Dp * g.coeff(n);
        if (lower && n < lower->prec()) acc -= lower->coeff(n);
        Int quot, rem;
        Int pp(p);
        mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), acc.get_mpz_t(), pp.get_mpz_t());
        if (sgn(rem) != 0)
            throw std::logic_error("extend_by_hecke: non-integral extraction at n=" +
                                   std::to_string(n));
        r.at(n) = quot;
    }
    detail_z::verify_basis_form(r, target);
    t.cols[target] = std::move(r);
}

// Make sure columns p^{2k} D0 exist for k = 0..kmax (as far as precision of
// the base column allows; throws PrecisionError when it cannot).
inline void ensure_hecke_tower(GTable& t, long p, long D0, long kmax) {
    for (long k = 1; k <= kmax; ++k) {
        long D = D0;
        for (long i = 0; i < k - 1; ++i) D *= p * p;
        extend_by_hecke(t, p, D);
    }
}

// ---------------------------------------------------------------------------
// Independent floating-point CM oracle:
//   B(1,d) = -t(d),  t(d) = sum over reduced forms Q of disc -d of
//            (j(tau_Q) - 744) / w_Q,  w_Q in {1,2,3} by stabilizer size.
// j is evaluated from its exact q-expansion at tau_Q = (-b + i sqrt d)/(2a).
// ---------------------------------------------------------------------------
inline Int cm_trace_oracle(long d, long digits = 0) {
    if (d <= 0 || (d % 4 != 0 && d % 4 != 3))
        throw std::invalid_argument("cm_trace_oracle: d > 0, d = 0,3 mod 4 required");
    if (digits <= 0)
        digits = static_cast<long>(3.141592653589793 * std::sqrt(static_cast<double>(d)) /
                                   std::log(10.0)) + 60;
    mpfr_prec_t bits = static_cast<mpfr_prec_t>(digits * 10 / 3) + 64;

    // all reduced forms of discriminant -d, with stabilizer weights
    struct Form { long a, b; int w; };
    std::vector<Form> forms;
    for (long a = 1; 3 * a * a <= d; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b + d;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            int w = 1;
            if (a == b && b == c) w = 3;
            else if (b == 0 && a == c) w = 2;
            forms.push_back({a, b, w});
        }
    }
    if (forms.empty()) throw std::logic_error("cm_trace_oracle: no reduced forms");

    // truncation: |c(n) q^n| ~ exp(4 pi sqrt n - pi sqrt d n / a), a <= sqrt(d/3)
    double tail_target = -(static_cast<double>(digits) + 20.0) * std::log(10.0);
    long T = 1;
    while (4.0 * M_PI * std::sqrt(static_cast<double>(T)) -
               M_PI * std::sqrt(3.0) * static_cast<double>(T) > tail_target)
        ++T;
    long jprec = T + 2;
    DenseZ e4 = dz::eisenstein_e4(jprec);
    DenseZ jnum = dz::mul(e4, dz::mul(e4, e4, jprec), jprec);
    DenseZ j = dz::divide(jnum, dz::delta_dense(jprec), jprec - 1);  // low -1

    mpfr_t pi, sq, ang, mod, qre, qim, zre, zim, t1, t2, total, toti, tmp;
    mpfr_inits2(bits, pi, sq, ang, mod, qre, qim, zre, zim, t1, t2, total, toti, tmp,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_set_ui(total, 0, MPFR_RNDN);
    mpfr_set_ui(toti, 0, MPFR_RNDN);
    mpfr_sqrt_ui(sq, static_cast<unsigned long>(d), MPFR_RNDN);  // sqrt d

    for (const auto& f : forms) {
        // q = exp(-pi sqrt d / a) * exp(-i pi b / a)
        mpfr_mul(mod, pi, sq, MPFR_RNDN);
        mpfr_div_si(mod, mod, f.a, MPFR_RNDN);
        mpfr_neg(mod, mod, MPFR_RNDN);
        mpfr_exp(mod, mod, MPFR_RNDN);  // |q|
        mpfr_mul_si(ang, pi, -f.b, MPFR_RNDN);
        mpfr_div_si(ang, ang, f.a, MPFR_RNDN);
        mpfr_cos(qre, ang, MPFR_RNDN);
        mpfr_sin(qim, ang, MPFR_RNDN);
        mpfr_mul(qre, qre, mod, MPFR_RNDN);
        mpfr_mul(qim, qim, mod, MPFR_RNDN);

        // Horner over n = T-1 .. 0, then add the q^{-1} principal term
        mpfr_set_ui(zre, 0, MPFR_RNDN);
        mpfr_set_ui(zim, 0, MPFR_RNDN);
        for (long n = j.prec() - 1; n >= 0; --n) {
            // z = z*q + c(n)
            mpfr_mul(t1, zre, qre, MPFR_RNDN);
            mpfr_mul(t2, zim, qim, MPFR_RNDN);
            mpfr_sub(t1, t1, t2, MPFR_RNDN);
            mpfr_mul(t2, zre, qim, MPFR_RNDN);
            mpfr_mul(tmp, zim, qre, MPFR_RNDN);
            mpfr_add(t2, t2, tmp, MPFR_RNDN);
            mpfr_set(zre, t1, MPFR_RNDN);
            mpfr_set(zim, t2, MPFR_RNDN);
            const Int& cn = j.coeff(n);
            if (sgn(cn) != 0) {
                mpfr_set_z(tmp, cn.get_mpz_t(), MPFR_RNDN);
                mpfr_add(zre, zre, tmp, MPFR_RNDN);
            }
        }
        // z += 1/q = conj(q)/|q|^2
        mpfr_mul(t1, qre, qre, MPFR_RNDN);
        mpfr_mul(t2, qim, qim, MPFR_RNDN);
        mpfr_add(t1, t1, t2, MPFR_RNDN);  // |q|^2
        mpfr_div(t2, qre, t1, MPFR_RNDN);
        mpfr_add(zre, zre, t2, MPFR_RNDN);
        mpfr_div(t2, qim, t1, MPFR_RNDN);
        mpfr_neg(t2, t2, MPFR_RNDN);
        mpfr_add(zim, zim, t2, MPFR_RNDN);

        // total += (j - 744) * 6 / w
        mpfr_sub_ui(zre, zre, 744, MPFR_RNDN);
        mpfr_mul_si(zre, zre, 6 / f.w, MPFR_RNDN);
        mpfr_mul_si(zim, zim, 6 / f.w, MPFR_RNDN);
        mpfr_add(total, total, zre, MPFR_RNDN);
        mpfr_add(toti, toti, zim, MPFR_RNDN);
    }

    // total = 6 t(d); round and certify
    mpfr_rint(t1, total, MPFR_RNDN);
    mpfr_sub(t2, total, t1, MPFR_RNDN);
    mpfr_abs(t2, t2, MPFR_RNDN);
    mpfr_abs(toti, toti, MPFR_RNDN);
    bool bad = mpfr_cmp_d(t2, 1e-10) > 0 || mpfr_cmp_d(toti, 1e-10) > 0;
    Int t6;
    if (!bad) {
        mpfr_get_z(t6.get_mpz_t(), t1, MPFR_RNDN);
        if (t6 % 6 != 0) bad = true;
    }
    mpfr_clears(pi, sq, ang, mod, qre, qim, zre, zim, t1, t2, total, toti, tmp,
                static_cast<mpfr_ptr>(nullptr));
    if (bad)
        throw PrecisionError("cm_trace_oracle: rounding residual too large at d=" +
                             std::to_string(d));
    return Int(-t6 / 6);
}

}  // namespace singmod

#endif
