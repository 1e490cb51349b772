#ifndef SINGMOD_SHIMURA11_HPP
#define SINGMOD_SHIMURA11_HPP

#include "singmod/eisenstein.hpp"
#include "singmod/eta.hpp"
#include "singmod/padic.hpp"
#include "singmod/report.hpp"
#include "singmod/zagier.hpp"

#include <string>
#include <vector>

namespace singmod {

// G = (eta(q^2) eta(q^22) theta(q^11)) | U_4, the normalized generator of the
// minus-space S^- at p = 11 (G|U_121 = G); its coefficients c(d) encode the
// central L-values via Waldspurger.
inline DenseZ build_G(long prec) {
    long wp = 4 * prec;
    DenseZ e = eta_product_dense({{{2, 1}, {22, 1}}}, wp);
    DenseZ g = dz::mul(e, dz::theta_dense(11, wp), wp);
    return dz::subsample(g, 4);
}

// F = eta(q)^2 eta(q^11)^2, the weight-2 newform of level 11.
inline DenseZ build_F(long prec) {
    return eta_product_dense({{{1, 2}, {11, 2}}}, prec);
}

// 248 = B(1,3) is not congruent to -8/5 mod 11: the cuspidal coefficient
// lambda in g~_1 = -(12/5) tildeH + lambda G is nonzero.  Checked at the
// n = 0 and (window permitting) n = 1 approximant levels.
inline CongruenceReport lambda_check(const GTable& t) {
    CongruenceReport r;
    r.claim_id = "lambda";
    r.window = {3, 3};
    Int lhs0 = rat_mod(Rat(t.B(1, 3)), 11);
    Int target = rat_mod(make_rat(-12, 5) * tilde_H_coeff(11, 3), 11);
    r.params = {{"B(1,3) mod 11", lhs0.get_str()}, {"-12/5 tildeH(3) mod 11", target.get_str()}};
    bool sep0 = lhs0 != target;
    bool ok = sep0;
    if (t.has_col(1) && t.col_prec(1) > 121 * 3) {
        Int lhs1 = rat_mod(Rat(t.B(1, 121 * 3)), 11);
        r.params["B(1,363) mod 11"] = lhs1.get_str();
        ok = ok && lhs1 != target;
        r.params["levels"] = "n=0,1";
    } else {
        r.params["levels"] = "n=0";
    }
    r.verdict = ok ? Verdict::PASS : Verdict::FAIL;
    if (!ok) r.witness = "no separation: lambda = 0 not excluded";
    return r;
}

// Per-discriminant scan row for the machine-readable report.
struct Thm11Row {
    long d;
    int chi;       // (-d/11)
    Int c;         // c(d) from G
    Int H_mod_55;  // H(d) as a residue mod 55 (denominators are prime to 55)
    Int B_mod_11;
};

inline std::vector<Thm11Row> thm11_table(const GTable& t, long dmax) {
    DenseZ G = build_G(dmax + 1);
    std::vector<Thm11Row> rows;
    for (long d = 3; d <= dmax; ++d) {
        if (d % 4 == 1 || d % 4 == 2) continue;
        if (!is_fundamental_neg(d)) continue;
        int chi = chi_p(d, 11);
        if (chi != -1) continue;
        rows.push_back({d, chi, G.coeff(d), rat_mod(hurwitz_H(d), 55), rat_mod(Rat(t.B(1, d)), 11)});
    }
    return rows;
}

// The conductor-11 congruence suite on fundamental -d with (-d/11) = -1:
//   (a) unconditionally B(1, 11^2 d) = 2 B(1,d) (mod 11);
//   (b) when c(d) = 0: H(d) = 6 B(1,d) (mod 11), H(d) = 0 (mod 5);
//   (c) when c(d) != 0: the deviation B(1,11^{2n}d) + (24/5) H(d) keeps a
//       bounded 11-adic valuation (= ord of lambda c(d)) instead of growing.
// Instances beyond the g_1 window are skipped and counted.
inline std::vector<CongruenceReport> verify_thm11(const GTable& t, long dmax, long n = 1) {
    std::vector<CongruenceReport> out;
    auto rows = thm11_table(t, dmax);

    CongruenceReport un;
    un.claim_id = "thm11-unconditional";
    un.params = {{"dmax", std::to_string(dmax)}};
    un.required = 1;
    un.window = {0, dmax};
    long checked = 0, skipped = 0;
    std::optional<long> minv;
    for (const auto& row : rows) {
        if (121 * row.d >= t.col_prec(1)) {
            ++skipped;
            continue;
        }
        ++checked;
        auto v = padic_val(Int(t.B(1, 121 * row.d) - 2 * t.B(1, row.d)), 11);
        if (v && (!minv || *v < *minv)) {
            minv = *v;
            if (*v < 1)
                un.witness = "d=" + std::to_string(row.d);
        }
    }
    un.params["checked"] = std::to_string(checked);
    un.params["skipped"] = std::to_string(skipped);
    un.observed_valuation = minv;
    un.verdict = verdict_from(minv, 1, checked == 0);
    out.push_back(un);

    CongruenceReport c0;
    c0.claim_id = "thm11-c0";
    c0.params = {{"dmax", std::to_string(dmax)}};
    c0.window = {0, dmax};
    std::string dlist;
    bool c0_fail = false;
    long c0_count = 0;
    for (const auto& row : rows) {
        if (sgn(row.c) != 0) continue;
        ++c0_count;
        if (!dlist.empty()) dlist += ",";
        dlist += std::to_string(row.d);
        Int h11 = rat_mod(hurwitz_H(row.d), 11);
        Int b11 = rat_mod(Rat(6 * t.B(1, row.d)), 11);
        Int h5 = rat_mod(hurwitz_H(row.d), 5);
        if (h11 != b11 || sgn(h5) != 0) {
            c0_fail = true;
            c0.witness = "d=" + std::to_string(row.d) + " H mod 11=" + h11.get_str() +
                         " 6B mod 11=" + b11.get_str() + " H mod 5=" + h5.get_str();
        }
    }
    c0.params["witnesses"] = dlist.empty() ? "(none in window)" : dlist;
    c0.params["count"] = std::to_string(c0_count);
    c0.verdict = c0_count == 0 ? Verdict::UNKNOWN : (c0_fail ? Verdict::FAIL : Verdict::PASS);
    out.push_back(c0);

    CongruenceReport st;
    st.claim_id = "thm11-cnz-stable";
    st.params = {{"dmax", std::to_string(dmax)}, {"n", std::to_string(n)}};
    st.window = {0, dmax};
    long st_checked = 0, st_skipped = 0;
    bool st_fail = false;
    long P = detail_p::ipow_l(11, 2 * n);
    for (const auto& row : rows) {
        if (sgn(row.c) == 0) continue;
        if (static_cast<double>(P) * row.d >= static_cast<double>(t.col_prec(1))) {
            ++st_skipped;
            continue;
        }
        ++st_checked;
        Rat target = make_rat(-24, 5) * hurwitz_H(row.d);
        auto v0 = padic_val(Rat(Rat(t.B(1, row.d)) - target), 11);
        auto vn = padic_val(Rat(Rat(t.B(1, P * row.d)) - target), 11);
        // a genuine c(d) != 0 deviation must not gain valuation with n
        if (!vn || !v0 || *vn > *v0) {
            st_fail = true;
            st.witness = "d=" + std::to_string(row.d) +
                         " ord0=" + (v0 ? std::to_string(*v0) : "inf") +
                         " ord" + std::to_string(n) + "=" + (vn ? std::to_string(*vn) : "inf");
        }
    }
    st.params["checked"] = std::to_string(st_checked);
    st.params["skipped"] = std::to_string(st_skipped);
    st.verdict = st_checked == 0 ? Verdict::UNKNOWN : (st_fail ? Verdict::FAIL : Verdict::PASS);
    out.push_back(st);

    return out;
}

// Remark: c(d) = 0 (i.e. L(E^{-d},1) = 0) forces 11 | B(5,d).
inline CongruenceReport verify_B5_remark(const GTable& t, long dmax) {
    CongruenceReport r;
    r.claim_id = "b5-remark";
    r.params = {{"dmax", std::to_string(dmax)}};
    r.required = 1;
    r.window = {0, dmax};
    auto rows = thm11_table(t, dmax);
    long checked = 0;
    std::optional<long> minv;
    for (const auto& row : rows) {
        if (sgn(row.c) != 0) continue;  // false antecedent: no claim
        if (!t.has_col(5) || row.d >= t.col_prec(5)) continue;
        ++checked;
        auto v = padic_val(t.B(5, row.d), 11);
        if (v && (!minv || *v < *minv)) {
            minv = *v;
            if (*v < 1) r.witness = "d=" + std::to_string(row.d);
        }
    }
    r.params["checked"] = std::to_string(checked);
    r.observed_valuation = minv;
    if (checked == 0) {
        r.verdict = Verdict::SKIPPED;
        r.witness = "no c(d) = 0 witnesses in window";
    } else {
        r.verdict = verdict_from(minv, 1, false);
    }
    return r;
}

}  // namespace singmod

#endif
