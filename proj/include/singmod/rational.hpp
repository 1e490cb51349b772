#ifndef SINGMOD_RATIONAL_HPP
#define SINGMOD_RATIONAL_HPP

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace singmod {

using Int = mpz_class;
using Rat = mpq_class;

// Canonicalized rational a/b, b > 0 after reduction.
inline Rat make_rat(const Int& num, const Int& den) {
    if (sgn(den) == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

inline Int pow_int(long base, unsigned long exp) {
    Int r, b(base);
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exp);
    return r;
}

// Kronecker symbol (a/n), full generality: (a/1) = 1, (a/2) by the
// standard extension, (0/n) = 0 unless n = +-1.
inline int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

// chi_p(m) = (-m / p).
inline int chi_p(const Int& m, long p) { return kronecker(Int(-m), Int(p)); }
inline int chi_p(long m, long p) { return kronecker(Int(-m), Int(p)); }

// p-adic valuation; std::nullopt encodes +infinity (x = 0).
inline std::optional<long> padic_val(const Int& x, long p) {
    assert(p >= 2);
    if (sgn(x) == 0) return std::nullopt;
    Int q, r, cur(abs(x));
    long v = 0;
    Int pp(p);
    while (true) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), cur.get_mpz_t(), pp.get_mpz_t());
        if (sgn(r) != 0) break;
        cur = q;
        ++v;
    }
    return v;
}

inline std::optional<long> padic_val(const Rat& x, long p) {
    if (sgn(x) == 0) return std::nullopt;
    auto vn = padic_val(Int(x.get_num()), p);
    auto vd = padic_val(Int(x.get_den()), p);
    return *vn - *vd;
}

// x mod m for rational x whose denominator is coprime to m; result in [0, m).
inline Int rat_mod(const Rat& x, const Int& m) {
    Int den(x.get_den());
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("rat_mod: denominator not invertible mod m");
    Int r = (Int(x.get_num()) % m) * inv % m;
    if (sgn(r) < 0) r += m;
    return r;
}

inline Int rat_mod(const Rat& x, long m) { return rat_mod(x, Int(m)); }

// Thrown when a claim would need more q-expansion than the caller provided.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace singmod

#endif
