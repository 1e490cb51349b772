#ifndef SINGMOD_CLASSNUM_HPP
#define SINGMOD_CLASSNUM_HPP

#include "singmod/qseries.hpp"
#include "singmod/rational.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace singmod {

// Integral binary quadratic form a x^2 + b x y + c y^2.
struct BinQuadForm {
    long a = 0, b = 0, c = 0;

    long disc() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return a > 0 && disc() < 0; }
    bool reduced() const {
        if (!positive_definite()) return false;
        long ab = b < 0 ? -b : b;
        if (!(ab <= a && a <= c)) return false;
        if ((ab == a || a == c) && b < 0) return false;
        return true;
    }
    bool primitive() const { return std::gcd(std::gcd(a, b < 0 ? -b : b), c) == 1; }
};

// -r a fundamental discriminant: r = 3 mod 4 squarefree, or r = 4m with m
// squarefree and m = 1,2 mod 4.
inline bool is_fundamental_neg(long r) {
    if (r <= 0) return false;
    auto squarefree = [](long n) {
        for (long d = 2; d * d <= n; ++d)
            if (n % (d * d) == 0) return false;
        return true;
    };
    if (r % 4 == 3) return squarefree(r);
    if (r % 4 == 0) {
        long m = r / 4;
        return (m % 4 == 1 || m % 4 == 2) && squarefree(m);
    }
    return false;
}

struct FundDecomp {
    long r = 0;  // -r fundamental
    long f = 0;  // n = r f^2
};

// Unique decomposition n = r f^2 with -r fundamental; needs n = 0,3 mod 4.
inline FundDecomp fundamental_decomp(long n) {
    if (n <= 0 || (n % 4 != 0 && n % 4 != 3))
        throw std::invalid_argument("fundamental_decomp: need n > 0, n = 0,3 mod 4");
    for (long f = static_cast<long>(std::sqrt(static_cast<double>(n))) + 1; f >= 1; --f) {
        if (f * f > n || n % (f * f) != 0) continue;
        long r = n / (f * f);
        if (is_fundamental_neg(r)) return {r, f};
    }
    throw std::logic_error("fundamental_decomp: no fundamental part found");
}

// Half the number of units of Q(sqrt(-r)).
inline int units_w(long r) {
    if (!is_fundamental_neg(r)) throw std::invalid_argument("units_w: -r not fundamental");
    if (r == 3) return 3;
    if (r == 4) return 2;
    return 1;
}

// Class number of the fundamental discriminant -r by direct enumeration of
// reduced forms.  For fundamental discriminants every form is primitive.
inline long class_number_h(long r) {
    if (!is_fundamental_neg(r))
        throw std::invalid_argument("class_number_h: -r not fundamental");
    long count = 0;
    for (long a = 1; 3 * a * a <= r; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b + r;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            ++count;
        }
    }
    return count;
}

namespace detail {

// Warm-up sweep: class numbers h(r) for all fundamental -r <= bound, filled
// from a single pass over reduced primitive forms.  Single-writer, then
// concurrent readers.
class HurwitzTable {
public:
    static HurwitzTable& instance() {
        static HurwitzTable t;
        return t;
    }

    void warm(long bound) {
        std::lock_guard<std::mutex> lk(mu_);
        if (bound <= bound_) return;
        h_.assign(static_cast<size_t>(bound) + 1, 0);
        for (long a = 1; 3 * a * a <= bound; ++a) {
            for (long b = 0; b <= a; ++b) {
                long g0 = std::gcd(a, b);
                for (long c = a; 4 * a * c - b * b <= bound; ++c) {
                    long d = 4 * a * c - b * b;
                    if (d <= 0) continue;
                    if (std::gcd(g0, c) != 1) continue;
                    // count +-b; b = 0, b = a, a = c each give one form only
                    long mult = (b == 0 || b == a || a == c) ? 1 : 2;
                    h_[static_cast<size_t>(d)] += mult;
                }
            }
        }
        bound_ = bound;
    }

    long h(long r) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            if (r <= bound_) return h_[static_cast<size_t>(r)];
        }
        return class_number_h(r);
    }

    long bound() const { return bound_; }

private:
    std::mutex mu_;
    long bound_ = 0;
    std::vector<long> h_;
};

inline std::vector<long> divisors(long n) {
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i) {
        if (n % i) continue;
        d.push_back(i);
        if (i != n / i) d.push_back(n / i);
    }
    return d;
}

inline int moebius(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline long sigma1(long n) {
    long s = 0;
    for (long d : divisors(n)) s += d;
    return s;
}

}  // namespace detail

// Hurwitz-Kronecker class number:
//   H(0) = -1/12, H(n) = 0 for n = 1,2 mod 4, otherwise
//   H(n) = h(r)/w(r) * sum_{m|f} mu(m) (-r/m) sigma_1(f/m)  with n = r f^2.
inline Rat hurwitz_H(long n) {
    if (n < 0) throw std::invalid_argument("hurwitz_H: negative argument");
    if (n == 0) return make_rat(-1, 12);
    if (n % 4 == 1 || n % 4 == 2) return Rat(0);
    auto [r, f] = fundamental_decomp(n);
    long h = detail::HurwitzTable::instance().h(r);
    long s = 0;
    for (long m : detail::divisors(f))
        s += detail::moebius(m) * kronecker(-r, m) * detail::sigma1(f / m);
    return make_rat(Int(h) * s, Int(units_w(r)));
}

// Warm the class-number memo for arguments up to n_max.
inline void warm_hurwitz(long n_max) { detail::HurwitzTable::instance().warm(n_max); }

// The generating series curlyH = -1/12 + sum_{n>0} H(n) q^n.
inline QSeries series_H(long prec) {
    if (prec < 1) throw std::invalid_argument("series_H: prec >= 1 required");
    warm_hurwitz(prec);
    QSeries r(0, prec);
    r.set(0, make_rat(-1, 12));
    for (long n = 3; n < prec; ++n) {
        if (n % 4 == 1 || n % 4 == 2) continue;
        r.set(n, hurwitz_H(n));
    }
    return r;
}

}  // namespace singmod

#endif
