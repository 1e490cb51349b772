#ifndef SINGMOD_ETA_HPP
#define SINGMOD_ETA_HPP

#include "singmod/densez.hpp"
#include "singmod/qseries.hpp"

#include <vector>

namespace singmod {

// Formal eta product prod_delta eta(q^delta)^{e_delta}.  Materialization to a
// q-series is permitted only when the total fractional power sum(delta*e)/24
// is an integer.
struct EtaProduct {
    struct Factor {
        long scale;     // delta >= 1
        long exponent;  // e, may be negative
    };
    std::vector<Factor> factors;

    Rat fractional_power() const {
        Int s(0);
        for (const auto& f : factors) s += Int(f.scale) * f.exponent;
        return make_rat(s, Int(24));
    }
};

inline DenseZ eta_product_dense(const EtaProduct& spec, long prec) {
    Rat fp = spec.fractional_power();
    if (fp.get_den() != 1)
        throw std::invalid_argument("eta_product: non-integral fractional power " +
                                    fp.get_str());
    long shift = static_cast<long>(fp.get_num().get_si());
    // expand prod (1-q^{delta n})^e and shift by q^{sum delta e / 24}
    DenseZ acc = DenseZ::one(prec);
    for (const auto& f : spec.factors) {
        if (f.scale < 1) throw std::invalid_argument("eta_product: scale must be positive");
        DenseZ e = dz::dilate(dz::euler_product((prec + f.scale - 1) / f.scale + 1), f.scale);
        if (static_cast<long>(e.a.size()) > prec) e.a.resize(static_cast<size_t>(prec));
        unsigned long mag =
            static_cast<unsigned long>(f.exponent < 0 ? -f.exponent : f.exponent);
        DenseZ ep = dz::power(e, mag, prec);
        acc = f.exponent >= 0 ? dz::mul(acc, ep, prec) : dz::divide(acc, ep, prec);
    }
    acc.low += shift;
    return acc;
}

inline QSeries eta_product(const EtaProduct& spec, long prec) {
    return eta_product_dense(spec, prec).to_qseries();
}

}  // namespace singmod

#endif
