#include "qpforms/unipoly.hpp"

#include <algorithm>
#include <sstream>

namespace qpforms {

UniPoly UniPoly::from_ints(const std::vector<long>& coeffs, unsigned long p, int prec) {
    std::vector<PadicScalar> c;
    c.reserve(coeffs.size());
    for (long v : coeffs) c.push_back(PadicScalar::from_integer(v, p, prec));
    return UniPoly(p, std::move(c));
}

UniPoly UniPoly::from_form_line(const Form& F, const VectorQp& base, const VectorQp& dir) {
    Form r = F.restrict({base, dir});
    int d = F.degree();
    std::vector<PadicScalar> c(static_cast<size_t>(d) + 1, PadicScalar::zero(F.prime()));
    for (const auto& [mono, coeff] : r.terms()) c[static_cast<size_t>(mono[1])] = coeff;
    return UniPoly(F.prime(), std::move(c));
}

PadicScalar UniPoly::eval(const PadicScalar& t) const {
    PadicScalar acc = c_.back();
    for (size_t i = c_.size() - 1; i-- > 0;) acc = acc.mul(t).add(c_[i]);
    return acc;
}

UniPoly UniPoly::derivative() const {
    if (c_.size() == 1)
        return UniPoly(p_, {PadicScalar::zero(p_)});
    std::vector<PadicScalar> d;
    d.reserve(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
        d.push_back(c_[i].mul_int(static_cast<long>(i)));
    return UniPoly(p_, std::move(d));
}

UniPoly UniPoly::taylor_shift(const PadicScalar& a) const {
    size_t n = c_.size();
    std::vector<PadicScalar> g(n, PadicScalar::zero(p_));
    std::vector<PadicScalar> apow;
    apow.push_back(PadicScalar::from_integer(1, p_, kDefaultPrecision));
    for (size_t i = 1; i < n; ++i) apow.push_back(apow.back().mul(a));
    for (size_t j = 0; j < n; ++j) {
        PadicScalar s = PadicScalar::zero(p_);
        for (size_t i = j; i < n; ++i) {
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(i),
                         static_cast<unsigned long>(j));
            PadicScalar term = c_[i].mul(apow[i - j]);
            if (binom != 1) {
                long b = binom.fits_slong_p() ? binom.get_si() : 0;
                if (b == 0) throw Error("taylor_shift: binomial too large");
                term = term.mul_int(b);
            }
            s = s.add(term);
        }
        g[j] = s;
    }
    return UniPoly(p_, std::move(g));
}

UniPoly UniPoly::compress(long m) const {
    std::vector<PadicScalar> c;
    c.reserve(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
        c.push_back(c_[i].shift(m * static_cast<long>(i)));
    return UniPoly(p_, std::move(c));
}

UniPoly UniPoly::scale(long e) const {
    std::vector<PadicScalar> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(x.shift(e));
    return UniPoly(p_, std::move(c));
}

long UniPoly::min_coeff_val() const {
    long m = kZeroPrecCap;
    for (const auto& x : c_) m = std::min(m, x.val_bound());
    return m;
}

std::string UniPoly::tokens() const {
    std::ostringstream out;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) out << ' ';
        out << c_[i].token();
    }
    return out.str();
}

} // namespace qpforms
