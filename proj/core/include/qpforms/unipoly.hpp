#ifndef QPFORMS_UNIPOLY_HPP
#define QPFORMS_UNIPOLY_HPP

#include <string>
#include <vector>

#include "qpforms/form.hpp"
#include "qpforms/scalar.hpp"
#include "qpforms/vector_qp.hpp"

namespace qpforms {

/// Univariate polynomial over Q_p, dense coefficients, index = power of t.
class UniPoly {
  public:
    UniPoly(unsigned long p, std::vector<PadicScalar> coeffs)
        : p_(p), c_(std::move(coeffs)) {
        if (c_.empty()) throw Error("unipoly: no coefficients");
    }

    /// Integer coefficients, constant term first.
    static UniPoly from_ints(const std::vector<long>& coeffs, unsigned long p,
                             int prec = kDefaultPrecision);
    /// f(t) = F(base + t * dir).
    static UniPoly from_form_line(const Form& F, const VectorQp& base,
                                  const VectorQp& dir);

    unsigned long prime() const { return p_; }
    int nominal_degree() const { return static_cast<int>(c_.size()) - 1; }
    const PadicScalar& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
    const std::vector<PadicScalar>& coeffs() const { return c_; }

    PadicScalar eval(const PadicScalar& t) const;
    UniPoly derivative() const;

    /// Coefficients of f(t + a): Taylor expansion at a via exact binomials.
    UniPoly taylor_shift(const PadicScalar& a) const;
    /// f(p^m * t): coefficient i multiplied by p^(m*i).
    UniPoly compress(long m) const;
    /// p^e * f(t).
    UniPoly scale(long e) const;

    /// Smallest certified coefficient valuation bound.
    long min_coeff_val() const;

    std::string tokens() const;

  private:
    unsigned long p_;
    std::vector<PadicScalar> c_;
};

} // namespace qpforms

#endif
