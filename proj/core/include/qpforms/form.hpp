#ifndef QPFORMS_FORM_HPP
#define QPFORMS_FORM_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpforms/scalar.hpp"
#include "qpforms/vector_qp.hpp"

namespace qpforms {

/// Exponent vector of a monomial; one entry per variable.
using Monomial = std::vector<int>;

/// Homogeneous form of degree d in n variables over Q_p, stored sparsely as
/// exponent-vector -> coefficient with lexicographic key order.  Coefficients
/// indistinguishable from zero are never stored.  Immutable after building.
class Form {
  public:
    Form(unsigned long p, int prec, int nvars, int degree)
        : p_(p), prec_(prec), n_(nvars), d_(degree) {
        if (nvars < 1) throw Error("form: need at least one variable");
        if (degree < 0) throw Error("form: negative degree");
    }

    unsigned long prime() const { return p_; }
    int precision() const { return prec_; }
    int nvars() const { return n_; }
    int degree() const { return d_; }
    const std::map<Monomial, PadicScalar>& terms() const { return terms_; }

    /// Accumulate c * x^mono; degrees must match, zero-marked sums are dropped.
    void add_term(const Monomial& mono, const PadicScalar& c);
    void add_term_int(const Monomial& mono, long c);

    /// F(v) in capped-precision arithmetic.
    PadicScalar evaluate(const VectorQp& v) const;

    /// G(x_1..x_k) = F(sum_i x_i b_i): restriction to the span of `basis`.
    Form restrict(const std::vector<VectorQp>& basis) const;

    /// All first partial derivatives evaluated at v.
    VectorQp gradient(const VectorQp& v) const;
    /// dF/dx_i as a form of degree d-1.
    Form partial(int i) const;

    /// F multiplied by p^e (coefficient-wise valuation shift).
    Form shift(long e) const;

    /// Coefficients as plain residues mod p^k when every coefficient has
    /// val >= 0; nullopt otherwise.  Used by the integer search fast path.
    std::optional<std::vector<std::pair<Monomial, unsigned long>>>
    residue_terms(int k) const;

    /// Smallest coefficient valuation (certified bound).
    long min_coeff_val() const;

    /// Variables grouped by co-occurrence in terms (disjoint-support blocks);
    /// variables that appear in no term are returned in `unused`.
    std::vector<std::vector<int>> blocks(std::vector<int>* unused = nullptr) const;

  private:
    unsigned long p_;
    int prec_;
    int n_;
    int d_;
    std::map<Monomial, PadicScalar> terms_;
};

/// Slot key of a directional expansion: the multidegree over the basis
/// variables and the power j of the direction parameter, |d| + j = deg F.
using SlotKey = std::pair<Monomial, int>;

/// F(sum_i x_i e_i + t e) organised by slots (d, j): the coefficient of
/// x^d t^j.  j=1 rows are the linear (independence) slots, j=2 quadratic,
/// j=3 cubic, j=deg the pure value F(e); j=0 is the restriction of F to the
/// basis.  When built with materialize_symbolic, each j>=1 slot also carries
/// the coefficient form in the n ambient variables as a polynomial in e.
struct Expansion {
    int basis_size = 0;
    int degree = 0;
    std::map<SlotKey, PadicScalar> slots;
    std::map<SlotKey, Form> symbolic;  // empty unless materialized

    const PadicScalar* slot(const Monomial& d, int j) const {
        auto it = slots.find({d, j});
        return it == slots.end() ? nullptr : &it->second;
    }
};

/// Expansion of F along direction e over `basis`.  With
/// materialize_symbolic the symbolic slot forms (in the ambient variables)
/// are computed as well; this is the expensive mode used to build constraint
/// systems for choosing e.
Expansion directional_expand(const Form& F, const std::vector<VectorQp>& basis,
                             const VectorQp& e, bool materialize_symbolic = false);

/// Symbolic-only variant: slot forms in the ambient variables, no direction
/// vector required.
std::map<SlotKey, Form> expansion_constraint_forms(const Form& F,
                                                   const std::vector<VectorQp>& basis);

} // namespace qpforms

#endif
