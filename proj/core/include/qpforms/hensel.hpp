#ifndef QPFORMS_HENSEL_HPP
#define QPFORMS_HENSEL_HPP

#include <optional>
#include <string>

#include "qpforms/form.hpp"
#include "qpforms/scalar.hpp"
#include "qpforms/unipoly.hpp"
#include "qpforms/vector_qp.hpp"

namespace qpforms {

/// Which lifting hypothesis applied at the starting point.
///
///   classical          nu(f(x0)) > 2 nu(f'(x0))
///   variant_strict     nu(f'(x0)) = m >= 1, nu(f(x0)) = 2m, second Taylor
///                      coefficient has nu >= 1, and m == 1 (so that
///                      nu(f) > nu(f')^2)
///   variant_equality   same hypotheses with m >= 2 (nu(f) <= nu(f')^2)
///   smooth_point       multivariate: classical along the coordinate whose
///                      partial derivative has minimal valuation
///   inapplicable       none of the above certified
enum class LiftBranch { classical, variant_strict, variant_equality, smooth_point, inapplicable };

const char* to_string(LiftBranch b);

struct LiftReport {
    LiftBranch branch = LiftBranch::inapplicable;
    bool ok = false;
    Valuation val_f = Valuation::at_least(0);        // nu(f(x0))
    Valuation val_fprime = Valuation::at_least(0);   // nu(f'(x0))
    Valuation val_f2 = Valuation::at_least(0);       // nu of 2nd Taylor coeff at x0
    std::optional<PadicScalar> root;
    long certified_prec = 0;  // f(root) certified == 0 mod p^certified_prec
    int iterations = 0;
    std::string reason;       // detail when inapplicable or not converged
};

/// Classify which branch applies at x0 without iterating.  The second
/// Taylor coefficient is read off an exact Taylor shift, so no division by 2
/// happens even at p = 2.  The variant branches additionally require the
/// polynomial to have integral coefficients.
LiftReport check_lift_hypotheses(const UniPoly& f, const PadicScalar& x0);

/// Check hypotheses at x0 and, when a branch applies, Newton-iterate to a
/// root certified to target_prec digits past the valuation of f' (classical)
/// or an exact zero.  ok == false with reason set when nothing applies or the
/// iteration stalls.
LiftReport lift_root(const UniPoly& f, const PadicScalar& x0,
                     long target_prec = kDefaultPrecision);

struct PointLift {
    bool ok = false;
    int coordinate = -1;           // coordinate moved along
    LiftReport line;               // report of the one-variable lift
    std::optional<VectorQp> point; // improved point when ok
    std::string reason;
};

/// Multivariate lift: choose the coordinate i whose partial derivative at v
/// has minimal valuation s; when nu(F(v)) > 2s, run the classical lift on
/// t -> F(v + t e_i).
PointLift lift_smooth_point(const Form& F, const VectorQp& v,
                            long target_prec = kDefaultPrecision);

} // namespace qpforms

#endif
