#include "qpforms/hensel.hpp"

#include <algorithm>
#include <sstream>

namespace qpforms {

const char* to_string(LiftBranch b) {
    switch (b) {
        case LiftBranch::classical: return "classical";
        case LiftBranch::variant_strict: return "variant-strict";
        case LiftBranch::variant_equality: return "variant-equality";
        case LiftBranch::smooth_point: return "smooth-point";
        case LiftBranch::inapplicable: return "inapplicable";
    }
    return "?";
}

namespace {

// Newton iteration from x under an already certified classical hypothesis.
// Runs until f(x) is certified zero (accepting the reachable precision when
// the working precision caps out before `target` digits).
void newton(const UniPoly& f, PadicScalar x, long target, LiftReport& rep) {
    UniPoly fd = f.derivative();
    for (int it = 0; it < 200; ++it) {
        PadicScalar fx = f.eval(x);
        if (fx.is_zero()) {
            long got = fx.zero_precision();
            rep.ok = true;
            rep.root = x;
            rep.certified_prec = got;
            rep.iterations = it;
            if (got < target) rep.reason = "precision-capped";
            return;
        }
        PadicScalar fpx = fd.eval(x);
        if (fpx.is_zero()) {
            rep.ok = false;
            rep.reason = "derivative indistinguishable from zero during iteration";
            return;
        }
        x = x.sub(fx.div(fpx));
    }
    rep.ok = false;
    rep.reason = "no convergence in 200 iterations";
}

} // namespace

LiftReport check_lift_hypotheses(const UniPoly& f, const PadicScalar& x0) {
    LiftReport rep;
    if (f.nominal_degree() < 1) {
        rep.reason = "constant polynomial";
        return rep;
    }
    UniPoly g = f.taylor_shift(x0);  // g(u) = f(x0 + u)
    const PadicScalar& g0 = g.coeff(0);
    const PadicScalar& g1 = g.coeff(1);
    PadicScalar g2 = g.nominal_degree() >= 2 ? g.coeff(2) : PadicScalar::zero(f.prime());
    rep.val_f = g0.valuation();
    rep.val_fprime = g1.valuation();
    rep.val_f2 = g2.valuation();

    if (g1.is_zero()) {
        rep.reason = "derivative valuation not certified";
        return rep;
    }
    long m = g1.val();
    if (g0.val_bound() > 2 * m) {  // covers zero-marked g0 certified past 2m
        rep.branch = LiftBranch::classical;
        rep.ok = true;
        return rep;
    }
    if (!g0.is_zero() && m >= 1 && g0.val() == 2 * m) {
        if (!g2.val_at_least(1)) {
            std::ostringstream os;
            os << "second Taylor coefficient is a unit (nu=" << g2.valuation()
               << "): equal-valuation branch not certified";
            rep.reason = os.str();
            return rep;
        }
        if (f.min_coeff_val() < 0) {
            rep.reason = "polynomial has coefficients of negative valuation";
            return rep;
        }
        rep.branch = m == 1 ? LiftBranch::variant_strict : LiftBranch::variant_equality;
        rep.ok = true;
        return rep;
    }
    std::ostringstream os;
    os << "nu(f)=" << rep.val_f << " nu(f')=" << rep.val_fprime
       << ": neither nu(f) > 2 nu(f') nor the equal-valuation hypotheses hold";
    rep.reason = os.str();
    return rep;
}

LiftReport lift_root(const UniPoly& f, const PadicScalar& x0, long target_prec) {
    LiftReport rep = check_lift_hypotheses(f, x0);
    if (!rep.ok) return rep;
    rep.ok = false;

    if (rep.branch == LiftBranch::classical) {
        newton(f, x0, target_prec, rep);
        return rep;
    }

    // Equal-valuation branch: with m = nu(f'(x0)), substitute t = x0 + p^m u
    // and divide by p^(2m).  The result h has unit h(0) and h'(0), and
    // h == h0 + h1 u (mod p), so the unique starting residue is -h0/h1 mod p.
    long m = rep.val_fprime.value();
    UniPoly g = f.taylor_shift(x0);
    UniPoly h = g.compress(m).scale(-2 * m);
    mpz_class r = h.coeff(0).div(h.coeff(1)).neg().reduce_mod(1);
    int digits = static_cast<int>(std::clamp<long>(target_prec, kDefaultPrecision, 1 << 20));
    PadicScalar u0 = PadicScalar::from_integer(r.get_si(), f.prime(), digits);

    LiftReport sub;
    newton(h, u0, std::max<long>(1, target_prec - 2 * m), sub);
    rep.iterations = sub.iterations;
    if (!sub.ok) {
        rep.reason = sub.reason;
        return rep;
    }
    PadicScalar root = x0.add(sub.root->shift(m));
    PadicScalar residual = f.eval(root);
    if (!residual.is_zero()) {
        rep.reason = "residual at lifted root not certified zero";
        return rep;
    }
    rep.ok = true;
    rep.root = root;
    rep.certified_prec = residual.zero_precision();
    if (rep.certified_prec < target_prec) rep.reason = "precision-capped";
    return rep;
}

PointLift lift_smooth_point(const Form& F, const VectorQp& v, long target_prec) {
    PointLift out;
    if (v.size() != F.nvars()) {
        out.reason = "point arity does not match the form";
        return out;
    }
    VectorQp grad = F.gradient(v);
    int best = -1;
    long bestval = 0;
    for (int i = 0; i < v.size(); ++i) {
        if (grad[i].is_zero()) continue;
        long w = grad[i].val();
        if (best < 0 || w < bestval) {
            best = i;
            bestval = w;
        }
    }
    if (best < 0) {
        out.reason = "gradient indistinguishable from zero";
        return out;
    }
    PadicScalar Fv = F.evaluate(v);
    if (!Fv.val_at_least(2 * bestval + 1)) {
        std::ostringstream os;
        os << "nu(F(v))=" << Fv.valuation() << " not above 2*nu(dF)=" << 2 * bestval;
        out.reason = os.str();
        return out;
    }
    std::vector<long> unit(static_cast<size_t>(F.nvars()), 0);
    unit[static_cast<size_t>(best)] = 1;
    VectorQp dir = VectorQp::from_ints(unit, F.prime(), F.precision());
    UniPoly f = UniPoly::from_form_line(F, v, dir);
    LiftReport rep = lift_root(f, PadicScalar::zero(F.prime()), target_prec);
    out.coordinate = best;
    out.line = rep;
    if (!rep.ok) {
        out.reason = rep.reason;
        return out;
    }
    out.line.branch = LiftBranch::smooth_point;
    out.ok = true;
    out.point = v.add(dir.scale(*rep.root));
    return out;
}

} // namespace qpforms
