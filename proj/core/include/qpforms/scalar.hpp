#ifndef QPFORMS_SCALAR_HPP
#define QPFORMS_SCALAR_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qpforms/errors.hpp"

namespace qpforms {

/// Default number of tracked base-p digits.
inline constexpr int kDefaultPrecision = 64;

/// Certified-precision ceiling used for values that are zero by construction
/// (e.g. literals).  Saturating arithmetic keeps derived precisions below it.
inline constexpr long kZeroPrecCap = 1L << 40;

long sat_add(long a, long b);

/// Valuation of a scalar: either a known finite integer, or a lower bound
/// carried by a value that is indistinguishable from zero (finite() == false,
/// in which case bound() is the certified "at least" exponent).
class Valuation {
  public:
    static Valuation finite(long v) { return Valuation(v, true); }
    static Valuation at_least(long v) { return Valuation(v, false); }

    bool finite_known() const { return finite_; }
    long value() const {
        if (!finite_) throw IsZeroValue("valuation: value indistinguishable from zero (>= p^" + std::to_string(v_) + ")");
        return v_;
    }
    long bound() const { return v_; }  // finite value or certified lower bound

    bool operator==(const Valuation& o) const { return finite_ == o.finite_ && v_ == o.v_; }

  private:
    Valuation(long v, bool fin) : v_(v), finite_(fin) {}
    long v_;
    bool finite_;
};

std::ostream& operator<<(std::ostream&, const Valuation&);

/// A p-adic number tracked to a capped relative precision.
///
/// A regular (non-zero-marked) scalar represents p^val * unit with
/// unit in [1, p^k) coprime to p; the underlying value is known modulo
/// p^(val + k), i.e. to k certified base-p digits.  k never exceeds the
/// session precision it was created with and shrinks when additive
/// cancellation eats tracked digits; it never drops below 1 (a result that
/// would retain no certified digit becomes zero-marked instead).
///
/// A zero-marked scalar represents "congruent to 0 mod p^zero_prec": nothing
/// more is known about it, in particular not its exact valuation.
///
/// Scalars are immutable; all operations return new values.  Negative
/// valuations are allowed everywhere except residue extraction.
class PadicScalar {
  public:
    /// num/den as an element of Q_p tracked to `prec` digits.  den must be
    /// nonzero; num == 0 yields a zero-marked scalar at the precision cap.
    static PadicScalar from_rational(const mpz_class& num, const mpz_class& den,
                                     unsigned long p, int prec = kDefaultPrecision);
    static PadicScalar from_integer(long n, unsigned long p, int prec = kDefaultPrecision);

    /// Zero-marked scalar: certified congruent to 0 mod p^prec_exponent.
    static PadicScalar zero(unsigned long p, long prec_exponent = kZeroPrecCap);

    /// Exact components; val + unit must describe a unit coprime to p.
    static PadicScalar from_parts(long val, const mpz_class& unit, unsigned long p, int digits);

    unsigned long prime() const { return p_; }
    bool is_zero() const { return zero_; }
    /// Certified digits of relative precision (regular scalars only).
    int digits() const { return k_; }
    /// For zero-marked scalars: the exponent of the certifying modulus.
    long zero_precision() const;
    /// Finite valuation of a regular scalar; throws IsZeroValue when zero-marked.
    long val() const;
    /// Valuation with the zero marker folded in.
    Valuation valuation() const;
    /// Certified lower bound on the valuation (val, or zero_precision).
    long val_bound() const { return val_; }
    const mpz_class& unit() const { return unit_; }

    PadicScalar add(const PadicScalar& y) const;
    PadicScalar sub(const PadicScalar& y) const;
    PadicScalar mul(const PadicScalar& y) const;
    PadicScalar div(const PadicScalar& y) const;
    PadicScalar neg() const;
    PadicScalar invert() const;
    /// x * p^e (exact valuation shift).
    PadicScalar shift(long e) const;
    /// Non-negative integer power by repeated multiplication.
    PadicScalar pow(unsigned e) const;
    /// Multiply by a plain integer.
    PadicScalar mul_int(long n) const;

    /// Residue of the represented value in [0, p^k).  Requires val >= 0 and
    /// k within the certified modulus; throws NegativeValuation /
    /// PrecisionExhausted otherwise.
    mpz_class reduce_mod(int k) const;

    /// True when the value is certified congruent to 0 mod p^prec.
    bool vanishes_mod(long prec) const;
    /// True when nu(x) >= v is certified (exact valuation or zero marker).
    bool val_at_least(long v) const { return val_ >= v; }

    /// Token format: "v:u:k" for regular scalars, "z:prec" for zero-marked.
    std::string token() const;
    static PadicScalar parse_token(const std::string& tok, unsigned long p,
                                   int prec = kDefaultPrecision);

  private:
    PadicScalar(unsigned long p, int k, bool zero, long val, mpz_class unit)
        : p_(p), k_(k), zero_(zero), val_(val), unit_(std::move(unit)) {}

    unsigned long p_;
    int k_;        // tracked digits (regular scalars; >= 1)
    bool zero_;    // zero-marked?
    long val_;     // valuation, or certifying exponent when zero-marked
    mpz_class unit_;
};

/// p^e for small non-negative e.
mpz_class pow_p(unsigned long p, long e);

std::ostream& operator<<(std::ostream&, const PadicScalar&);

} // namespace qpforms

#endif
