#include "qpforms/scalar.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace qpforms {

long sat_add(long a, long b) {
    long s = a + b;
    return std::min(s, kZeroPrecCap);
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
    if (v.finite_known()) return os << v.bound();
    return os << ">=" << v.bound();
}

mpz_class pow_p(unsigned long p, long e) {
    if (e < 0) throw Error("pow_p: negative exponent");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
    return r;
}

namespace {

void check_prime(unsigned long p) {
    if (p < 2) throw Error("prime must be >= 2");
    mpz_class z(static_cast<unsigned long>(p));
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw Error("not a prime: " + std::to_string(p));
}

// Remove all factors p from z; returns the multiplicity.
long strip_p(mpz_class& z, unsigned long p) {
    mpz_class pp(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("no modular inverse");
    return r;
}

} // namespace

PadicScalar PadicScalar::zero(unsigned long p, long prec_exponent) {
    check_prime(p);
    return PadicScalar(p, 0, true, prec_exponent, mpz_class(0));
}

PadicScalar PadicScalar::from_parts(long val, const mpz_class& unit, unsigned long p, int digits) {
    check_prime(p);
    if (digits < 1) throw Error("from_parts: need at least one digit");
    mpz_class m = pow_p(p, digits);
    mpz_class u = mod_pos(unit, m);
    if (u == 0 || mpz_divisible_ui_p(u.get_mpz_t(), p))
        throw Error("from_parts: unit not coprime to p");
    return PadicScalar(p, digits, false, val, u);
}

PadicScalar PadicScalar::from_rational(const mpz_class& num, const mpz_class& den,
                                       unsigned long p, int prec) {
    check_prime(p);
    if (den == 0) throw DivisionByZero("from_rational: zero denominator");
    if (prec < 1) throw Error("from_rational: precision must be positive");
    if (num == 0) return zero(p);
    mpz_class n = num, d = den;
    long vn = strip_p(n, p);
    long vd = strip_p(d, p);
    mpz_class m = pow_p(p, prec);
    mpz_class u = mod_pos(n * inv_mod(mod_pos(d, m), m), m);
    return PadicScalar(p, prec, false, vn - vd, u);
}

PadicScalar PadicScalar::from_integer(long n, unsigned long p, int prec) {
    return from_rational(mpz_class(n), mpz_class(1), p, prec);
}

long PadicScalar::zero_precision() const {
    if (!zero_) throw Error("zero_precision: scalar is not zero-marked");
    return val_;
}

long PadicScalar::val() const {
    if (zero_) throw IsZeroValue("val: indistinguishable from zero (certified mod p^" + std::to_string(val_) + ")");
    return val_;
}

Valuation PadicScalar::valuation() const {
    return zero_ ? Valuation::at_least(val_) : Valuation::finite(val_);
}

PadicScalar PadicScalar::add(const PadicScalar& y) const {
    if (p_ != y.p_) throw Error("add: mixed primes");
    if (zero_ && y.zero_) return zero(p_, std::min(val_, y.val_));
    if (zero_ || y.zero_) {
        const PadicScalar& z = zero_ ? *this : y;   // zero-marked operand
        const PadicScalar& r = zero_ ? y : *this;   // regular operand
        long prec = z.val_;
        if (prec <= r.val_) return zero(p_, prec);  // noise can swallow r entirely
        int k = static_cast<int>(std::min<long>(r.k_, prec - r.val_));
        return PadicScalar(p_, k, false, r.val_, mod_pos(r.unit_, pow_p(p_, k)));
    }
    const PadicScalar& a = (val_ <= y.val_) ? *this : y;
    const PadicScalar& b = (val_ <= y.val_) ? y : *this;
    long shift = b.val_ - a.val_;
    // Both summands are known modulo p^(a.val + m).
    long m = std::min<long>(a.k_, shift + b.k_);
    mpz_class mod = pow_p(p_, m);
    mpz_class w = mod_pos(a.unit_ + b.unit_ * pow_p(p_, shift), mod);
    if (w == 0) return zero(p_, sat_add(a.val_, m));
    mpz_class u = w;
    long s = strip_p(u, p_);
    int k = static_cast<int>(m - s);
    return PadicScalar(p_, k, false, a.val_ + s, mod_pos(u, pow_p(p_, k)));
}

PadicScalar PadicScalar::neg() const {
    if (zero_) return *this;
    mpz_class m = pow_p(p_, k_);
    return PadicScalar(p_, k_, false, val_, mod_pos(m - unit_, m));
}

PadicScalar PadicScalar::sub(const PadicScalar& y) const { return add(y.neg()); }

PadicScalar PadicScalar::mul(const PadicScalar& y) const {
    if (p_ != y.p_) throw Error("mul: mixed primes");
    if (zero_ || y.zero_) {
        // x = 0 mod p^a times nu(y) = b gives 0 mod p^(a+b); the val_ field
        // is the right contribution in both the marked and the regular case.
        return zero(p_, sat_add(val_, y.val_));
    }
    int k = std::min(k_, y.k_);
    mpz_class m = pow_p(p_, k);
    return PadicScalar(p_, k, false, val_ + y.val_, mod_pos(unit_ * y.unit_, m));
}

PadicScalar PadicScalar::invert() const {
    if (zero_) throw DivisionByZero("invert: value indistinguishable from zero");
    mpz_class m = pow_p(p_, k_);
    return PadicScalar(p_, k_, false, -val_, inv_mod(unit_, m));
}

PadicScalar PadicScalar::div(const PadicScalar& y) const {
    if (y.zero_) throw DivisionByZero("div: divisor indistinguishable from zero");
    if (zero_) return zero(p_, sat_add(val_, -y.val_));
    return mul(y.invert());
}

PadicScalar PadicScalar::shift(long e) const {
    if (zero_) return zero(p_, sat_add(val_, e));
    return PadicScalar(p_, k_, false, val_ + e, unit_);
}

PadicScalar PadicScalar::pow(unsigned e) const {
    PadicScalar r = from_integer(1, p_, zero_ ? kDefaultPrecision : k_);
    for (unsigned i = 0; i < e; ++i) r = r.mul(*this);
    return r;
}

PadicScalar PadicScalar::mul_int(long n) const {
    return mul(from_integer(n, p_, zero_ ? kDefaultPrecision : k_));
}

mpz_class PadicScalar::reduce_mod(int k) const {
    if (k < 0) throw Error("reduce_mod: negative modulus exponent");
    if (zero_) {
        if (val_ < k)
            throw PrecisionExhausted("reduce_mod: zero certified only mod p^" + std::to_string(val_));
        return mpz_class(0);
    }
    if (val_ < 0) throw NegativeValuation("reduce_mod: valuation " + std::to_string(val_));
    if (k > val_ + k_)
        throw PrecisionExhausted("reduce_mod: tracked only mod p^" + std::to_string(val_ + k_));
    return mod_pos(unit_ * pow_p(p_, val_), pow_p(p_, k));
}

bool PadicScalar::vanishes_mod(long prec) const {
    // Certified lower bound on the valuation covers both representations.
    return val_ >= prec;
}

std::string PadicScalar::token() const {
    std::ostringstream os;
    if (zero_) {
        os << "z:" << val_;
    } else {
        os << val_ << ":" << unit_.get_str() << ":" << k_;
    }
    return os.str();
}

PadicScalar PadicScalar::parse_token(const std::string& tok, unsigned long p, int prec) {
    if (tok.empty()) throw ParseError("empty scalar token");
    auto c1 = tok.find(':');
    if (c1 == std::string::npos) {
        // plain integer literal
        try {
            mpz_class n(tok);
            return from_rational(n, 1, p, prec);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad integer token: " + tok);
        }
    }
    if (tok[0] == 'z') {
        try {
            return zero(p, std::stol(tok.substr(c1 + 1)));
        } catch (const std::exception&) {
            throw ParseError("bad zero token: " + tok);
        }
    }
    auto c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("bad scalar token: " + tok);
    try {
        long v = std::stol(tok.substr(0, c1));
        mpz_class u(tok.substr(c1 + 1, c2 - c1 - 1));
        int k = std::stoi(tok.substr(c2 + 1));
        return from_parts(v, u, p, k);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad scalar token: " + tok);
    }
}

std::ostream& operator<<(std::ostream& os, const PadicScalar& x) { return os << x.token(); }

} // namespace qpforms
