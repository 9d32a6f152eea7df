#pragma once
// Independent oracles for the test suites.
//
// Everything here avoids the library's scalar/form classes: plain unsigned
// 64-bit arithmetic for residue work and raw GMP integers/rationals for
// exact work, so expected values are computed through a second code path.

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 pow_u64(u64 b, u64 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

// Horner evaluation of an integer polynomial mod m (coefficients reduced).
inline u64 eval_poly_mod(const std::vector<long>& coeffs, u64 x, u64 m) {
    u64 acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) {
        acc = mul_mod(acc, x, m);
        long c = coeffs[i] % static_cast<long>(m);
        if (c < 0) c += static_cast<long>(m);
        acc = (acc + static_cast<u64>(c)) % m;
    }
    return acc;
}

// All residues r in [0, p^k) with f(r) == 0 mod p^k, exhaustively.
inline std::vector<u64> poly_roots_mod(const std::vector<long>& coeffs, u64 p, int k) {
    u64 q = pow_u64(p, static_cast<u64>(k));
    std::vector<u64> roots;
    for (u64 r = 0; r < q; ++r)
        if (eval_poly_mod(coeffs, r, q) == 0) roots.push_back(r);
    return roots;
}

// Exact valuation of a nonzero integer.
inline long vp(const mpz_class& n, unsigned long p) {
    mpz_class rem;
    return static_cast<long>(mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

// Exact valuation of a nonzero rational.
inline long vp(const mpq_class& r, unsigned long p) {
    return vp(r.get_num(), p) - vp(r.get_den(), p);
}

// Exact polynomial evaluation over the rationals.
inline mpq_class eval_poly_q(const std::vector<mpq_class>& coeffs, const mpq_class& x) {
    mpq_class acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

// A monomial term: coefficient and one exponent per variable.
struct Term {
    mpz_class coeff;
    std::vector<int> exps;
};

// Exact evaluation of a sparse integer form at a rational point.
inline mpq_class eval_form_q(const std::vector<Term>& terms,
                             const std::vector<mpq_class>& x) {
    mpq_class acc = 0;
    for (const Term& t : terms) {
        mpq_class m = t.coeff;
        for (size_t i = 0; i < t.exps.size(); ++i)
            for (int e = 0; e < t.exps[i]; ++e) m *= x[i];
        acc += m;
    }
    return acc;
}

// Rank of a rational matrix by fraction-free Gaussian elimination.
inline int rank_q(std::vector<std::vector<mpq_class>> m) {
    int rank = 0;
    size_t rows = m.size();
    if (rows == 0) return 0;
    size_t cols = m[0].size();
    for (size_t c = 0; c < cols && static_cast<size_t>(rank) < rows; ++c) {
        size_t pivot = rows;
        for (size_t r = static_cast<size_t>(rank); r < rows; ++r)
            if (m[r][c] != 0) { pivot = r; break; }
        if (pivot == rows) continue;
        std::swap(m[static_cast<size_t>(rank)], m[pivot]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == static_cast<size_t>(rank) || m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[static_cast<size_t>(rank)][c];
            for (size_t cc = c; cc < cols; ++cc)
                m[r][cc] -= f * m[static_cast<size_t>(rank)][cc];
        }
        ++rank;
    }
    return rank;
}

// Mirror of the bound recursion in plain integer arithmetic, for freezing
// expected chain values independently of the library.
struct ChainState {
    long r3, r2, r1;
};

inline ChainState step_generic(ChainState s) {
    return {s.r3 - 1, 6 * (s.r3 - 1) + s.r2, 9 * s.r3 + 6 * s.r2 + s.r1};
}
inline ChainState step_unit_cubes(ChainState s) {
    return {s.r3 - 1, 3 * s.r3 + s.r2, 3 * s.r3 + 3 * s.r2 + s.r1};
}
inline ChainState step_scaled_units(ChainState s) {
    return {s.r3 - 1, 3 * s.r3 + s.r2, 6 * s.r3 + 3 * s.r2 + s.r1};
}
inline long quad_base(long r2) {
    if (r2 == 0) return 0;
    if (r2 == 1) return 4;
    if (r2 == 2) return 8;
    if (r2 <= 5) return 2 * r2 * r2 + 2;
    return r2 % 2 == 0 ? 2 * r2 * r2 - 16 : 2 * r2 * r2 - 14;
}

// Deterministic RNG for property suites; fixed seeds keep runs reproducible.
inline std::mt19937_64 rng(u64 seed) { return std::mt19937_64(seed); }

} // namespace oracle
