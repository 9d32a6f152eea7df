#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "qpforms/form_io.hpp"
#include "qpforms/hensel.hpp"

using namespace qpforms;

namespace {

bool oracle_has_root(const std::vector<long>& coeffs, unsigned long p, int k,
                     oracle::u64 residue_mod_pk) {
    auto roots = oracle::poly_roots_mod(coeffs, p, k);
    return std::find(roots.begin(), roots.end(), residue_mod_pk) != roots.end();
}

} // namespace

TEST_CASE("branch classification: strict inequality on the derivative") {
    // f(1) = -16 (nu = 4), f'(1) = 2 (nu = 1): 4 > 2*1
    UniPoly f = UniPoly::from_ints({-17, 0, 1}, 2);
    LiftReport r = check_lift_hypotheses(f, PadicScalar::from_integer(1, 2));
    CHECK(r.branch == LiftBranch::classical);
    CHECK(r.val_f == Valuation::finite(4));
    CHECK(r.val_fprime == Valuation::finite(1));

    LiftReport lift = lift_root(f, PadicScalar::from_integer(1, 2), 32);
    REQUIRE(lift.ok);
    REQUIRE(lift.root.has_value());
    CHECK(lift.certified_prec >= 32);
    CHECK(f.eval(*lift.root).vanishes_mod(32));
    // independently: the residue is a genuine root of t^2 - 17 mod 2^8
    CHECK(oracle_has_root({-17, 0, 1}, 2, 8, lift.root->reduce_mod(8).get_ui()));
    // and it stayed in the residue class of the starting point
    CHECK(lift.root->reduce_mod(1) == 1);
}

TEST_CASE("branch classification: borderline with unit-scaled derivative") {
    // f = 2t^3 + 16 over Q_3 at x0 = 1: f(1) = 18 (nu = 2), f'(1) = 6 (nu = 1),
    // second Taylor coefficient 6 (nu = 1).  Exact root t = -2.
    UniPoly f = UniPoly::from_ints({16, 0, 0, 2}, 3);
    LiftReport r = check_lift_hypotheses(f, PadicScalar::from_integer(1, 3));
    CHECK(r.branch == LiftBranch::variant_strict);
    CHECK(r.val_f == Valuation::finite(2));
    CHECK(r.val_fprime == Valuation::finite(1));
    CHECK(r.val_f2 == Valuation::finite(1));

    LiftReport lift = lift_root(f, PadicScalar::from_integer(1, 3), 24);
    REQUIRE(lift.ok);
    REQUIRE(lift.root.has_value());
    CHECK(f.eval(*lift.root).vanishes_mod(24));
    // the exact root is -2: 3^8 - 2 = 6559
    CHECK(lift.root->reduce_mod(8) == 6559);
}

TEST_CASE("branch classification: borderline with doubled derivative valuation") {
    // f = t^4 + 15 over Q_2 at x0 = 1: f(1) = 16 (nu = 4), f'(1) = 4 (nu = 2),
    // second Taylor coefficient 6 (nu = 1).
    UniPoly f = UniPoly::from_ints({15, 0, 0, 0, 1}, 2);
    LiftReport r = check_lift_hypotheses(f, PadicScalar::from_integer(1, 2));
    CHECK(r.branch == LiftBranch::variant_equality);
    CHECK(r.val_f == Valuation::finite(4));
    CHECK(r.val_fprime == Valuation::finite(2));
    CHECK(r.val_f2 == Valuation::finite(1));

    LiftReport lift = lift_root(f, PadicScalar::from_integer(1, 2), 24);
    REQUIRE(lift.ok);
    REQUIRE(lift.root.has_value());
    CHECK(f.eval(*lift.root).vanishes_mod(24));
    CHECK(oracle_has_root({15, 0, 0, 0, 1}, 2, 8, lift.root->reduce_mod(8).get_ui()));
}

TEST_CASE("inapplicable: unit value at a unit derivative") {
    // f = t^3 + t + 1 at 0 over Q_2: f(0) = 1, no branch applies, and indeed
    // f has no root mod 2 at all.
    UniPoly f = UniPoly::from_ints({1, 1, 0, 1}, 2);
    LiftReport r = check_lift_hypotheses(f, PadicScalar::from_integer(0, 2));
    CHECK(r.branch == LiftBranch::inapplicable);
    CHECK(!r.reason.empty());
    LiftReport lift = lift_root(f, PadicScalar::from_integer(0, 2), 16);
    CHECK(!lift.ok);
    CHECK(oracle::poly_roots_mod({1, 1, 0, 1}, 2, 8).empty());
}

TEST_CASE("inapplicable: valuation pattern alone is not sufficient") {
    // f = t^2 + 2t + 4 at 0 over Q_2: nu(f) = 2 = 2 nu(f'), which matches the
    // borderline valuation pattern, but the second Taylor coefficient is a
    // unit -- and f genuinely has no 2-adic root.  A rule that skipped the
    // second-order condition would claim a root here.
    UniPoly f = UniPoly::from_ints({4, 2, 1}, 2);
    LiftReport r = check_lift_hypotheses(f, PadicScalar::from_integer(0, 2));
    CHECK(r.val_f == Valuation::finite(2));
    CHECK(r.val_fprime == Valuation::finite(1));
    CHECK(r.val_f2 == Valuation::finite(0));
    CHECK(r.branch == LiftBranch::inapplicable);
    LiftReport lift = lift_root(f, PadicScalar::from_integer(0, 2), 16);
    CHECK(!lift.ok);
    CHECK(oracle::poly_roots_mod({4, 2, 1}, 2, 10).empty());
}

TEST_CASE("lifting from an exact root returns a certified root") {
    UniPoly f = UniPoly::from_ints({16, 0, 0, 2}, 3);  // root -2
    PadicScalar root = PadicScalar::from_integer(-2, 3);
    LiftReport lift = lift_root(f, root, 20);
    REQUIRE(lift.ok);
    REQUIRE(lift.root.has_value());
    CHECK(f.eval(*lift.root).vanishes_mod(20));
    CHECK(lift.root->reduce_mod(4) == 81 - 2);
}

TEST_CASE("random polynomials: every applicable start lifts to an oracle-verified root") {
    // 150 random polynomials per prime, all starting residues mod p^2.
    // Whenever a branch is certified the lift must succeed, reach the target,
    // and land on a residue that exhaustive search confirms is a root.
    auto gen = oracle::rng(0x11f7);
    for (unsigned long p : {2ul, 3ul}) {
        long q8 = 1;
        for (int i = 0; i < 8; ++i) q8 *= static_cast<long>(p);
        std::uniform_int_distribution<long> cd(0, q8 - 1);
        std::uniform_int_distribution<int> dd(2, 6);
        int applicable = 0;
        for (int iter = 0; iter < 150; ++iter) {
            int deg = dd(gen);
            std::vector<long> cs(static_cast<size_t>(deg) + 1);
            for (auto& c : cs) c = cd(gen);
            if (cs.back() % static_cast<long>(p) == 0) cs.back() += 1;
            UniPoly f = UniPoly::from_ints(cs, p);
            for (long x0 = 0; x0 < static_cast<long>(p * p); ++x0) {
                PadicScalar start = PadicScalar::from_integer(x0, p);
                LiftReport cls = check_lift_hypotheses(f, start);
                if (cls.branch == LiftBranch::inapplicable) continue;
                ++applicable;
                LiftReport lift = lift_root(f, start, 16);
                REQUIRE_MESSAGE(lift.ok, "lift failed for " << f.tokens() << " at " << x0
                                                            << " p=" << p);
                REQUIRE(lift.root.has_value());
                CHECK(f.eval(*lift.root).vanishes_mod(16));
                // independent verification mod p^8
                oracle::u64 r8 = lift.root->reduce_mod(8).get_ui();
                oracle::u64 q = oracle::pow_u64(p, 8);
                CHECK(oracle::eval_poly_mod(cs, r8, q) == 0);
                // the root refines the starting residue
                CHECK(lift.root->reduce_mod(1) == x0 % static_cast<long>(p));
            }
        }
        CHECK(applicable > 50);  // the sample genuinely exercises the lift
    }
}

TEST_CASE("multivariate lift moves along the least-ramified coordinate") {
    Form F = parse_form(
        "p=2 n=3 d=2\n"
        "1 2 0 0\n"
        "1 0 2 0\n"
        "-1 0 0 2\n");

    SUBCASE("improvable point") {
        // F(3,4,1) = 24, gradient (6, 8, -2): minimal partial valuation 1 at
        // coordinate 0, and nu(F) = 3 > 2.
        VectorQp v = VectorQp::from_ints({3, 4, 1}, 2);
        PointLift pl = lift_smooth_point(F, v, 16);
        REQUIRE(pl.ok);
        CHECK(pl.coordinate == 0);
        CHECK(pl.line.branch == LiftBranch::smooth_point);
        REQUIRE(pl.point.has_value());
        CHECK(F.evaluate(*pl.point).vanishes_mod(16));
        // final first coordinate solves t^2 + 15 = 0
        CHECK(oracle_has_root({15, 0, 1}, 2, 8, (*pl.point)[0].reduce_mod(8).get_ui()));
        // untouched coordinates stay put
        CHECK((*pl.point)[1].reduce_mod(8) == 4);
        CHECK((*pl.point)[2].reduce_mod(8) == 1);
        // the move is a refinement: same residue mod 4
        CHECK((*pl.point)[0].reduce_mod(2) == 3);
    }

    SUBCASE("point that is already an exact zero") {
        VectorQp v = VectorQp::from_ints({3, 4, 5}, 2);
        PointLift pl = lift_smooth_point(F, v, 16);
        REQUIRE(pl.ok);
        REQUIRE(pl.point.has_value());
        CHECK(F.evaluate(*pl.point).vanishes_mod(16));
    }

    SUBCASE("no applicable coordinate") {
        VectorQp v = VectorQp::from_ints({1, 1, 1}, 2);
        PointLift pl = lift_smooth_point(F, v, 16);
        CHECK(!pl.ok);
        CHECK(!pl.reason.empty());
    }
}
