#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qpforms/form_io.hpp"
#include "qpforms/zerosearch.hpp"

using namespace qpforms;

namespace {

struct IntTerm {
    long c;
    Monomial mono;
};

Form build_form(unsigned long p, int nvars, int degree, const std::vector<IntTerm>& ts) {
    Form f(p, kDefaultPrecision, nvars, degree);
    for (const auto& t : ts) f.add_term_int(t.mono, t.c);
    return f;
}

oracle::u64 eval_terms_mod(const std::vector<IntTerm>& ts,
                           const std::vector<unsigned long>& x, oracle::u64 q) {
    oracle::u64 acc = 0;
    for (const auto& t : ts) {
        long cm = t.c % static_cast<long>(q);
        if (cm < 0) cm += static_cast<long>(q);
        oracle::u64 v = static_cast<oracle::u64>(cm);
        for (size_t j = 0; j < t.mono.size(); ++j)
            for (int e = 0; e < t.mono[j]; ++e) v = oracle::mul_mod(v, x[j], q);
        acc = (acc + v) % q;
    }
    return acc;
}

// Exhaustive reference list of primitive residue zeros, lexicographic.
std::vector<std::vector<unsigned long>> brute_zeros(const std::vector<IntTerm>& ts,
                                                    unsigned long p, int nvars, int k) {
    oracle::u64 q = oracle::pow_u64(p, static_cast<oracle::u64>(k));
    std::vector<std::vector<unsigned long>> out;
    std::vector<unsigned long> x(static_cast<size_t>(nvars), 0);
    while (true) {
        bool prim = false;
        for (unsigned long v : x) prim = prim || (v % p != 0);
        if (prim && eval_terms_mod(ts, x, q) == 0) out.push_back(x);
        size_t i = x.size();
        while (i-- > 0) {
            if (++x[i] < q) break;
            x[i] = 0;
            if (i == 0) return out;
        }
    }
}

std::vector<IntTerm> random_terms(std::mt19937_64& gen, int nvars, int degree, int nterms) {
    std::uniform_int_distribution<long> coeff(-9, 9);
    std::uniform_int_distribution<int> var(0, nvars - 1);
    std::vector<IntTerm> ts;
    for (int t = 0; t < nterms; ++t) {
        long c = coeff(gen);
        if (c == 0) continue;
        Monomial m(static_cast<size_t>(nvars), 0);
        for (int i = 0; i < degree; ++i) ++m[static_cast<size_t>(var(gen))];
        ts.push_back({c, m});
    }
    return ts;
}

} // namespace

TEST_CASE("residue zero enumeration matches exhaustive search (60 random forms)") {
    auto gen = oracle::rng(0x2e51d);
    for (int iter = 0; iter < 60; ++iter) {
        unsigned long p = (gen() % 2) ? 2ul : 3ul;
        int nvars = 2 + static_cast<int>(gen() % 2);
        int degree = 2 + static_cast<int>(gen() % 2);
        int k = (p == 2) ? 2 + static_cast<int>(gen() % 2) : 2;
        auto ts = random_terms(gen, nvars, degree, 5);
        if (ts.empty()) continue;
        Form f = build_form(p, nvars, degree, ts);
        CHECK(residue_zeros(f, k) == brute_zeros(ts, p, nvars, k));
    }
}

TEST_CASE("residue zero enumeration respects the cap") {
    // x^2 - y^2 mod 4 has many primitive zeros; ask for just three.
    Form f = build_form(2, 2, 2, {{1, {2, 0}}, {-1, {0, 2}}});
    auto all = residue_zeros(f, 2);
    auto capped = residue_zeros(f, 2, 3);
    REQUIRE(all.size() > 3);
    REQUIRE(capped.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(capped[i] == all[i]);
}

TEST_CASE("search certifies the lex-least liftable residue hit") {
    // x^2 + y^2 - z^2: the first primitive residue zero mod 8 is (0,1,1),
    // which is an exact zero of the form itself.
    Form f = parse_form(
        "p=2 n=3 d=2\n"
        "1 2 0 0\n"
        "1 0 2 0\n"
        "-1 0 0 2\n");
    SearchBudget b;
    b.k = 3;
    b.target_prec = 16;
    SearchResult r = find_zero(f, b);
    CHECK(r.outcome == SearchOutcome::zero_found);
    REQUIRE(r.residue_witness.has_value());
    CHECK(*r.residue_witness == std::vector<unsigned long>{0, 1, 1});
    REQUIRE(r.witness.has_value());
    CHECK(f.evaluate(*r.witness).vanishes_mod(16));
    CHECK(r.lift.ok);
    // the witness reduces to the residue hit
    CHECK((*r.witness)[0].vanishes_mod(3));
    CHECK((*r.witness)[1].reduce_mod(3) == 1);
    CHECK((*r.witness)[2].reduce_mod(3) == 1);
}

TEST_CASE("exhaustion is reported with full coverage counts") {
    SUBCASE("sum of two squares over Q_3") {
        // -1 is not a square mod 3, so x^2 + y^2 has no primitive residue
        // zero mod 9 at all.
        Form f = build_form(3, 2, 2, {{1, {2, 0}}, {1, {0, 2}}});
        CHECK(brute_zeros({{1, {2, 0}}, {1, {0, 2}}}, 3, 2, 2).empty());
        SearchBudget b;
        b.k = 2;
        SearchResult r = find_zero(f, b);
        CHECK(r.outcome == SearchOutcome::exhausted_no_liftable);
        CHECK(r.residue_zero_count == 0);
        CHECK(!r.witness.has_value());
        CHECK(r.examined == 81 - 9);  // all primitive residue vectors mod 9
    }
    SUBCASE("three cubes with doubling weights over Q_2") {
        // x^3 + 2y^3 + 4z^3 == 0 mod 8 forces x, then y, then z even.
        std::vector<IntTerm> ts{{1, {3, 0, 0}}, {2, {0, 3, 0}}, {4, {0, 0, 3}}};
        CHECK(brute_zeros(ts, 2, 3, 3).empty());
        Form f = build_form(2, 3, 3, ts);
        SearchBudget b;
        b.k = 3;
        SearchResult r = find_zero(f, b);
        CHECK(r.outcome == SearchOutcome::exhausted_no_liftable);
        CHECK(r.residue_zero_count == 0);
        CHECK(r.examined == 512 - 64);
    }
}

TEST_CASE("candidate budget cuts the scan short") {
    Form f = build_form(3, 2, 2, {{1, {2, 0}}, {1, {0, 2}}});
    SearchBudget b;
    b.k = 2;
    b.max_candidates = 10;
    SearchResult r = find_zero(f, b);
    CHECK(r.outcome == SearchOutcome::budget_exhausted);
    CHECK(r.examined == 10);
}

TEST_CASE("scan refuses moduli beyond machine words and fractional coefficients") {
    Form f = build_form(2, 2, 2, {{1, {2, 0}}, {1, {0, 2}}});
    SearchBudget b;
    b.k = 63;
    CHECK_THROWS_AS(find_zero(f, b), RefusedTooLarge);

    Form g(2, kDefaultPrecision, 2, 2);
    g.add_term(Monomial{2, 0}, PadicScalar::from_rational(1, 2, 2));
    g.add_term_int(Monomial{0, 2}, 1);
    SearchBudget b2;
    b2.k = 2;
    CHECK_THROWS_AS(find_zero(g, b2), NegativeValuation);
}

TEST_CASE("common residue zeros of a constraint system match brute force") {
    auto gen = oracle::rng(0xc0115);
    for (int iter = 0; iter < 40; ++iter) {
        unsigned long p = (gen() % 2) ? 2ul : 3ul;
        int nvars = 3;
        int k = 2;
        auto ts1 = random_terms(gen, nvars, 2, 4);
        auto ts2 = random_terms(gen, nvars, 2, 4);
        if (ts1.empty() || ts2.empty()) continue;
        std::vector<Form> cs{build_form(p, nvars, 2, ts1), build_form(p, nvars, 2, ts2)};
        auto got = residue_common_zeros(p, nvars, cs, k);

        oracle::u64 q = oracle::pow_u64(p, static_cast<oracle::u64>(k));
        std::vector<std::vector<unsigned long>> want;
        for (const auto& x : brute_zeros(ts1, p, nvars, k))
            if (eval_terms_mod(ts2, x, q) == 0) want.push_back(x);
        CHECK(got == want);
    }
}

TEST_CASE("empty constraint system yields every primitive residue vector") {
    auto all = residue_common_zeros(2, 3, {}, 2);
    CHECK(all.size() == 64 - 8);
    CHECK(all.front() == std::vector<unsigned long>{0, 0, 1});
    // capped variant
    CHECK(residue_common_zeros(2, 3, {}, 2, 5).size() == 5);
}

TEST_CASE("block-decomposed existence agrees with the direct scan (40 random forms)") {
    auto gen = oracle::rng(0xb10c);
    for (int iter = 0; iter < 40; ++iter) {
        unsigned long p = (gen() % 2) ? 2ul : 3ul;
        int nvars = 3;
        int degree = 2 + static_cast<int>(gen() % 2);
        auto ts = random_terms(gen, nvars, degree, 4);
        if (ts.empty()) continue;
        Form f = build_form(p, nvars, degree, ts);
        AnisotropyReport rep = anisotropy_witness(f, 2);
        bool direct = !residue_zeros(f, 2, 1).empty();
        CHECK(rep.primitive_zero_exists == direct);
        if (rep.primitive_zero_exists) {
            REQUIRE(rep.witness.has_value());
            // verify the reconstructed witness is a primitive residue zero
            oracle::u64 q = oracle::pow_u64(p, 2);
            CHECK(eval_terms_mod(ts, *rep.witness, q) == 0);
            bool prim = false;
            for (unsigned long v : *rep.witness) prim = prim || (v % p != 0);
            CHECK(prim);
        }
    }
}

TEST_CASE("parallel strata produce the same verdict and witness") {
    Form f = parse_form(
        "p=2 n=3 d=2\n"
        "1 2 0 0\n"
        "1 0 2 0\n"
        "-1 0 0 2\n");
    SearchBudget b1;
    b1.k = 3;
    SearchBudget b4 = b1;
    b4.parallel_width = 4;
    SearchResult r1 = find_zero(f, b1);
    SearchResult r4 = find_zero(f, b4);
    CHECK(r1.outcome == r4.outcome);
    REQUIRE(r1.residue_witness.has_value());
    REQUIRE(r4.residue_witness.has_value());
    CHECK(*r1.residue_witness == *r4.residue_witness);
    REQUIRE(r1.witness.has_value());
    REQUIRE(r4.witness.has_value());
    CHECK(r1.witness->tokens() == r4.witness->tokens());

    // widths also agree on a sound refusal
    Form g = build_form(3, 2, 2, {{1, {2, 0}}, {1, {0, 2}}});
    SearchBudget c1;
    c1.k = 2;
    SearchBudget c4 = c1;
    c4.parallel_width = 4;
    CHECK(find_zero(g, c1).outcome == SearchOutcome::exhausted_no_liftable);
    CHECK(find_zero(g, c4).outcome == SearchOutcome::exhausted_no_liftable);
}
