#pragma once
// Bound recursion for systems of forms graded by degree.
//
// A state (r3, r2, r1) counts cubic, quadratic and linear forms in a system
// over the p-adic numbers.  V(r3, r2, r1; p) is the least number of
// variables guaranteeing a common nontrivial zero.  Reduction rules trade
// one cubic form for a batch of quadratic and linear conditions; once no
// cubics remain, a base table bounds the quadratic-linear system directly.
// best_bound explores every admissible rule chain exhaustively and returns
// the minimising chain as a replayable certificate.

#include <string>
#include <vector>

#include "qpforms/errors.hpp"

namespace qpforms {

// Residue classes of primes a rule chain can be valid for.  any_p takes the
// worst case over the four concrete classes.
enum class PrimeClass { p2, p3, p1mod3, p2mod3, any_p };

const char* to_string(PrimeClass c);
PrimeClass parse_prime_class(const std::string& s);  // throws ParseError

struct BoundState {
    long r3 = 0;
    long r2 = 0;
    long r1 = 0;
    bool operator==(const BoundState&) const = default;
};

// How a single cubic form is eliminated:
//  - cubic_generic:      valid for every p != 3; one cubic becomes six
//                        quadratics per remaining cubic plus linear slack.
//  - cubic_unit_cubes:   valid for p = 2 mod 3, where cubing permutes the
//                        units; cheaper quadratic growth.
//  - cubic_scaled_units: the p = 3 variant with a larger linear slack.
enum class RuleKind { cubic_generic, cubic_unit_cubes, cubic_scaled_units };

const char* to_string(RuleKind k);
RuleKind parse_rule_kind(const std::string& s);  // throws ParseError

// Rules admissible for a prime class (empty for any_p, which aggregates).
std::vector<RuleKind> rules_for_class(PrimeClass c);

// Applies one reduction step.  Throws NotApplicable when s.r3 < 1.
BoundState apply_rule(RuleKind k, const BoundState& s);

// Base bounds for a system of r2 quadratic forms (no cubics).  Small counts
// are exact; mid-range counts use a conservative filler row flagged
// "fallback"; large counts follow the quadratic table.  Rows can be
// overridden to experiment with sharper inputs.
class BaseTable {
  public:
    static BaseTable standard();
    long bound(long r2) const;          // throws Error on negative input
    std::string source(long r2) const;  // "small" | "fallback" | "table" | "override"
    void set(long r2, long bound);

  private:
    std::vector<std::pair<long, long>> overrides_;
};

struct CertificateStep {
    RuleKind rule;
    BoundState before;
    BoundState after;
};

// A replayable record of one rule chain and the bound it certifies.
struct Certificate {
    PrimeClass cls = PrimeClass::p2;          // class the bound is stated for
    PrimeClass chain_class = PrimeClass::p2;  // class whose rules the chain uses
    BoundState start;
    std::vector<CertificateStep> steps;
    long base_r2 = 0;     // quadratic count at the terminal state
    long base_bound = 0;  // base-table bound used there
    long linear_r1 = 0;   // linear count at the terminal state
    long bound = 0;       // base_bound + linear_r1

    std::string to_json() const;
    static Certificate from_json(const std::string& text);  // throws ParseError

    // Re-applies every step, re-derives the terminal bound from the table,
    // and (for any_p) re-checks the worst case over the concrete classes.
    bool replay(const BaseTable& table = BaseTable::standard()) const;
};

struct BoundQuery {
    BoundState state;
    PrimeClass cls = PrimeClass::p2;
    // Optional restriction of the admissible rule set (must be a subset of
    // rules_for_class(cls)); useful for comparing specific chains.
    std::vector<RuleKind> restrict_rules;
    long r3_guard = 8;  // exhaustive search refuses beyond this many cubics
};

// Minimal bound over all admissible rule chains, with the lexicographically
// first minimising chain (in RuleKind declaration order).  Throws
// RefusedTooLarge beyond the guard and NoRuleAvailable when cubics remain
// but the class admits no rule.
Certificate best_bound(const BoundQuery& q, const BaseTable& table = BaseTable::standard());

} // namespace qpforms
