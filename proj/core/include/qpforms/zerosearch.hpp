#ifndef QPFORMS_ZEROSEARCH_HPP
#define QPFORMS_ZEROSEARCH_HPP

#include <optional>
#include <vector>

#include "qpforms/form.hpp"
#include "qpforms/hensel.hpp"
#include "qpforms/vector_qp.hpp"

namespace qpforms {

struct SearchBudget {
    int k = 1;                 // residue modulus exponent: scan mod p^k
    long max_candidates = -1;  // primitive candidates to examine; < 0 = all
    int parallel_width = 1;    // worker threads over first-coordinate strata
    long target_prec = kDefaultPrecision;  // certification target for lifts
};

enum class SearchOutcome {
    zero_found,             // certified zero produced (residue hit + lift)
    exhausted_no_liftable,  // every primitive residue vector examined, none lifted
    budget_exhausted,       // candidate budget ran out first
};

const char* to_string(SearchOutcome o);

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::exhausted_no_liftable;
    long examined = 0;            // primitive candidates evaluated
    long residue_zero_count = 0;  // candidates with F == 0 mod p^k seen
    std::optional<std::vector<unsigned long>> residue_witness;  // the hit mod p^k
    PointLift lift;               // certification of the returned witness
    std::optional<VectorQp> witness;
};

/// Scan primitive vectors of [0, p^k)^n in lexicographic order for
/// F == 0 mod p^k and try to certify each hit as an exact zero (either the
/// value is already certified zero or a smooth-point lift succeeds).  The
/// witness is the lex-least certifiable hit.  Coefficients must have
/// non-negative valuation; p^k must fit well below 2^63.
SearchResult find_zero(const Form& F, const SearchBudget& budget);

/// All primitive residue vectors v mod p^k with F(v) == 0 mod p^k, in
/// lexicographic order, capped at max_count when >= 0.
std::vector<std::vector<unsigned long>> residue_zeros(const Form& F, int k,
                                                      long max_count = -1);

/// Primitive residue vectors mod p^k annihilating every constraint form
/// simultaneously (mod p^k), in lexicographic order, capped at max_count
/// when >= 0.  n and p are passed explicitly so the constraint list may be
/// empty (then every primitive vector qualifies).  Constraints with
/// negative-valuation coefficients are shifted to integrality first: this
/// relaxes "== 0" to a residue necessary condition, which is what a caller
/// doing exact verification afterwards wants.
std::vector<std::vector<unsigned long>> residue_common_zeros(
    unsigned long p, int n, const std::vector<Form>& constraints, int k,
    long max_count = -1);

struct AnisotropyReport {
    bool primitive_zero_exists = false;
    std::optional<std::vector<unsigned long>> witness;  // mod p^k, when one exists
    std::vector<std::vector<int>> blocks;               // variable support blocks
    long enumerated = 0;                                // block tuples evaluated
};

/// Decide whether F has a primitive zero mod p^k.  F is split into blocks of
/// variables with disjoint term support; each block's value set mod p^k is
/// enumerated once, then a reachability sweep over states
/// (partial sum mod p^k, some-block-primitive flag) decides existence and
/// reconstructs a witness.  Exponentially cheaper than a direct scan when the
/// form decomposes; refuses block enumerations past ~2^26 tuples.
AnisotropyReport anisotropy_witness(const Form& F, int k);

} // namespace qpforms

#endif
