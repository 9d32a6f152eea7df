#ifndef QPFORMS_CONSTRUCT_HPP
#define QPFORMS_CONSTRUCT_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qpforms/form.hpp"
#include "qpforms/hensel.hpp"
#include "qpforms/vector_qp.hpp"

namespace qpforms {

/// nu(F(e)) mod deg F.  Throws IsZeroValue when F(e) is indistinguishable
/// from zero: the level is undefined, and e already is a zero of F.
long level(const Form& F, const VectorQp& e);

/// A collected direction together with its exactly-known value.  Drivers
/// keep vectors rescaled by powers of p so that nu(value) = level lies in
/// [0, deg F).
struct LevelVector {
    VectorQp vec;
    PadicScalar value;
    long level = 0;
};

using LevelBasis = std::vector<LevelVector>;

/// e_s + e_t for two vectors whose values share the same exact valuation r.
/// Returns the combination only when nu(F(e_s + e_t)) is exactly r + 1,
/// i.e. the two leading units cancel one digit and no further; throws
/// ConditionFailed otherwise (including when the sum value is
/// indistinguishable from zero -- the caller should celebrate that case
/// before asking for a merge).
VectorQp merge_same_level(const Form& F, const VectorQp& es, const VectorQp& et);

/// Independence certificate by expansion: true when F(e) is certified
/// non-zero and every degree-one slot (coefficient of t^1) of the expansion
/// F(sum x_i basis_i + t e) vanishes; the set {basis..., e} is then linearly
/// independent.  false is inconclusive, never a dependence certificate.
bool independent_by_expansion(const Form& F, const std::vector<VectorQp>& basis,
                              const VectorQp& e);

struct ExtensionBudget {
    int k = 1;                      // scan candidate vectors mod p^k
    long max_candidates = 65536;    // cap on scanned residue vectors
    bool prefer_max_level = false;  // exhaust the scan, return max-level candidate
    long target_prec = kDefaultPrecision;  // certification target for lifts
};

/// Choose a direction e, linearly independent of `basis`, such that the
/// expansion of F along e over `basis` retains only the cross slots listed
/// in `keep` (every other cross slot vanishes exactly) and every form of G
/// vanishes identically on span(basis, e).  Candidates come from a residue
/// scan of the symbolic slot forms; each is then verified exactly.  With
/// prefer_max_level the whole scan runs and a candidate of maximal level
/// wins; a candidate whose value is indistinguishable from zero wins
/// outright (the caller has found a zero of F).  Throws OracleExhausted when
/// no candidate survives at this scan precision.
VectorQp extend_clean_vector(const Form& F, const std::vector<Form>& G,
                             const std::vector<VectorQp>& basis,
                             const std::set<SlotKey>& keep,
                             const ExtensionBudget& budget = {});

enum class ConstructStatus { zero, stuck };

const char* to_string(ConstructStatus s);

struct ConstructResult {
    ConstructStatus status = ConstructStatus::stuck;
    std::optional<VectorQp> witness;   // primitive, re-verified on the input form
    std::optional<PadicScalar> value;  // F(witness), certified zero-marked
    LiftReport lift;                   // certifying one-variable lift, when one ran
    std::vector<std::string> trace;    // move log, one label per step
    std::string stuck_reason;          // set when status == stuck
    LevelBasis pool;                   // final working set of directions
};

/// Zero search for a quartic form over Q_2 by the level/diagonalisation
/// procedure: collect pairwise-clean directions, normalise their levels,
/// merge same-level pairs one level up, and fire a terminal Hensel
/// configuration -- four distinct levels plus a fifth vector, the
/// cross-coefficient case analysis on a same-level pair, or a smooth residue
/// point.  Sound, not complete: every zero outcome is certified by exact
/// re-evaluation of the input form at the witness, and a stuck outcome
/// reports which rule failed to apply.
ConstructResult quartic_zero_q2(const Form& F, const ExtensionBudget& budget = {});

/// One descent step for a cubic over Q_p with p = 2 mod 3: collect diagonal
/// directions annihilating the auxiliary system G until two share a level,
/// then solve the unit congruence on their joining line (cubing permutes the
/// units mod p) and lift.  Throws InvalidPrime unless p = 2 mod 3.
ConstructResult cubic_step_p2mod3(const Form& C, const std::vector<Form>& G = {},
                                  const ExtensionBudget& budget = {});

/// One descent step for a cubic over Q_3: collect up to four diagonal
/// directions; a same-level pair either lifts on its joining line or merges
/// one level up; the (r, r, r+1) level configuration closes via the scaled
/// unit construction on three vectors.  Throws InvalidPrime unless p = 3.
ConstructResult cubic_step_p3(const Form& C, const std::vector<Form>& G = {},
                              const ExtensionBudget& budget = {});

} // namespace qpforms

#endif
