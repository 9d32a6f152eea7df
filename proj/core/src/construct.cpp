#include "qpforms/construct.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "qpforms/errors.hpp"
#include "qpforms/unipoly.hpp"
#include "qpforms/zerosearch.hpp"

namespace qpforms {

const char* to_string(ConstructStatus s) {
    switch (s) {
        case ConstructStatus::zero: return "zero";
        case ConstructStatus::stuck: return "stuck";
    }
    return "?";
}

long level(const Form& F, const VectorQp& e) {
    PadicScalar v = F.evaluate(e);
    if (v.is_zero())
        throw IsZeroValue("level: value indistinguishable from zero (e is a zero of F)");
    long d = F.degree();
    long r = v.val() % d;
    return r < 0 ? r + d : r;
}

VectorQp merge_same_level(const Form& F, const VectorQp& es, const VectorQp& et) {
    PadicScalar vs = F.evaluate(es);
    PadicScalar vt = F.evaluate(et);
    if (vs.is_zero() || vt.is_zero())
        throw ConditionFailed("merge: an input value is indistinguishable from zero");
    if (vs.val() != vt.val())
        throw ConditionFailed("merge: values not at a common exact valuation");
    long r = vs.val();
    VectorQp sum = es.add(et);
    PadicScalar v = F.evaluate(sum);
    if (v.is_zero())
        throw ConditionFailed(
            "merge: sum value indistinguishable from zero (a zero of F, not a merge)");
    if (v.val() != r + 1)
        throw ConditionFailed("merge: nu(F(e_s + e_t)) = " + std::to_string(v.val()) +
                              ", need exactly " + std::to_string(r + 1));
    return sum;
}

bool independent_by_expansion(const Form& F, const std::vector<VectorQp>& basis,
                              const VectorQp& e) {
    PadicScalar v = F.evaluate(e);
    if (v.is_zero()) return false;
    Expansion ex = directional_expand(F, basis, e);
    for (const auto& [key, c] : ex.slots)
        if (key.second == 1 && !c.is_zero()) return false;
    return true;
}

VectorQp extend_clean_vector(const Form& F, const std::vector<Form>& G,
                             const std::vector<VectorQp>& basis,
                             const std::set<SlotKey>& keep,
                             const ExtensionBudget& budget) {
    const unsigned long p = F.prime();
    const int n = F.nvars();
    const int digits =
        static_cast<int>(std::clamp<long>(budget.target_prec, kDefaultPrecision, 1 << 20));

    // Constraint slot forms: every cross slot of F (0 < j < deg F) not kept,
    // plus every slot with j >= 1 of each auxiliary form, so the auxiliary
    // system vanishes identically on the extended span.
    std::vector<Form> constraints;
    for (auto& [key, form] : expansion_constraint_forms(F, basis)) {
        if (key.second <= 0 || key.second >= F.degree()) continue;
        if (keep.count(key)) continue;
        if (form.terms().empty()) continue;
        constraints.push_back(form);
    }
    for (const Form& g : G) {
        for (auto& [key, form] : expansion_constraint_forms(g, basis)) {
            if (key.second <= 0) continue;
            if (form.terms().empty()) continue;
            constraints.push_back(form);
        }
    }

    auto candidates =
        residue_common_zeros(p, n, constraints, budget.k, budget.max_candidates);

    std::optional<VectorQp> best;
    long best_level = -1;
    for (const auto& x : candidates) {
        std::vector<long> coords(x.begin(), x.end());
        VectorQp e = VectorQp::from_ints(coords, p, digits);
        bool ok = true;
        for (const Form& g : constraints)
            if (!g.evaluate(e).is_zero()) { ok = false; break; }
        if (!ok) continue;
        PadicScalar value = F.evaluate(e);
        if (value.is_zero()) return e;  // a zero of F: the caller celebrates
        if (!budget.prefer_max_level) return e;
        long lv = value.val() % F.degree();
        if (lv < 0) lv += F.degree();
        if (lv > best_level) {
            best_level = lv;
            best = e;
        }
    }
    if (best) return *best;
    throw OracleExhausted("extension: no clean candidate mod p^" + std::to_string(budget.k) +
                          " (scanned up to " + std::to_string(budget.max_candidates) +
                          " residue vectors)");
}

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    long r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

int lift_digits(long target_prec) {
    return static_cast<int>(std::clamp<long>(target_prec, kDefaultPrecision, 1 << 20));
}

// Rescale e by a power of p so that nu(F(e)) lands in [0, deg F).  The value
// must not be indistinguishable from zero.
LevelVector normalised(const Form& F, const VectorQp& e, const PadicScalar& value) {
    long d = F.degree();
    long m = floor_div(value.val(), d);
    if (m == 0) return LevelVector{e, value, value.val()};
    PadicScalar v = value.shift(-d * m);  // F is homogeneous of degree d
    return LevelVector{e.shift(-m), v, v.val()};
}

// Certify and record a zero: primitivise the witness, re-evaluate the input
// form at it, and accept only a value indistinguishable from zero.
bool finalise(const Form& F, const VectorQp& w, const LiftReport& lift,
              ConstructResult& res, const std::string& label) {
    if (w.is_zero_marked()) return false;
    VectorQp prim = w.primitivize();
    PadicScalar v = F.evaluate(prim);
    if (!v.is_zero()) return false;
    res.status = ConstructStatus::zero;
    res.witness = prim;
    res.value = v;
    res.lift = lift;
    res.trace.push_back(label);
    return true;
}

// Try to certify a zero on the line base + t * dir: scale the line
// polynomial by p^-sigma, run the one-variable lift from each start, and
// verify the combined point on F itself.
bool try_line_lift(const Form& F, const VectorQp& base, const VectorQp& dir,
                   long sigma, const std::vector<long>& starts, long target_prec,
                   ConstructResult& res, const std::string& label) {
    UniPoly f = UniPoly::from_form_line(F, base, dir);
    if (sigma != 0) f = f.scale(-sigma);
    for (long t0 : starts) {
        PadicScalar x0 = PadicScalar::from_integer(t0, F.prime(), lift_digits(target_prec));
        LiftReport rep = lift_root(f, x0, target_prec);
        if (!rep.ok || !rep.root) continue;
        VectorQp w = base.add(dir.scale(*rep.root));
        if (finalise(F, w, rep, res, label)) return true;
    }
    return false;
}

// Combine 0/1/2... digit coefficients over a direction list.
VectorQp combine(unsigned long p, int n, const std::vector<VectorQp>& dirs,
                 const std::vector<long>& digits_v, int prec) {
    VectorQp w = VectorQp::zeros(n, p);
    for (size_t i = 0; i < dirs.size(); ++i) {
        if (digits_v[i] == 0) continue;
        if (digits_v[i] == 1)
            w = w.add(dirs[i]);
        else
            w = w.add(dirs[i].scale(PadicScalar::from_integer(digits_v[i], p, prec)));
    }
    return w;
}

// Scan 0/1 combinations of up to three directions for a point where the
// p^-sigma-scaled restriction of F vanishes to one more digit and has a unit
// partial derivative, then lift that smooth residue point.
bool try_smooth_scan(const Form& F, const std::vector<VectorQp>& dirs, long sigma,
                     long target_prec, ConstructResult& res, const std::string& label) {
    const unsigned long p = F.prime();
    const int prec = lift_digits(target_prec);
    Form G = F.restrict(dirs);
    Form Gs = sigma != 0 ? G.shift(-sigma) : G;
    const int m = static_cast<int>(dirs.size());
    std::vector<long> x(static_cast<size_t>(m), 0);
    for (int mask = 1; mask < (1 << m); ++mask) {
        for (int i = 0; i < m; ++i) x[static_cast<size_t>(i)] = (mask >> i) & 1;
        VectorQp pt = VectorQp::from_ints(x, p, prec);
        PadicScalar val = Gs.evaluate(pt);
        if (val.is_zero()) {
            VectorQp w = combine(p, F.nvars(), dirs, x, prec);
            if (finalise(F, w, LiftReport{}, res, label)) return true;
            continue;
        }
        PointLift pl = lift_smooth_point(Gs, pt, target_prec);
        if (pl.ok && pl.point) {
            VectorQp w = VectorQp::zeros(F.nvars(), p);
            for (int i = 0; i < m; ++i) w = w.add(dirs[static_cast<size_t>(i)].scale((*pl.point)[i]));
            if (finalise(F, w, pl.line, res, label)) return true;
        }
    }
    return false;
}

// Enumerate digit assignments on the free directions, rank the resulting
// points fixed + sum + dir by certified valuation, and attempt line lifts
// along dir at t = 1 (scaled or not).  Exact evaluation decides everything.
bool try_digit_fix(const Form& F, const VectorQp& dir, const VectorQp& fixed,
                   const std::vector<VectorQp>& free_dirs, const std::vector<long>& digit_set,
                   const std::vector<long>& sigmas, long target_prec,
                   ConstructResult& res, const std::string& label) {
    const unsigned long p = F.prime();
    const int prec = lift_digits(target_prec);
    struct Cand {
        VectorQp base;
        long val;
    };
    std::vector<Cand> cands;
    const size_t nf = free_dirs.size();
    std::vector<size_t> idx(nf, 0);
    while (true) {
        std::vector<long> ds(nf, 0);
        for (size_t i = 0; i < nf; ++i) ds[i] = digit_set[idx[i]];
        VectorQp base = fixed.add(combine(p, F.nvars(), free_dirs, ds, prec));
        VectorQp w = base.add(dir);
        PadicScalar v = F.evaluate(w);
        if (v.is_zero()) {
            if (finalise(F, w, LiftReport{}, res, label)) return true;
        } else {
            cands.push_back(Cand{base, v.val()});
        }
        size_t i = 0;
        for (; i < nf; ++i) {
            if (++idx[i] < digit_set.size()) break;
            idx[i] = 0;
        }
        if (i == nf) break;
        if (nf == 0) break;
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.val > b.val; });
    int attempts = 0;
    for (const Cand& c : cands) {
        for (long sigma : sigmas) {
            if (attempts++ > 48) return false;
            if (try_line_lift(F, c.base, dir, sigma, {1}, target_prec, res, label)) return true;
        }
    }
    return false;
}

std::string levels_brief(const LevelBasis& pool) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < pool.size(); ++i) os << (i ? "," : "") << pool[i].level;
    os << "]";
    return os.str();
}

// Reorder the pool so the earliest representative of each distinct level
// comes first, levels ascending; the rest keep their relative order.
// Returns the number of distinct levels.
int designate(LevelBasis& pool) {
    std::map<long, size_t> first;
    for (size_t i = 0; i < pool.size(); ++i) first.emplace(pool[i].level, i);
    int distinct = static_cast<int>(first.size());
    if (distinct < 3) return distinct;
    std::vector<char> taken(pool.size(), 0);
    LevelBasis out;
    out.reserve(pool.size());
    for (auto& [lvl, i] : first) {
        out.push_back(pool[i]);
        taken[i] = 1;
    }
    for (size_t i = 0; i < pool.size(); ++i)
        if (!taken[i]) out.push_back(pool[i]);
    pool = std::move(out);
    return distinct;
}

// Allowed cross slots for a new quartic direction: x_i t^3 and x_i x_j t^2
// over the non-representative (tail) basis positions only, square-free.
std::set<SlotKey> quartic_tail_keep(int basis_size, int tail_start) {
    std::set<SlotKey> keep;
    for (int i = tail_start; i < basis_size; ++i) {
        Monomial d(static_cast<size_t>(basis_size), 0);
        d[static_cast<size_t>(i)] = 1;
        keep.insert({d, 3});
        for (int j = i + 1; j < basis_size; ++j) {
            Monomial d2(static_cast<size_t>(basis_size), 0);
            d2[static_cast<size_t>(i)] = 1;
            d2[static_cast<size_t>(j)] = 1;
            keep.insert({d2, 2});
        }
    }
    return keep;
}

// Terminal configuration: four directions at pairwise-distinct levels mod 4
// plus a fifth.  Normalise exact valuations relative to the fifth, pick
// binary digits on the three middle levels so the value vanishes four more
// digits, and lift along the relative-level-0 direction (or the fifth).
bool terminal_levels_0123(const Form& F, const LevelBasis& reps, const LevelVector& fifth,
                          long target_prec, ConstructResult& res) {
    const unsigned long p = F.prime();
    const int prec = lift_digits(target_prec);
    const long nu5 = fifth.value.val();

    std::array<LevelVector, 4> byrel{reps[0], reps[1], reps[2], reps[3]};
    // Order the four by level relative to the fifth and fix exact valuations
    // nu = nu5 + rel (multiply by p where the raw valuation sits below nu5).
    std::array<std::optional<LevelVector>, 4> slot;
    for (const LevelVector& lv : byrel) {
        long rel = (lv.level - nu5) % 4;
        if (rel < 0) rel += 4;
        LevelVector adj = lv;
        if (lv.level < nu5) {
            adj.vec = lv.vec.shift(1);
            adj.value = lv.value.shift(4);
            adj.level = lv.level + 4;
        }
        slot[static_cast<size_t>(rel)] = adj;
    }
    for (auto& s : slot)
        if (!s) return false;  // levels not pairwise distinct mod 4

    const LevelVector& A = *slot[0];
    std::vector<VectorQp> mids{slot[1]->vec, slot[2]->vec, slot[3]->vec};

    struct Cand {
        VectorQp base;
        long val;
    };
    std::vector<Cand> cands;
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<long> ds{(mask >> 0) & 1, (mask >> 1) & 1, (mask >> 2) & 1};
        VectorQp base = fifth.vec.add(combine(p, F.nvars(), mids, ds, prec));
        VectorQp w = base.add(A.vec);
        PadicScalar v = F.evaluate(w);
        if (v.is_zero()) {
            if (finalise(F, w, LiftReport{}, res, "levels-0123-hensel")) return true;
            continue;
        }
        if (v.val() >= nu5 + 4) cands.push_back(Cand{base, v.val()});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.val > b.val; });
    for (const Cand& c : cands) {
        if (try_line_lift(F, c.base, A.vec, nu5, {1}, target_prec, res, "levels-0123-hensel"))
            return true;
        // lifting along the fifth direction instead
        VectorQp base2 = c.base.add(A.vec).add(fifth.vec.scale(
            PadicScalar::from_integer(-1, p, prec)));
        if (try_line_lift(F, base2, fifth.vec, nu5, {1}, target_prec, res,
                          "levels-0123-hensel"))
            return true;
    }
    return false;
}

// Cross-coefficient case analysis on a same-level clean pair (u, v):
// the only allowed cross term is c * x_u t^3 in the expansion along v.
// Returns 0 = no progress, 1 = zero recorded in res, 2 = pool mutated.
int quartic_pair_tree(const Form& F, LevelBasis& pool, size_t iu, size_t iv,
                      int tail_start, long target_prec, ConstructResult& res) {
    const LevelVector u = pool[iu];
    const LevelVector v = pool[iv];
    const long r = u.level;
    if (r > 2) return 0;  // no rule for a level-3 pair

    Expansion ex = directional_expand(F, {u.vec}, v.vec);
    const PadicScalar* L = ex.slot(Monomial{3}, 1);
    const PadicScalar* Q = ex.slot(Monomial{2}, 2);
    const PadicScalar* c = ex.slot(Monomial{1}, 3);
    if (L && !L->is_zero()) return 0;  // pair not clean: no rule applies
    if (Q && !Q->is_zero()) return 0;
    const bool c_finite = c && !c->is_zero();
    const long cval = c_finite ? c->val() : 0;

    const std::string cname = r == 2 ? "c45" : r == 1 ? "c56" : "c67";
    res.trace.push_back(cname + "-val-" + (c_finite ? std::to_string(cval) : "inf"));

    // The representative sharing the pair's level, if distinct from the pair.
    std::optional<LevelVector> K;
    size_t ik = 0;
    for (int i = 0; i < tail_start && i < static_cast<int>(pool.size()); ++i) {
        if (static_cast<size_t>(i) == iu || static_cast<size_t>(i) == iv) continue;
        if (pool[static_cast<size_t>(i)].level == r) {
            K = pool[static_cast<size_t>(i)];
            ik = static_cast<size_t>(i);
            break;
        }
    }

    if (c_finite && cval < r) {
        // unit-ish cross coefficient: lift v along u from the residue solution
        if (try_line_lift(F, v.vec, u.vec, 0, {0, 1}, target_prec, res,
                          cname + "-lift-low-cross"))
            return 1;
    }
    if (c_finite && cval == r) {
        std::vector<VectorQp> dirs;
        if (K) dirs.push_back(K->vec);
        dirs.push_back(u.vec);
        dirs.push_back(v.vec);
        if (try_smooth_scan(F, dirs, r, target_prec, res, cname + "-smooth-point")) return 1;
    }

    // nu(c) > r (or no cross at all): study the pair sum.
    VectorQp s_vec = u.vec.add(v.vec);
    PadicScalar sval = F.evaluate(s_vec);
    if (sval.is_zero()) {
        if (finalise(F, s_vec, LiftReport{}, res, cname + "-pair-sum-zero")) return 1;
        return 0;
    }
    long sv = sval.val();
    long slvl = sv % 4;
    if (slvl < 0) slvl += 4;
    if (slvl == 3) {
        // the sum is a level-3 direction: it replaces the pair
        LevelVector merged = normalised(F, s_vec, sval);
        LevelBasis next;
        for (size_t i = 0; i < pool.size(); ++i)
            if (i != iu && i != iv) next.push_back(pool[i]);
        next.push_back(merged);
        pool = std::move(next);
        res.trace.push_back(cname + "-pair-sum-level3");
        return 2;
    }
    if (r == 2 && (!c_finite || cval >= 4) && sv >= 4 && K) {
        // the pair's units agree up to sign; fold the matching member into
        // the level-2 representative to manufacture a level-3 direction
        for (size_t pi : {iu, iv}) {
            VectorQp cand = K->vec.add(pool[pi].vec);
            PadicScalar cv2 = F.evaluate(cand);
            if (cv2.is_zero()) {
                if (finalise(F, cand, LiftReport{}, res, cname + "-fold-zero")) return 1;
                continue;
            }
            if (cv2.val() == 3) {
                LevelVector folded = normalised(F, cand, cv2);
                LevelBasis next;
                for (size_t i = 0; i < pool.size(); ++i) {
                    if (i == pi) continue;
                    next.push_back(i == ik ? folded : pool[i]);
                }
                pool = std::move(next);
                res.trace.push_back(cname + "-fold-level3");
                return 2;
            }
        }
    }
    // digit fix on the representatives outside the pair, direction u then v
    std::vector<VectorQp> free_dirs;
    for (int i = 0; i < tail_start && i < static_cast<int>(pool.size()); ++i) {
        if (static_cast<size_t>(i) == iu || static_cast<size_t>(i) == iv) continue;
        free_dirs.push_back(pool[static_cast<size_t>(i)].vec);
    }
    if (try_digit_fix(F, u.vec, v.vec, free_dirs, {0, 1, 2}, {0, r}, target_prec, res,
                      cname + "-digit-fix"))
        return 1;
    if (try_digit_fix(F, v.vec, u.vec, free_dirs, {0, 1, 2}, {0, r}, target_prec, res,
                      cname + "-digit-fix"))
        return 1;
    return 0;
}

} // namespace

ConstructResult quartic_zero_q2(const Form& F, const ExtensionBudget& budget) {
    if (F.prime() != 2) throw InvalidPrime("quartic driver: the prime must be 2");
    if (F.degree() != 4) throw NotApplicable("quartic driver: the form must be quartic");

    ConstructResult res;
    LevelBasis pool;
    bool exhausted = false;

    constexpr int kMaxIter = 64;
    constexpr size_t kPoolCap = 7;

    for (int iter = 0; iter < kMaxIter; ++iter) {
        int distinct = designate(pool);
        int tail_start = distinct >= 3 ? std::min<int>(distinct, static_cast<int>(pool.size()))
                                       : static_cast<int>(pool.size());

        // Terminal: four pairwise-distinct levels plus a fifth direction.
        if (distinct >= 4 && pool.size() >= 5) {
            LevelBasis reps(pool.begin(), pool.begin() + 4);
            for (size_t f = 4; f < pool.size(); ++f) {
                if (terminal_levels_0123(F, reps, pool[f], budget.target_prec, res)) {
                    res.pool = pool;
                    return res;
                }
            }
            res.stuck_reason = "levels-0123-hensel-failed";
            res.trace.push_back("levels-0123-hensel-failed");
            res.pool = pool;
            return res;
        }

        // Merge a same-level pair one level up whenever the exact valuation
        // condition holds.
        bool mutated = false;
        for (size_t i = 0; i < pool.size() && !mutated; ++i) {
            for (size_t j = i + 1; j < pool.size() && !mutated; ++j) {
                if (pool[i].level != pool[j].level) continue;
                VectorQp sum = pool[i].vec.add(pool[j].vec);
                PadicScalar v = F.evaluate(sum);
                if (v.is_zero()) {
                    if (finalise(F, sum, LiftReport{}, res, "pair-sum-zero")) {
                        res.pool = pool;
                        return res;
                    }
                    continue;
                }
                try {
                    VectorQp merged = merge_same_level(F, pool[i].vec, pool[j].vec);
                    LevelVector lv = normalised(F, merged, v);
                    res.trace.push_back("merge-to-level-" + std::to_string(lv.level));
                    LevelBasis next;
                    for (size_t t = 0; t < pool.size(); ++t)
                        if (t != i && t != j) next.push_back(pool[t]);
                    next.push_back(lv);
                    pool = std::move(next);
                    mutated = true;
                } catch (const ConditionFailed&) {
                }
            }
        }
        if (mutated) continue;

        // Cross-coefficient case analysis on remaining same-level pairs,
        // highest level first.
        std::vector<std::pair<size_t, size_t>> pairs;
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = i + 1; j < pool.size(); ++j)
                if (pool[i].level == pool[j].level) pairs.push_back({i, j});
        std::stable_sort(pairs.begin(), pairs.end(),
                         [&](const std::pair<size_t, size_t>& a,
                             const std::pair<size_t, size_t>& b) {
                             return pool[a.first].level > pool[b.first].level;
                         });
        int tree = 0;
        for (auto& [i, j] : pairs) {
            tree = quartic_pair_tree(F, pool, i, j, tail_start, budget.target_prec, res);
            if (tree != 0) break;
        }
        if (tree == 1) {
            res.pool = pool;
            return res;
        }
        if (tree == 2) continue;

        // Extend the pool with a new clean direction.
        if (!exhausted && pool.size() < kPoolCap) {
            ExtensionBudget ext = budget;
            ext.prefer_max_level = distinct >= 3;
            std::vector<VectorQp> basis;
            for (const auto& lv : pool) basis.push_back(lv.vec);
            std::set<SlotKey> keep =
                distinct >= 3 ? quartic_tail_keep(static_cast<int>(pool.size()), tail_start)
                              : std::set<SlotKey>{};
            try {
                VectorQp e = extend_clean_vector(F, {}, basis, keep, ext);
                PadicScalar value = F.evaluate(e);
                if (value.is_zero()) {
                    if (finalise(F, e, LiftReport{}, res, "extend-zero")) {
                        res.pool = pool;
                        return res;
                    }
                }
                LevelVector lv = normalised(F, e, value);
                res.trace.push_back("extend-level-" + std::to_string(lv.level));
                pool.push_back(lv);
                continue;
            } catch (const OracleExhausted&) {
                exhausted = true;
            }
        }

        res.stuck_reason = "no rule applies: levels " + levels_brief(pool) +
                           (exhausted ? ", extension oracle exhausted" : ", pool at capacity");
        res.pool = pool;
        return res;
    }
    res.stuck_reason = "iteration cap reached";
    res.pool = pool;
    return res;
}

ConstructResult cubic_step_p2mod3(const Form& C, const std::vector<Form>& G,
                                  const ExtensionBudget& budget) {
    if (C.prime() % 3 != 2)
        throw InvalidPrime("cubic unit-congruence step: the prime must be 2 mod 3");
    if (C.degree() != 3) throw NotApplicable("cubic step: the form must be cubic");

    ConstructResult res;
    LevelBasis pool;
    const long p = static_cast<long>(C.prime());

    for (int iter = 0; iter < 16; ++iter) {
        // A same-level pair lifts through the unit cube-root congruence.
        for (size_t i = 0; i < pool.size(); ++i) {
            for (size_t j = i + 1; j < pool.size(); ++j) {
                if (pool[i].level != pool[j].level) continue;
                long r = pool[i].level;
                res.trace.push_back("pair-level-" + std::to_string(r));
                std::vector<long> starts;
                for (long t0 = 0; t0 < p; ++t0) starts.push_back(t0);
                if (try_line_lift(C, pool[j].vec, pool[i].vec, r, starts,
                                  budget.target_prec, res, "unit-cube-line-lift")) {
                    res.pool = pool;
                    return res;
                }
                res.stuck_reason = "pair line lift failed at the certified precision";
                res.pool = pool;
                return res;
            }
        }
        if (pool.size() >= 4) {
            res.stuck_reason = "four directions without a same-level pair";
            res.pool = pool;
            return res;
        }
        ExtensionBudget ext = budget;
        ext.prefer_max_level = false;
        std::vector<VectorQp> basis;
        for (const auto& lv : pool) basis.push_back(lv.vec);
        try {
            VectorQp e = extend_clean_vector(C, G, basis, {}, ext);
            PadicScalar value = C.evaluate(e);
            if (value.is_zero()) {
                if (finalise(C, e, LiftReport{}, res, "diagonal-zero")) {
                    res.pool = pool;
                    return res;
                }
            }
            LevelVector lv = normalised(C, e, value);
            res.trace.push_back("extend-level-" + std::to_string(lv.level));
            pool.push_back(lv);
        } catch (const OracleExhausted& ex) {
            res.stuck_reason = std::string("extension exhausted: ") + ex.what();
            res.pool = pool;
            return res;
        }
    }
    res.stuck_reason = "iteration cap reached";
    res.pool = pool;
    return res;
}

ConstructResult cubic_step_p3(const Form& C, const std::vector<Form>& G,
                              const ExtensionBudget& budget) {
    if (C.prime() != 3) throw InvalidPrime("scaled-unit cubic step: the prime must be 3");
    if (C.degree() != 3) throw NotApplicable("cubic step: the form must be cubic");

    ConstructResult res;
    LevelBasis pool;
    const unsigned long p = 3;
    const int prec = lift_digits(budget.target_prec);
    bool exhausted = false;

    for (int iter = 0; iter < 32; ++iter) {
        // Terminal (r, r, r+1): two directions at level r and one a level up.
        bool fired = false;
        for (long r = 0; r < 3 && !fired; ++r) {
            std::vector<size_t> at_r, at_r1;
            for (size_t i = 0; i < pool.size(); ++i) {
                if (pool[i].level == r) at_r.push_back(i);
                if (pool[i].level == (r + 1) % 3) at_r1.push_back(i);
            }
            if (at_r.size() < 2 || at_r1.empty()) continue;
            LevelVector ei = pool[at_r[0]];
            LevelVector ej = pool[at_r[1]];
            LevelVector ek = pool[at_r1[0]];
            if (r + 1 == 3) {  // raise the level-0 direction to exact valuation 3
                ek.vec = ek.vec.shift(1);
                ek.value = ek.value.shift(3);
                ek.level = 3;
            }
            PadicScalar Ci = ei.value.shift(-r);
            for (int sign : {-1, +1}) {
                PadicScalar xj = sign < 0 ? Ci.neg() : Ci;
                VectorQp w2 = ei.vec.add(ej.vec.scale(xj));
                PadicScalar v2 = C.evaluate(w2);
                if (v2.is_zero()) {
                    if (finalise(C, w2, LiftReport{}, res, "terminal-001-sl")) {
                        res.pool = pool;
                        return res;
                    }
                    continue;
                }
                if (v2.val() < r + 1) continue;  // wrong sign: units did not cancel
                PadicScalar s = v2.shift(-(r + 1));
                PadicScalar l = ek.value.shift(-(r + 1));
                PadicScalar xk = s.val() == 0 ? s.mul(l).neg() : PadicScalar::zero(p);
                VectorQp base = ej.vec.scale(xj).add(ek.vec.scale(xk));
                if (try_line_lift(C, base, ei.vec, r, {1}, budget.target_prec, res,
                                  "terminal-001-sl")) {
                    res.pool = pool;
                    return res;
                }
            }
            res.stuck_reason = "scaled-unit terminal failed to certify";
            res.pool = pool;
            return res;
        }

        // A same-level pair: lift on the joining line, or merge one level up.
        for (size_t i = 0; i < pool.size() && !fired; ++i) {
            for (size_t j = i + 1; j < pool.size() && !fired; ++j) {
                if (pool[i].level != pool[j].level) continue;
                long r = pool[i].level;
                UniPoly f = UniPoly::from_form_line(C, pool[j].vec, pool[i].vec).scale(-r);
                std::optional<long> chosen;
                for (long t0 : {1L, -1L}) {
                    PadicScalar ft = f.eval(PadicScalar::from_integer(t0, p, prec));
                    if (ft.is_zero()) {
                        VectorQp w = pool[j].vec.add(
                            pool[i].vec.scale(PadicScalar::from_integer(t0, p, prec)));
                        if (finalise(C, w, LiftReport{}, res, "pair-exact-zero")) {
                            res.pool = pool;
                            return res;
                        }
                        continue;
                    }
                    if (ft.val() >= 1) {
                        chosen = t0;
                        break;
                    }
                }
                if (!chosen) {
                    res.stuck_reason = "no unit solution on the pair line";
                    res.pool = pool;
                    return res;
                }
                PadicScalar x0 = PadicScalar::from_integer(*chosen, p, prec);
                LiftReport rep = lift_root(f, x0, budget.target_prec);
                if (rep.ok && rep.root) {
                    VectorQp w = pool[j].vec.add(pool[i].vec.scale(*rep.root));
                    if (finalise(C, w, rep, res, "pair-lift")) {
                        res.pool = pool;
                        return res;
                    }
                }
                // one certified digit only: the combination sits one level up
                VectorQp merged = pool[j].vec.add(pool[i].vec.scale(x0));
                PadicScalar mv = C.evaluate(merged);
                if (mv.is_zero()) {
                    if (finalise(C, merged, LiftReport{}, res, "pair-exact-zero")) {
                        res.pool = pool;
                        return res;
                    }
                }
                if (mv.val() != r + 1) {
                    res.stuck_reason = "pair combination missed the expected level";
                    res.pool = pool;
                    return res;
                }
                LevelVector lv = normalised(C, merged, mv);
                res.trace.push_back("pair-merge-level-" + std::to_string(lv.level));
                LevelBasis next;
                for (size_t t = 0; t < pool.size(); ++t)
                    if (t != i && t != j) next.push_back(pool[t]);
                next.push_back(lv);
                pool = std::move(next);
                fired = true;
            }
        }
        if (fired) continue;

        // Extend the diagonal pool (at most four directions).
        if (!exhausted && pool.size() < 4) {
            ExtensionBudget ext = budget;
            ext.prefer_max_level = false;
            std::vector<VectorQp> basis;
            for (const auto& lv : pool) basis.push_back(lv.vec);
            try {
                VectorQp e = extend_clean_vector(C, G, basis, {}, ext);
                PadicScalar value = C.evaluate(e);
                if (value.is_zero()) {
                    if (finalise(C, e, LiftReport{}, res, "diagonal-zero")) {
                        res.pool = pool;
                        return res;
                    }
                }
                LevelVector lv = normalised(C, e, value);
                res.trace.push_back("extend-level-" + std::to_string(lv.level));
                pool.push_back(lv);
                continue;
            } catch (const OracleExhausted& ex) {
                exhausted = true;
                res.stuck_reason = std::string("extension exhausted: ") + ex.what();
            }
        }
        if (res.stuck_reason.empty())
            res.stuck_reason = "no rule applies: levels " + levels_brief(pool);
        res.pool = pool;
        return res;
    }
    res.stuck_reason = "iteration cap reached";
    res.pool = pool;
    return res;
}

} // namespace qpforms
