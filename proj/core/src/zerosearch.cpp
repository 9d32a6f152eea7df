#include "qpforms/zerosearch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace qpforms {

const char* to_string(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::zero_found: return "zero_found";
        case SearchOutcome::exhausted_no_liftable: return "exhausted_no_liftable";
        case SearchOutcome::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

namespace {

// Residue-arithmetic view of a form: coefficients reduced mod q = p^k.
struct ResidueEvaluator {
    unsigned long p;
    unsigned long q;
    std::vector<std::pair<Monomial, unsigned long>> terms;

    static ResidueEvaluator build(const Form& F, int k) {
        if (k < 1) throw Error("residue scan: k must be >= 1");
        mpz_class qz = pow_p(F.prime(), k);
        if (!qz.fits_ulong_p() || qz >= mpz_class(1) << 62)
            throw RefusedTooLarge("residue scan: p^k too large for machine words");
        auto rt = F.residue_terms(k);
        if (!rt)
            throw NegativeValuation(
                "residue scan: coefficients of negative valuation; rescale the form first");
        return ResidueEvaluator{F.prime(), qz.get_ui(), std::move(*rt)};
    }

    unsigned long eval(const std::vector<unsigned long>& x) const {
        unsigned __int128 acc = 0;
        for (const auto& [mono, c] : terms) {
            unsigned __int128 t = c;
            for (size_t j = 0; j < mono.size(); ++j) {
                unsigned long b = x[j];
                for (int e = 0; e < mono[j]; ++e) t = t * b % q;
                if (t == 0) break;
            }
            acc += t;
        }
        return static_cast<unsigned long>(acc % q);
    }

    bool primitive(const std::vector<unsigned long>& x) const {
        for (unsigned long v : x)
            if (v % p != 0) return true;
        return false;
    }
};

// Advance a base-q odometer over positions [from, x.size()); false on wrap.
bool advance(std::vector<unsigned long>& x, unsigned long q, size_t from) {
    for (size_t i = x.size(); i-- > from;) {
        if (++x[i] < q) return true;
        x[i] = 0;
    }
    return false;
}

// Exact certification of a residue hit: the value may already be certified
// zero, otherwise try the smooth-point lift.
PointLift certify_candidate(const Form& F, const std::vector<unsigned long>& x,
                            long target_prec) {
    std::vector<long> coords(x.begin(), x.end());
    int digits = static_cast<int>(std::clamp<long>(target_prec, kDefaultPrecision, 1 << 20));
    VectorQp v = VectorQp::from_ints(coords, F.prime(), digits);
    PadicScalar val = F.evaluate(v);
    if (val.is_zero() && val.zero_precision() >= target_prec) {
        PointLift out;
        out.ok = true;
        out.point = v;
        out.line.ok = true;
        out.line.certified_prec = val.zero_precision();
        out.reason = "value certified zero at the candidate itself";
        return out;
    }
    return lift_smooth_point(F, v, target_prec);
}

struct StratumHit {
    unsigned long stratum = 0;
    std::vector<unsigned long> x;
    PointLift lift;
};

} // namespace

SearchResult find_zero(const Form& F, const SearchBudget& budget) {
    ResidueEvaluator ev = ResidueEvaluator::build(F, budget.k);
    size_t n = static_cast<size_t>(F.nvars());
    unsigned long q = ev.q;

    std::atomic<long> remaining{budget.max_candidates < 0 ? -1 : budget.max_candidates};
    std::atomic<unsigned long> best_stratum{q};  // strata past this cannot win
    std::atomic<bool> budget_hit{false};
    std::atomic<long> examined{0};
    std::atomic<long> rz_count{0};

    int width = std::max(1, budget.parallel_width);
    std::vector<std::optional<StratumHit>> hits(static_cast<size_t>(width));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(width));

    auto worker = [&](int tid) {
        try {
            long local_examined = 0, local_rz = 0;
            for (unsigned long s = static_cast<unsigned long>(tid); s < q;
                 s += static_cast<unsigned long>(width)) {
                if (s > best_stratum.load(std::memory_order_relaxed)) break;
                std::vector<unsigned long> x(n, 0);
                x[0] = s;
                bool more = true;
                while (more) {
                    if (budget_hit.load(std::memory_order_relaxed)) break;
                    if (s > best_stratum.load(std::memory_order_relaxed)) break;
                    if (ev.primitive(x)) {
                        if (budget.max_candidates >= 0 &&
                            remaining.fetch_sub(1, std::memory_order_relaxed) <= 0) {
                            budget_hit.store(true, std::memory_order_relaxed);
                            break;
                        }
                        ++local_examined;
                        if (ev.eval(x) == 0) {
                            ++local_rz;
                            PointLift pl = certify_candidate(F, x, budget.target_prec);
                            if (pl.ok) {
                                hits[static_cast<size_t>(tid)] = StratumHit{s, x, std::move(pl)};
                                unsigned long cur = best_stratum.load();
                                while (s < cur && !best_stratum.compare_exchange_weak(cur, s)) {
                                }
                                examined.fetch_add(local_examined);
                                rz_count.fetch_add(local_rz);
                                return;
                            }
                        }
                    }
                    // The stratum fixes x[0]; a single-variable form has one
                    // candidate per stratum.
                    more = n > 1 && advance(x, q, 1);
                }
                if (budget_hit.load(std::memory_order_relaxed)) break;
            }
            examined.fetch_add(local_examined);
            rz_count.fetch_add(local_rz);
        } catch (...) {
            errors[static_cast<size_t>(tid)] = std::current_exception();
        }
    };

    if (width == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(width));
        for (int t = 0; t < width; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    SearchResult res;
    res.examined = examined.load();
    res.residue_zero_count = rz_count.load();
    const std::optional<StratumHit>* best = nullptr;
    for (const auto& h : hits) {
        if (!h) continue;
        if (!best || h->stratum < (*best)->stratum) best = &h;
    }
    if (best) {
        res.outcome = SearchOutcome::zero_found;
        res.residue_witness = (*best)->x;
        res.lift = (*best)->lift;
        res.witness = res.lift.point;
        return res;
    }
    res.outcome = budget_hit.load() ? SearchOutcome::budget_exhausted
                                    : SearchOutcome::exhausted_no_liftable;
    return res;
}

std::vector<std::vector<unsigned long>> residue_zeros(const Form& F, int k, long max_count) {
    ResidueEvaluator ev = ResidueEvaluator::build(F, k);
    size_t n = static_cast<size_t>(F.nvars());
    std::vector<std::vector<unsigned long>> out;
    std::vector<unsigned long> x(n, 0);
    do {
        if (max_count >= 0 && static_cast<long>(out.size()) >= max_count) break;
        if (ev.primitive(x) && ev.eval(x) == 0) out.push_back(x);
    } while (advance(x, ev.q, 0));
    return out;
}

std::vector<std::vector<unsigned long>> residue_common_zeros(
    unsigned long p, int n, const std::vector<Form>& constraints, int k, long max_count) {
    if (n < 1) throw Error("residue scan: need at least one variable");
    mpz_class qz = pow_p(p, k);
    if (!qz.fits_ulong_p() || qz >= mpz_class(1) << 62)
        throw RefusedTooLarge("residue scan: p^k too large for machine words");
    unsigned long q = qz.get_ui();

    std::vector<ResidueEvaluator> evs;
    for (const Form& g : constraints) {
        if (g.nvars() != n || g.prime() != p)
            throw Error("residue scan: constraint shape mismatch");
        if (g.terms().empty()) continue;  // indistinguishable from zero: no constraint
        long mcv = g.min_coeff_val();
        evs.push_back(ResidueEvaluator::build(mcv < 0 ? g.shift(-mcv) : g, k));
    }

    std::vector<std::vector<unsigned long>> out;
    std::vector<unsigned long> x(static_cast<size_t>(n), 0);
    do {
        if (max_count >= 0 && static_cast<long>(out.size()) >= max_count) break;
        bool prim = false;
        for (unsigned long v : x)
            if (v % p != 0) { prim = true; break; }
        if (!prim) continue;
        bool ok = true;
        for (const auto& ev : evs)
            if (ev.eval(x) != 0) { ok = false; break; }
        if (ok) out.push_back(x);
    } while (advance(x, q, 0));
    return out;
}

AnisotropyReport anisotropy_witness(const Form& F, int k) {
    AnisotropyReport rep;
    std::vector<int> unused;
    rep.blocks = F.blocks(&unused);
    size_t n = static_cast<size_t>(F.nvars());

    // A variable that occurs in no term gives a free primitive zero.
    if (!unused.empty()) {
        rep.primitive_zero_exists = true;
        std::vector<unsigned long> w(n, 0);
        w[static_cast<size_t>(unused.front())] = 1;
        rep.witness = w;
        return rep;
    }

    ResidueEvaluator ev = ResidueEvaluator::build(F, k);
    unsigned long q = ev.q;
    if (q > (1UL << 12))
        throw RefusedTooLarge("block sweep: p^k too large for the state table");

    // Per block: achievable values mod q over all tuples and over primitive
    // tuples, with one lexicographically-least representative tuple each.
    struct BlockValues {
        std::vector<int> vars;
        std::vector<std::optional<std::vector<unsigned long>>> rep_all;
        std::vector<std::optional<std::vector<unsigned long>>> rep_prim;
    };
    std::vector<BlockValues> blocks;
    for (const auto& vars : rep.blocks) {
        double tuples = std::pow(static_cast<double>(q), static_cast<double>(vars.size()));
        if (tuples > static_cast<double>(1UL << 26))
            throw RefusedTooLarge("block sweep: a block enumeration exceeds 2^26 tuples");
        BlockValues bv;
        bv.vars = vars;
        bv.rep_all.resize(q);
        bv.rep_prim.resize(q);
        std::vector<unsigned long> t(vars.size(), 0);
        std::vector<unsigned long> full(n, 0);
        do {
            for (size_t i = 0; i < vars.size(); ++i) full[static_cast<size_t>(vars[i])] = t[i];
            unsigned long v = ev.eval(full);
            ++rep.enumerated;
            if (!bv.rep_all[v]) bv.rep_all[v] = t;
            bool prim = false;
            for (unsigned long c : t)
                if (c % ev.p != 0) prim = true;
            if (prim && !bv.rep_prim[v]) bv.rep_prim[v] = t;
        } while (advance(t, q, 0));
        for (size_t i = 0; i < vars.size(); ++i) full[static_cast<size_t>(vars[i])] = 0;
        blocks.push_back(std::move(bv));
    }

    // Reachability over (sum mod q, some-block-primitive).  choice[b][s][f]
    // records how state (s, f) was first reached after processing block b.
    struct Choice {
        unsigned long prev_sum;
        int prev_flag;
        unsigned long value;
        int used_prim;
    };
    size_t B = blocks.size();
    std::vector<std::vector<std::array<std::optional<Choice>, 2>>> choice(
        B, std::vector<std::array<std::optional<Choice>, 2>>(q));
    std::vector<std::array<bool, 2>> reach(q, {false, false});
    reach[0][0] = true;
    for (size_t b = 0; b < B; ++b) {
        std::vector<std::array<bool, 2>> next(q, {false, false});
        for (unsigned long s = 0; s < q; ++s)
            for (int f = 0; f < 2; ++f) {
                if (!reach[s][f]) continue;
                for (unsigned long v = 0; v < q; ++v) {
                    for (int up = 0; up < 2; ++up) {
                        const auto& repv = up ? blocks[b].rep_prim[v] : blocks[b].rep_all[v];
                        if (!repv) continue;
                        unsigned long ns = (s + v) % q;
                        int nf = f | up;
                        if (next[ns][nf]) continue;
                        next[ns][nf] = true;
                        choice[b][ns][nf] = Choice{s, f, v, up};
                    }
                }
            }
        reach = std::move(next);
    }

    if (!reach[0][1]) return rep;

    rep.primitive_zero_exists = true;
    std::vector<unsigned long> w(n, 0);
    unsigned long s = 0;
    int f = 1;
    for (size_t b = B; b-- > 0;) {
        const Choice& c = *choice[b][s][f];
        const auto& repv = c.used_prim ? blocks[b].rep_prim[c.value] : blocks[b].rep_all[c.value];
        for (size_t i = 0; i < blocks[b].vars.size(); ++i)
            w[static_cast<size_t>(blocks[b].vars[i])] = (*repv)[i];
        s = c.prev_sum;
        f = c.prev_flag;
    }
    rep.witness = w;
    return rep;
}

} // namespace qpforms
