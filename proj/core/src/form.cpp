#include "qpforms/form.hpp"

#include <algorithm>
#include <numeric>

namespace qpforms {

namespace {

using Poly = std::map<Monomial, PadicScalar>;

void poly_add_term(Poly& poly, const Monomial& mono, const PadicScalar& c) {
    auto it = poly.find(mono);
    if (it == poly.end()) {
        if (!c.is_zero()) poly.emplace(mono, c);
        return;
    }
    PadicScalar s = it->second.add(c);
    if (s.is_zero())
        poly.erase(it);
    else
        it->second = s;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(ma.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            poly_add_term(out, m, ca.mul(cb));
        }
    return out;
}

Poly poly_pow(const Poly& base, int e, unsigned long p, int prec, size_t nvars) {
    Poly r;
    r.emplace(Monomial(nvars, 0), PadicScalar::from_integer(1, p, prec));
    for (int i = 0; i < e; ++i) r = poly_mul(r, base);
    return r;
}

// Substitute x_j -> sum_i t_i * basis[i][j] into the term map; result is a
// polynomial in the t variables.
Poly substitute(const std::map<Monomial, PadicScalar>& terms,
                const std::vector<VectorQp>& basis, unsigned long p, int prec) {
    size_t k = basis.size();
    Poly out;
    for (const auto& [mono, coeff] : terms) {
        Poly prod;
        prod.emplace(Monomial(k, 0), coeff);
        for (size_t j = 0; j < mono.size(); ++j) {
            int e = mono[j];
            if (e == 0) continue;
            Poly lin;
            for (size_t i = 0; i < k; ++i) {
                const PadicScalar& b = basis[i][static_cast<int>(j)];
                if (b.is_zero()) continue;
                Monomial m(k, 0);
                m[i] = 1;
                poly_add_term(lin, m, b);
            }
            prod = poly_mul(prod, poly_pow(lin, e, p, prec, k));
            if (prod.empty()) break;
        }
        for (const auto& [m, c] : prod) poly_add_term(out, m, c);
    }
    return out;
}

} // namespace

void Form::add_term(const Monomial& mono, const PadicScalar& c) {
    if (static_cast<int>(mono.size()) != n_) throw Error("add_term: wrong arity");
    int total = std::accumulate(mono.begin(), mono.end(), 0);
    if (total != d_) throw Error("add_term: monomial degree mismatch");
    for (int e : mono)
        if (e < 0) throw Error("add_term: negative exponent");
    if (c.prime() != p_) throw Error("add_term: mixed primes");
    poly_add_term(terms_, mono, c);
}

void Form::add_term_int(const Monomial& mono, long c) {
    add_term(mono, PadicScalar::from_integer(c, p_, prec_));
}

PadicScalar Form::evaluate(const VectorQp& v) const {
    if (v.size() != n_) throw Error("evaluate: wrong arity");
    PadicScalar sum = PadicScalar::zero(p_);
    for (const auto& [mono, coeff] : terms_) {
        PadicScalar t = coeff;
        for (int j = 0; j < n_; ++j)
            if (mono[j] > 0) t = t.mul(v[j].pow(static_cast<unsigned>(mono[j])));
        sum = sum.add(t);
    }
    return sum;
}

Form Form::restrict(const std::vector<VectorQp>& basis) const {
    if (basis.empty()) throw Error("restrict: empty basis");
    for (const auto& b : basis)
        if (b.size() != n_) throw Error("restrict: wrong vector arity");
    Form out(p_, prec_, static_cast<int>(basis.size()), d_);
    for (const auto& [m, c] : substitute(terms_, basis, p_, prec_)) out.add_term(m, c);
    return out;
}

Form Form::partial(int i) const {
    if (i < 0 || i >= n_) throw Error("partial: bad index");
    if (d_ == 0) throw Error("partial: constant form");
    Form out(p_, prec_, n_, d_ - 1);
    for (const auto& [mono, coeff] : terms_) {
        if (mono[i] == 0) continue;
        Monomial m = mono;
        m[i] -= 1;
        out.add_term(m, coeff.mul_int(mono[i]));
    }
    return out;
}

VectorQp Form::gradient(const VectorQp& v) const {
    if (v.size() != n_) throw Error("gradient: wrong arity");
    std::vector<PadicScalar> g;
    g.reserve(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        PadicScalar sum = PadicScalar::zero(p_);
        for (const auto& [mono, coeff] : terms_) {
            if (mono[i] == 0) continue;
            PadicScalar t = coeff.mul_int(mono[i]);
            for (int j = 0; j < n_; ++j) {
                int e = (j == i) ? mono[j] - 1 : mono[j];
                if (e > 0) t = t.mul(v[j].pow(static_cast<unsigned>(e)));
            }
            sum = sum.add(t);
        }
        g.push_back(sum);
    }
    return VectorQp(p_, std::move(g));
}

Form Form::shift(long e) const {
    Form out(p_, prec_, n_, d_);
    for (const auto& [m, c] : terms_) out.add_term(m, c.shift(e));
    return out;
}

std::optional<std::vector<std::pair<Monomial, unsigned long>>>
Form::residue_terms(int k) const {
    std::vector<std::pair<Monomial, unsigned long>> out;
    for (const auto& [m, c] : terms_) {
        if (!c.is_zero() && c.val() < 0) return std::nullopt;
        mpz_class r = c.reduce_mod(k);
        if (!r.fits_ulong_p()) return std::nullopt;
        unsigned long u = r.get_ui();
        if (u != 0) out.emplace_back(m, u);
    }
    return out;
}

long Form::min_coeff_val() const {
    long m = kZeroPrecCap;
    for (const auto& [mono, c] : terms_) m = std::min(m, c.val_bound());
    return m;
}

std::vector<std::vector<int>> Form::blocks(std::vector<int>* unused) const {
    std::vector<int> parent(static_cast<size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    std::vector<bool> used(static_cast<size_t>(n_), false);
    for (const auto& [mono, c] : terms_) {
        int first = -1;
        for (int j = 0; j < n_; ++j) {
            if (mono[j] == 0) continue;
            used[static_cast<size_t>(j)] = true;
            if (first < 0)
                first = j;
            else
                parent[static_cast<size_t>(find(j))] = find(first);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int j = 0; j < n_; ++j) {
        if (!used[static_cast<size_t>(j)]) {
            if (unused) unused->push_back(j);
            continue;
        }
        groups[find(j)].push_back(j);
    }
    std::vector<std::vector<int>> out;
    for (auto& [root, vars] : groups) out.push_back(std::move(vars));
    return out;
}

Expansion directional_expand(const Form& F, const std::vector<VectorQp>& basis,
                             const VectorQp& e, bool materialize_symbolic) {
    int k = static_cast<int>(basis.size());
    std::vector<VectorQp> ext = basis;
    ext.push_back(e);
    Form H = F.restrict(ext);

    Expansion X;
    X.basis_size = k;
    X.degree = F.degree();
    for (const auto& [mono, c] : H.terms()) {
        Monomial d(mono.begin(), mono.begin() + k);
        int j = mono[static_cast<size_t>(k)];
        X.slots.emplace(SlotKey{std::move(d), j}, c);
    }
    if (materialize_symbolic) X.symbolic = expansion_constraint_forms(F, basis);
    return X;
}

std::map<SlotKey, Form> expansion_constraint_forms(const Form& F,
                                                   const std::vector<VectorQp>& basis) {
    int k = static_cast<int>(basis.size());
    int n = F.nvars();
    std::vector<VectorQp> ext = basis;
    for (int j = 0; j < n; ++j) {
        std::vector<long> unit(static_cast<size_t>(n), 0);
        unit[static_cast<size_t>(j)] = 1;
        ext.push_back(VectorQp::from_ints(unit, F.prime(), F.precision()));
    }
    Form H = F.restrict(ext);

    std::map<SlotKey, Form> out;
    for (const auto& [mono, c] : H.terms()) {
        Monomial d(mono.begin(), mono.begin() + k);
        Monomial m(mono.begin() + k, mono.end());
        int j = std::accumulate(m.begin(), m.end(), 0);
        SlotKey key{std::move(d), j};
        auto it = out.find(key);
        if (it == out.end())
            it = out.emplace(key, Form(F.prime(), F.precision(), n, j)).first;
        it->second.add_term(m, c);
    }
    return out;
}

} // namespace qpforms
