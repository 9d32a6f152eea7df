#include "qpforms/vector_qp.hpp"

#include <sstream>

namespace qpforms {

VectorQp VectorQp::zeros(int n, unsigned long p) {
    std::vector<PadicScalar> e;
    e.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) e.push_back(PadicScalar::zero(p));
    return VectorQp(p, std::move(e));
}

VectorQp VectorQp::from_ints(const std::vector<long>& v, unsigned long p, int prec) {
    std::vector<PadicScalar> e;
    e.reserve(v.size());
    for (long x : v) e.push_back(PadicScalar::from_integer(x, p, prec));
    return VectorQp(p, std::move(e));
}

VectorQp VectorQp::add(const VectorQp& y) const {
    if (size() != y.size()) throw Error("vector add: length mismatch");
    std::vector<PadicScalar> e;
    e.reserve(e_.size());
    for (size_t i = 0; i < e_.size(); ++i) e.push_back(e_[i].add(y.e_[i]));
    return VectorQp(p_, std::move(e));
}

VectorQp VectorQp::scale(const PadicScalar& c) const {
    std::vector<PadicScalar> e;
    e.reserve(e_.size());
    for (const auto& x : e_) e.push_back(x.mul(c));
    return VectorQp(p_, std::move(e));
}

VectorQp VectorQp::shift(long k) const {
    std::vector<PadicScalar> e;
    e.reserve(e_.size());
    for (const auto& x : e_) e.push_back(x.shift(k));
    return VectorQp(p_, std::move(e));
}

Valuation VectorQp::min_valuation() const {
    bool any_finite = false;
    long best = 0;
    long bound = kZeroPrecCap;
    for (const auto& x : e_) {
        if (x.is_zero()) {
            bound = std::min(bound, x.zero_precision());
        } else if (!any_finite || x.val() < best) {
            any_finite = true;
            best = x.val();
        }
    }
    if (!any_finite) return Valuation::at_least(bound);
    return Valuation::finite(best);
}

bool VectorQp::is_primitive() const {
    for (const auto& x : e_)
        if (!x.is_zero() && x.val() == 0) return true;
    return false;
}

bool VectorQp::is_zero_marked() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

VectorQp VectorQp::primitivize() const {
    Valuation m = min_valuation();
    if (!m.finite_known()) throw IsZeroValue("primitivize: zero vector");
    return shift(-m.value());
}

std::string VectorQp::tokens() const {
    std::ostringstream os;
    for (size_t i = 0; i < e_.size(); ++i) {
        if (i) os << ' ';
        os << e_[i].token();
    }
    return os.str();
}

int rank_of(const std::vector<VectorQp>& vecs) {
    if (vecs.empty()) return 0;
    std::vector<std::vector<PadicScalar>> m;
    for (const auto& v : vecs) m.push_back(v.entries());
    size_t rows = m.size(), cols = m[0].size();
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        // pivot on minimal valuation to keep elimination certified
        size_t piv = rows;
        long pv = 0;
        for (size_t r = rank; r < rows; ++r) {
            if (m[r][c].is_zero()) continue;
            if (piv == rows || m[r][c].val() < pv) {
                piv = r;
                pv = m[r][c].val();
            }
        }
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        for (size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c].is_zero()) continue;
            PadicScalar f = m[r][c].div(m[rank][c]);
            for (size_t j = c; j < cols; ++j)
                m[r][j] = m[r][j].sub(f.mul(m[rank][j]));
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

} // namespace qpforms
