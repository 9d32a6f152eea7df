#ifndef QPFORMS_VECTOR_QP_HPP
#define QPFORMS_VECTOR_QP_HPP

#include <string>
#include <vector>

#include "qpforms/scalar.hpp"

namespace qpforms {

/// Fixed-length vector over Q_p.
class VectorQp {
  public:
    VectorQp(unsigned long p, std::vector<PadicScalar> entries)
        : p_(p), e_(std::move(entries)) {}

    /// All-zero vector of length n.
    static VectorQp zeros(int n, unsigned long p);
    /// Integer coordinates at the given precision.
    static VectorQp from_ints(const std::vector<long>& v, unsigned long p,
                              int prec = kDefaultPrecision);

    unsigned long prime() const { return p_; }
    int size() const { return static_cast<int>(e_.size()); }
    const PadicScalar& operator[](int i) const { return e_[static_cast<size_t>(i)]; }
    const std::vector<PadicScalar>& entries() const { return e_; }

    VectorQp add(const VectorQp& y) const;
    VectorQp scale(const PadicScalar& c) const;
    /// Multiply every entry by p^e.
    VectorQp shift(long e) const;

    /// Smallest certified entry valuation; at_least bound if every entry is
    /// zero-marked.
    Valuation min_valuation() const;
    /// Some coordinate is certified to be a unit.
    bool is_primitive() const;
    /// All entries zero-marked (indistinguishable from the zero vector).
    bool is_zero_marked() const;
    /// Divide out p^min_valuation so that some entry is a unit.  Throws
    /// IsZeroValue when the vector is indistinguishable from zero.
    VectorQp primitivize() const;

    /// Space-separated entry tokens.
    std::string tokens() const;

  private:
    unsigned long p_;
    std::vector<PadicScalar> e_;
};

/// Rank of a family of vectors by valuation-aware Gaussian elimination
/// (pivot on the entry of minimal valuation).  Entries indistinguishable
/// from zero are treated as zero; the result is the certified rank.
int rank_of(const std::vector<VectorQp>& vecs);

} // namespace qpforms

#endif
