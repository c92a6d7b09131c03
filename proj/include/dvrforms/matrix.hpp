#pragma once

#include <cstddef>
#include <vector>

#include "dvrforms/ring.hpp"

namespace dvrforms {

using RingVector = std::vector<RingElement>;

// Dense matrix over a ring instance. Small sizes only; all arithmetic is
// exact at the working precision.
class RingMatrix {
public:
    RingMatrix() = default;
    RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols);

    static RingMatrix identity(const RingPtr& ring, std::size_t n);
    static RingMatrix zero(const RingPtr& ring, std::size_t rows, std::size_t cols);

    const RingPtr& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    RingElement& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const RingElement& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    RingMatrix operator*(const RingMatrix& other) const;
    RingMatrix operator+(const RingMatrix& other) const;
    RingMatrix operator-(const RingMatrix& other) const;
    RingMatrix scaled(const RingElement& c) const;
    RingMatrix transpose() const;
    // Entrywise involution plus transpose: X'^*.
    RingMatrix conj_transpose() const;
    // Inverse over the local ring; requires unit determinant.
    RingMatrix inverse() const;

    RingVector column(std::size_t j) const;
    void set_column(std::size_t j, const RingVector& v);

    // v -> M v.
    RingVector apply(const RingVector& v) const;

    bool payload_equal(const RingMatrix& other) const;
    bool payload_is_identity() const;
    // Every entry exactly zero.
    bool all_exact_zero() const;
    // Every entry zero at the working precision.
    bool all_payload_zero() const;

    RingMatrix change_ring(const RingPtr& target) const;

    // Direct sum diag(*this, other).
    RingMatrix direct_sum(const RingMatrix& other) const;

    std::string to_string() const;

private:
    RingPtr ring_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<RingElement> e_;
};

// u'^* G v for column coordinate vectors u, v.
RingElement pair_with(const RingMatrix& gram, const RingVector& u, const RingVector& v);

RingVector vector_add(const RingVector& u, const RingVector& v);
RingVector vector_sub(const RingVector& u, const RingVector& v);
RingVector vector_scale(const RingElement& c, const RingVector& v);

} // namespace dvrforms
