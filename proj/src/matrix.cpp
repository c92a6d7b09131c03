#include "dvrforms/matrix.hpp"

#include <sstream>

namespace dvrforms {

RingMatrix::RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols) {
    e_.assign(rows_ * cols_, ring_->zero());
}

RingMatrix RingMatrix::identity(const RingPtr& ring, std::size_t n) {
    RingMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring->one();
    return m;
}

RingMatrix RingMatrix::zero(const RingPtr& ring, std::size_t rows, std::size_t cols) {
    return RingMatrix(ring, rows, cols);
}

RingMatrix RingMatrix::operator*(const RingMatrix& other) const {
    if (cols_ != other.rows_) throw ShapeMismatch("matrix product shape mismatch");
    RingMatrix r(ring_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < other.cols_; ++j) {
            RingElement acc = ring_->zero();
            for (std::size_t k = 0; k < cols_; ++k) acc = acc + at(i, k) * other.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

RingMatrix RingMatrix::operator+(const RingMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("matrix sum shape mismatch");
    RingMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + other.e_[i];
    return r;
}

RingMatrix RingMatrix::operator-(const RingMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("matrix diff shape mismatch");
    RingMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - other.e_[i];
    return r;
}

RingMatrix RingMatrix::scaled(const RingElement& c) const {
    RingMatrix r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = c * e_[i];
    return r;
}

RingMatrix RingMatrix::transpose() const {
    RingMatrix r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

RingMatrix RingMatrix::conj_transpose() const {
    RingMatrix r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).involute();
    return r;
}

RingMatrix RingMatrix::inverse() const {
    if (rows_ != cols_) throw ShapeMismatch("inverse of non-square matrix");
    const std::size_t n = rows_;
    RingMatrix a = *this;
    RingMatrix inv = identity(ring_, n);
    for (std::size_t col = 0; col < n; ++col) {
        // unit pivot in this column at or below the diagonal
        std::size_t piv = n;
        for (std::size_t i = col; i < n; ++i) {
            Valuation v = a.at(i, col).valuation();
            if (v.is_finite() && v.value == 0) {
                piv = i;
                break;
            }
        }
        if (piv == n) throw Degenerate("matrix is not invertible over the local ring");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        RingElement pinv = a.at(col, col).invert();
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) = pinv * a.at(col, j);
            inv.at(col, j) = pinv * inv.at(col, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            RingElement f = a.at(i, col);
            if (f.is_exact_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) = a.at(i, j) - f * a.at(col, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

RingVector RingMatrix::column(std::size_t j) const {
    RingVector v(rows_, ring_->zero());
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

void RingMatrix::set_column(std::size_t j, const RingVector& v) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

RingVector RingMatrix::apply(const RingVector& v) const {
    if (v.size() != cols_) throw ShapeMismatch("matrix apply shape mismatch");
    RingVector r(rows_, ring_->zero());
    for (std::size_t i = 0; i < rows_; ++i) {
        RingElement acc = ring_->zero();
        for (std::size_t k = 0; k < cols_; ++k) acc = acc + at(i, k) * v[k];
        r[i] = acc;
    }
    return r;
}

bool RingMatrix::payload_equal(const RingMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!e_[i].payload_equal(other.e_[i])) return false;
    return true;
}

bool RingMatrix::payload_is_identity() const {
    if (rows_ != cols_) return false;
    return payload_equal(identity(ring_, rows_));
}

bool RingMatrix::all_exact_zero() const {
    for (const auto& x : e_)
        if (!x.is_exact_zero()) return false;
    return true;
}

bool RingMatrix::all_payload_zero() const {
    for (const auto& x : e_)
        if (!x.payload_zero()) return false;
    return true;
}

RingMatrix RingMatrix::change_ring(const RingPtr& target) const {
    RingMatrix r(target, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).change_ring(target);
    return r;
}

RingMatrix RingMatrix::direct_sum(const RingMatrix& other) const {
    RingMatrix r(ring_, rows_ + other.rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < other.rows_; ++i)
        for (std::size_t j = 0; j < other.cols_; ++j)
            r.at(rows_ + i, cols_ + j) = other.at(i, j);
    return r;
}

std::string RingMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << "[ ";
        for (std::size_t j = 0; j < cols_; ++j) {
            os << at(i, j).to_string();
            if (j + 1 < cols_) os << ", ";
        }
        os << " ]\n";
    }
    return os.str();
}

RingElement pair_with(const RingMatrix& gram, const RingVector& u, const RingVector& v) {
    if (u.size() != gram.rows() || v.size() != gram.cols())
        throw ShapeMismatch("pair_with shape mismatch");
    RingElement acc = gram.ring()->zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_exact_zero()) continue;
        RingElement row = gram.ring()->zero();
        for (std::size_t j = 0; j < v.size(); ++j) row = row + gram.at(i, j) * v[j];
        acc = acc + u[i].involute() * row;
    }
    return acc;
}

RingVector vector_add(const RingVector& u, const RingVector& v) {
    RingVector r(u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] + v[i];
    return r;
}

RingVector vector_sub(const RingVector& u, const RingVector& v) {
    RingVector r(u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] - v[i];
    return r;
}

RingVector vector_scale(const RingElement& c, const RingVector& v) {
    RingVector r(v);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * v[i];
    return r;
}

} // namespace dvrforms
