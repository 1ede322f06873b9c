#include "enlarge/linalg.hpp"

#include "enlarge/error.hpp"

#include <utility>

namespace enlarge {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::column(const Vec& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Vec Matrix::row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

Vec Matrix::col(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (sgn(a) == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

Vec Matrix::operator*(const Vec& v) const {
    if (cols_ != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix& Matrix::operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
}

bool Matrix::is_zero() const {
    for (const auto& x : data_)
        if (sgn(x) != 0) return false;
    return true;
}

RowEchelon row_reduce(const Matrix& a) {
    Matrix m = a;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && sgn(m(sel, col)) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
        const Rational inv = 1 / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || sgn(m(r, col)) == 0) continue;
            const Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& a) { return row_reduce(a).pivots.size(); }

std::optional<Vec> solve_any(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve_any rhs");
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    const RowEchelon e = row_reduce(aug);
    Vec x(a.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == a.cols()) return std::nullopt;
        x[e.pivots[i]] = e.reduced(i, a.cols());
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
    const std::size_t n = a.rows();
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
        aug(r, n + r) = 1;
    }
    const RowEchelon e = row_reduce(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw Error(ErrorCode::Unsolvable, "singular matrix");
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
    return inv;
}

Matrix pseudo_inverse(const Matrix& a) {
    const RowEchelon e = row_reduce(a);
    const std::size_t r = e.pivots.size();
    if (r == 0) return Matrix(a.cols(), a.rows());
    // a = c * f with c the pivot columns of a and f the nonzero rows of its RREF.
    Matrix c(a.rows(), r);
    Matrix f(r, a.cols());
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, e.pivots[j]);
        for (std::size_t k = 0; k < a.cols(); ++k) f(j, k) = e.reduced(j, k);
    }
    const Matrix ft = f.transpose();
    const Matrix ct = c.transpose();
    return ft * inverse(f * ft) * inverse(ct * c) * ct;
}

std::optional<Vec> min_norm_solution(const Matrix& a, const Vec& b) {
    Vec x = pseudo_inverse(a) * b;
    if (a * x != b) return std::nullopt;
    return x;
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec operator*(const Rational& s, const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

}  // namespace enlarge
