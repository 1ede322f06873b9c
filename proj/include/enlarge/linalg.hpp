#pragma once

#include "enlarge/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace enlarge {

/// Dense row-major matrix over the rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix column(const Vec& v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vec row(std::size_t r) const;
    Vec col(std::size_t c) const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Vec operator*(const Vec& v) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix& operator*=(const Rational& s);

    bool is_zero() const;
    bool operator==(const Matrix& rhs) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct RowEchelon {
    Matrix reduced;                   // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_reduce(const Matrix& a);
std::size_t rank(const Matrix& a);

/// Some solution of a x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve_any(const Matrix& a, const Vec& b);

/// Inverse of a square nonsingular matrix; throws Error(Unsolvable) when singular.
Matrix inverse(const Matrix& a);

/// Moore-Penrose pseudo-inverse, computed through a full-rank factorization.
Matrix pseudo_inverse(const Matrix& a);

/// The minimum Euclidean norm solution a^+ b, or nullopt when a x = b is inconsistent.
std::optional<Vec> min_norm_solution(const Matrix& a, const Vec& b);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rational& s, const Vec& v);

}  // namespace enlarge
