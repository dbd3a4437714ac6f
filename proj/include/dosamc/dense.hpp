#ifndef DOSAMC_DENSE_HPP
#define DOSAMC_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dosamc/error.hpp"

namespace dosamc {

/// Row-major dense matrix of doubles. Small and value-semantic; the chains
/// handled here have at most a few hundred states.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    Matrix(std::initializer_list<std::initializer_list<double>> init)
    {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) {
                throw Error(ErrorCode::OutOfRange, "ragged matrix initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    double row_sum(std::size_t r) const
    {
        double s = 0.0;
        for (double v : row(r)) s += v;
        return s;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::OutOfRange, "matrix product dimension mismatch");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

/// LU factorization with partial pivoting, PA = LU packed into one matrix.
class LuFactorization {
public:
    explicit LuFactorization(Matrix a, double singular_tol = 1e-13)
        : lu_(std::move(a)), perm_(lu_.rows())
    {
        const std::size_t n = lu_.rows();
        if (n != lu_.cols()) throw Error(ErrorCode::OutOfRange, "LU of a non-square matrix");
        for (std::size_t k = 0; k < n; ++k) perm_[k] = k;

        double scale = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (double v : lu_.row(r)) scale = std::max(scale, std::abs(v));

        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pivot = k;
            for (std::size_t r = k + 1; r < n; ++r)
                if (std::abs(lu_(r, k)) > std::abs(lu_(pivot, k))) pivot = r;
            if (std::abs(lu_(pivot, k)) <= singular_tol * std::max(scale, 1.0)) {
                throw Error(ErrorCode::SingularSystem, "pivot vanished at column " + std::to_string(k));
            }
            if (pivot != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(pivot, c));
                std::swap(perm_[k], perm_[pivot]);
            }
            for (std::size_t r = k + 1; r < n; ++r) {
                const double f = lu_(r, k) / lu_(k, k);
                lu_(r, k) = f;
                if (f == 0.0) continue;
                for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
            }
        }
    }

    /// Solves A X = B column by column.
    Matrix solve(const Matrix& b) const
    {
        const std::size_t n = lu_.rows();
        Matrix x(n, b.cols());
        std::vector<double> y(n);
        for (std::size_t col = 0; col < b.cols(); ++col) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = b(perm_[i], col);
                for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
                y[i] = s;
            }
            for (std::size_t i = n; i-- > 0;) {
                double s = y[i];
                for (std::size_t k = i + 1; k < n; ++k) s -= lu_(i, k) * x(k, col);
                x(i, col) = s / lu_(i, i);
            }
        }
        return x;
    }

    Matrix inverse() const { return solve(Matrix::identity(lu_.rows())); }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

} // namespace dosamc

#endif // DOSAMC_DENSE_HPP
