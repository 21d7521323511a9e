#pragma once

// Small dense matrix over an exact or floating field. Eigen cannot host the
// Boost rational type here, and the dilation code needs only block algebra
// and Gauss-Jordan elimination.

#include "framekit/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace framekit {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}
    ExactMatrix(std::initializer_list<std::initializer_list<S>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& row : init) {
            if (row.size() != cols_) throw ShapeMismatch("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ExactMatrix zero(std::size_t rows, std::size_t cols) { return ExactMatrix(rows, cols); }
    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeMismatch("block out of range");
        ExactMatrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    void set_block(std::size_t r0, std::size_t c0, const ExactMatrix& b) {
        if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw ShapeMismatch("block out of range");
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    // Assembles equally sized square blocks; empty entries are zero.
    static ExactMatrix from_blocks(const std::vector<std::vector<std::optional<ExactMatrix>>>& grid, std::size_t block) {
        const std::size_t br = grid.size(), bc = br ? grid.front().size() : 0;
        ExactMatrix out(br * block, bc * block);
        for (std::size_t i = 0; i < br; ++i) {
            if (grid[i].size() != bc) throw ShapeMismatch("ragged block grid");
            for (std::size_t j = 0; j < bc; ++j)
                if (grid[i][j]) {
                    if (grid[i][j]->rows() != block || grid[i][j]->cols() != block) throw ShapeMismatch("block has wrong size");
                    out.set_block(i * block, j * block, *grid[i][j]);
                }
        }
        return out;
    }

    ExactMatrix& operator+=(const ExactMatrix& o) {
        require_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ExactMatrix& operator-=(const ExactMatrix& o) {
        require_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ExactMatrix& operator*=(const S& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
    friend ExactMatrix operator-(ExactMatrix a) { return a *= S(-1); }
    friend ExactMatrix operator*(ExactMatrix a, const S& s) { return a *= s; }
    friend ExactMatrix operator*(const S& s, ExactMatrix a) { return a *= s; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw ShapeMismatch("inner dimensions differ");
        ExactMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (aik == S(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const S& v) { return v == S(0); });
    }

    S trace() const {
        if (!square()) throw ShapeMismatch("trace needs a square matrix");
        S t(0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    // Largest entry magnitude, converted to double.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(static_cast<double>(v)));
        return m;
    }

    ExactMatrix transpose() const {
        ExactMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    template <class T>
    ExactMatrix<T> cast() const {
        ExactMatrix<T> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = static_cast<T>((*this)(i, j));
        return out;
    }

private:
    void require_same(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

namespace detail {

inline bool negligible(const Rational& v, double) { return v == 0; }
inline bool negligible(double v, double scale) { return std::abs(v) <= 1e-12 * scale; }

}  // namespace detail

// Gauss-Jordan elimination; exact for rationals, partial pivoting for doubles.
template <class S>
std::optional<ExactMatrix<S>> try_inverse(const ExactMatrix<S>& m) {
    if (!m.square()) return std::nullopt;
    const std::size_t n = m.rows();
    ExactMatrix<S> a = m;
    ExactMatrix<S> inv = ExactMatrix<S>::identity(n);
    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = -1.0;
        for (std::size_t r = col; r < n; ++r) {
            const double mag = std::abs(static_cast<double>(a(r, col)));
            if (a(r, col) != S(0) && mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (a(pivot, col) == S(0) || detail::negligible(a(pivot, col), scale)) return std::nullopt;
        if (pivot != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        const S p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == S(0)) continue;
            const S f = a(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

template <class S>
ExactMatrix<S> exact_inverse(const ExactMatrix<S>& m, const std::string& what = "matrix") {
    auto inv = try_inverse(m);
    if (!inv) throw NotInvertible(what + " is not invertible");
    return *inv;
}

template <class S>
ExactMatrix<S> power(const ExactMatrix<S>& m, unsigned k) {
    ExactMatrix<S> out = ExactMatrix<S>::identity(m.rows());
    for (unsigned i = 0; i < k; ++i) out = out * m;
    return out;
}

// Zero test: exact for rationals, relative 1e-12 for doubles.
template <class S>
bool vanishes(const ExactMatrix<S>& residual, double scale = 1.0) {
    if constexpr (std::is_same_v<S, Rational>) {
        (void)scale;
        return residual.is_zero();
    } else {
        return residual.max_abs() <= 1e-12 * std::max(1.0, scale);
    }
}

// Parses "p/q", integers, or decimals into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);

}  // namespace framekit
