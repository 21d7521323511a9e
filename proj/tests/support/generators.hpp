#pragma once

// Seeded generators for property tests. Everything draws from framekit::Rng so
// runs are reproducible across platforms.

#include "framekit/linops.hpp"
#include "framekit/ovf.hpp"
#include "framekit/rng.hpp"

#include <algorithm>
#include <vector>

namespace gen {

using framekit::Matrix;
using framekit::Rng;
using framekit::Vector;

inline Matrix complex_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    return m;
}

inline Matrix real_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

inline Vector complex_vector(Rng& rng, Eigen::Index n) { return complex_matrix(rng, n, 1).col(0); }

// Identity plus a bounded random part: condition number stays modest.
inline Matrix well_conditioned(Rng& rng, Eigen::Index n, double spread = 0.3) {
    Matrix m = complex_matrix(rng, n, n);
    m *= spread / std::max(1.0, framekit::spectral_norm(m));
    return Matrix::Identity(n, n) + m;
}

inline Matrix unitary(Rng& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(complex_matrix(rng, n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
}

// d x m synthesis matrix of a random frame: a random unitary block ensures spanning.
inline Matrix frame_synthesis(Rng& rng, Eigen::Index d, Eigen::Index m) {
    Matrix t = complex_matrix(rng, d, m);
    t.leftCols(d) += 2.0 * Matrix::Identity(d, d);
    return t;
}

inline std::vector<bool> subset_mask(Rng& rng, std::size_t m) {
    std::vector<bool> mask(m);
    for (std::size_t i = 0; i < m; ++i) mask[i] = rng.uniform() < 0.5;
    return mask;
}

}  // namespace gen

#include "framekit/pasf.hpp"

namespace gen {

// p-ASF with S = T F close to a positive definite matrix, so it is invertible.
inline framekit::PAsf pasf(Rng& rng, double p, Eigen::Index d, Eigen::Index m) {
    Matrix f = complex_matrix(rng, m, d);
    f.topRows(d) += 2.0 * Matrix::Identity(d, d);
    Matrix t = f.adjoint() + 0.3 * complex_matrix(rng, d, m);
    return framekit::PAsf(p, std::move(f), std::move(t));
}

inline double pick_exponent(Rng& rng) {
    static const double choices[] = {1.0, 1.5, 2.0, 3.0};
    return choices[rng.below(4)];
}

// Sorted distinct points in [lo, hi], endpoints included.
inline std::vector<double> line_points(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> xs{lo, hi};
    while (xs.size() < n) xs.push_back(rng.uniform(lo, hi));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

inline std::vector<double> evenly_spaced(std::size_t n, double lo, double hi) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

// Weak OVF with Psi a perturbation of A, so S stays invertible.
inline framekit::OvfPair ovf_pair(Rng& rng, Eigen::Index d, Eigen::Index r, Eigen::Index m) {
    Matrix a = complex_matrix(rng, m * r, d);
    a.topRows(std::min(m * r, d)) += 2.0 * Matrix::Identity(std::min(m * r, d), d);
    Matrix psi = a + 0.3 * complex_matrix(rng, m * r, d);
    return framekit::OvfPair(std::move(a), std::move(psi), r);
}

// Parseval pair with equal ranges: Psi = A S_A^{-1}.
inline framekit::OvfPair parseval_ovf(Rng& rng, Eigen::Index d, Eigen::Index r, Eigen::Index m) {
    Matrix a = complex_matrix(rng, m * r, d);
    a.topRows(std::min(m * r, d)) += 2.0 * Matrix::Identity(std::min(m * r, d), d);
    const Matrix sa = a.adjoint() * a;
    Matrix psi = a * framekit::inverse(sa);
    return framekit::OvfPair(std::move(a), std::move(psi), r);
}

}  // namespace gen

#include "framekit/exact_matrix.hpp"

namespace gen {

// Entries p/q with |p| <= 6, 1 <= q <= 4.
inline framekit::ExactMatrix<framekit::Rational> rational_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    framekit::ExactMatrix<framekit::Rational> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = framekit::Rational(rng.range(-6, 6), rng.range(1, 4));
    return m;
}

inline framekit::ExactMatrix<framekit::Rational> integer_matrix(Rng& rng, std::size_t rows, std::size_t cols, int bound = 4) {
    framekit::ExactMatrix<framekit::Rational> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.range(-bound, bound);
    return m;
}

}  // namespace gen
