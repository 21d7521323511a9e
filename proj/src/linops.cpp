#include "framekit/linops.hpp"

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace framekit {

namespace {

void require_exponent(double p) {
    if (!(p >= 1.0)) throw InvalidParameter("norm exponent must be >= 1");
}

Complex phase(Complex z) {
    const double r = std::abs(z);
    return r == 0.0 ? Complex{1.0, 0.0} : z / r;
}

// Gradient direction of the l^p norm at y, normalized so <y, g> = ||y||_p.
Vector norm_gradient(const Vector& y, double p) {
    Vector g = Vector::Zero(y.size());
    if (std::isinf(p)) {
        Eigen::Index k = 0;
        y.cwiseAbs().maxCoeff(&k);
        g(k) = phase(y(k));
        return g;
    }
    const double norm = vec_pnorm(y, p);
    if (norm == 0.0) return g;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double mag = std::abs(y(i));
        if (mag == 0.0) continue;
        g(i) = phase(y(i)) * std::pow(mag / norm, p - 1.0);
    }
    return g;
}

Vector normalized(Vector x, double p) {
    const double n = vec_pnorm(x, p);
    if (n > 0.0) x /= n;
    return x;
}

double max_column_norm(const Matrix& a, double p) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) best = std::max(best, vec_pnorm(a.col(j), p));
    return best;
}

double max_row_norm(const Matrix& a, double q) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) best = std::max(best, vec_pnorm(a.row(i).transpose(), q));
    return best;
}

// Multi-start power-type ascent on ||Ax||_out / ||x||_in. Each step is
// monotone for p-norms; the result is a lower bound by construction.
double ascent_lower_bound(const Matrix& a, double p_in, double p_out, std::uint64_t seed) {
    const Eigen::Index n = a.cols();
    const double q_in = conjugate_exponent(p_in);
    std::vector<Vector> starts;
    for (Eigen::Index j = 0; j < n; ++j) starts.push_back(Vector::Unit(n, j));
    starts.push_back(Vector::Ones(n));
    Rng rng(seed);
    for (int s = 0; s < 8; ++s) {
        Vector x(n);
        for (Eigen::Index j = 0; j < n; ++j) x(j) = rng.complex_normal();
        starts.push_back(x);
    }
    double best = 0.0;
    for (auto& start : starts) {
        Vector x = normalized(start, p_in);
        for (int iter = 0; iter < 200; ++iter) {
            const Vector y = a * x;
            const double value = vec_pnorm(y, p_out);
            best = std::max(best, value);
            if (value == 0.0) break;
            const Vector z = a.adjoint() * norm_gradient(y, p_out);
            const Vector next = normalized(norm_gradient(z, q_in), p_in);
            if ((next - x).cwiseAbs().maxCoeff() < 1e-14) break;
            x = next;
        }
        best = std::max(best, vec_pnorm(a * x, p_out));
    }
    return best;
}

// ||I_n||_{r -> s} on K^n.
double identity_norm(Eigen::Index n, double r, double s) {
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const double inv_s = std::isinf(s) ? 0.0 : 1.0 / s;
    return std::max(1.0, std::pow(static_cast<double>(n), inv_s - inv_r));
}

double interpolation_upper_bound(const Matrix& a, double p) {
    const double n1 = max_column_norm(a, 1.0);
    const double ninf = max_row_norm(a, 1.0);
    const double n2 = spectral_norm(a);
    double hi = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
    if (p < 2.0) {
        hi = std::min(hi, std::pow(n1, 2.0 / p - 1.0) * std::pow(n2, 2.0 - 2.0 / p));
    } else {
        hi = std::min(hi, std::pow(n2, 2.0 / p) * std::pow(ninf, 1.0 - 2.0 / p));
    }
    return hi;
}

}  // namespace

NormInterval NormInterval::reciprocal() const {
    return {hi > 0.0 ? 1.0 / hi : kInfinity, lo > 0.0 ? 1.0 / lo : kInfinity};
}

NormInterval operator*(const NormInterval& a, const NormInterval& b) { return {a.lo * b.lo, a.hi * b.hi}; }

double conjugate_exponent(double p) {
    require_exponent(p);
    if (p == 1.0) return kInfinity;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double vec_pnorm(const Vector& x, double p) {
    require_exponent(p);
    if (x.size() == 0) return 0.0;
    if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
    if (p == 1.0) return x.cwiseAbs().sum();
    if (p == 2.0) return x.norm();
    // Scale by the max entry to keep pow() in range.
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x(i)) / scale, p);
    return scale * std::pow(sum, 1.0 / p);
}

NormInterval opnorm_interval(const Matrix& a, double p, std::uint64_t seed) { return opnorm_interval(a, p, p, seed); }

NormInterval opnorm_interval(const Matrix& a, double p_in, double p_out, std::uint64_t seed) {
    require_exponent(p_in);
    require_exponent(p_out);
    if (a.size() == 0) throw InvalidInput("operator norm of an empty matrix");
    if (p_in == 1.0) {
        const double v = max_column_norm(a, p_out);
        return {v, v};
    }
    if (std::isinf(p_out)) {
        const double v = max_row_norm(a, conjugate_exponent(p_in));
        return {v, v};
    }
    if (p_in == 2.0 && p_out == 2.0) {
        const double v = spectral_norm(a);
        return {v, v};
    }
    const double lo = ascent_lower_bound(a, p_in, p_out, seed);
    double hi = spectral_norm(a) * identity_norm(a.cols(), p_in, 2.0) * identity_norm(a.rows(), 2.0, p_out);
    if (p_in == p_out) {
        hi = std::min(hi, interpolation_upper_bound(a, p_in));
    } else {
        hi = std::min(hi, interpolation_upper_bound(a, p_in) * identity_norm(a.rows(), p_in, p_out));
    }
    return {lo, std::max(lo, hi)};
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return s(s.size() - 1);
}

bool is_invertible(const Matrix& a) {
    if (a.rows() != a.cols() || a.size() == 0) return false;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    return s(0) > 0.0 && s(s.size() - 1) > kInvertibilityRatio * s(0);
}

Matrix inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("inverse of a non-square matrix");
    if (!is_invertible(a)) throw NotInvertible("matrix is singular to working precision");
    return a.fullPivLu().inverse();
}

bool is_hermitian(const Matrix& a, double tol) {
    return a.rows() == a.cols() && approx_equal(a, a.adjoint(), tol);
}

Extremes hermitian_extremes(const Matrix& s) {
    if (!is_hermitian(s)) throw InvalidInput("matrix is not Hermitian");
    const Matrix sym = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const auto& values = eig.eigenvalues();
    return {values(0), values(values.size() - 1)};
}

Matrix hermitian_power(const Matrix& s, double exponent) {
    if (!is_hermitian(s)) throw InvalidInput("matrix is not Hermitian");
    const Matrix sym = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    const auto& values = eig.eigenvalues();
    if (values(0) <= kInvertibilityRatio * std::abs(values(values.size() - 1))) {
        throw NotInvertible("matrix is not positive definite");
    }
    Eigen::VectorXd powered(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) powered(i) = std::pow(values(i), exponent);
    const Matrix& vecs = eig.eigenvectors();
    return vecs * powered.cast<Complex>().asDiagonal() * vecs.adjoint();
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0) return 0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) ++rank;
    }
    return rank;
}

Matrix range_basis(const Matrix& a, double rel_tol) {
    const std::size_t rank = numerical_rank(a, rel_tol);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    return svd.matrixU().leftCols(static_cast<Eigen::Index>(rank));
}

Matrix range_complement_basis(const Matrix& a, double rel_tol) {
    const auto rank = static_cast<Eigen::Index>(numerical_rank(a, rel_tol));
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(a.rows() - rank);
}

Matrix pseudo_inverse(const Matrix& a, double rel_tol) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    const double scale = std::max({1.0, max_abs(a), max_abs(b)});
    return max_abs(a - b) <= tol * scale;
}

}  // namespace framekit
