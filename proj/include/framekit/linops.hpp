#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>

namespace framekit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Shared numerical thresholds.
inline constexpr double kEqualityTol = 1e-9;
inline constexpr double kInvertibilityRatio = 1e-10;
inline constexpr double kParsevalTol = 1e-8;
inline constexpr double kRankTol = 1e-10;

inline constexpr std::uint64_t kDefaultSeed = 0x5eedf00dULL;

// Certified enclosure of a nonnegative quantity: lo <= true value <= hi.
struct NormInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool exact() const { return lo == hi; }
    bool contains(double value, double slack = 0.0) const { return value >= lo - slack && value <= hi + slack; }
    NormInterval reciprocal() const;
};

NormInterval operator*(const NormInterval& a, const NormInterval& b);

struct Extremes {
    double min = 0.0;
    double max = 0.0;
};

// Conjugate exponent q with 1/p + 1/q = 1.
double conjugate_exponent(double p);

double vec_pnorm(const Vector& x, double p);

// Operator norm of A from (K^cols, l^p) to (K^rows, l^p).
NormInterval opnorm_interval(const Matrix& a, double p, std::uint64_t seed = kDefaultSeed);

// Operator norm of A from l^p_in to l^p_out.
NormInterval opnorm_interval(const Matrix& a, double p_in, double p_out, std::uint64_t seed = kDefaultSeed);

double spectral_norm(const Matrix& a);
double smallest_singular_value(const Matrix& a);

bool is_invertible(const Matrix& a);
Matrix inverse(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = kEqualityTol);
Extremes hermitian_extremes(const Matrix& s);

// Positive power of a Hermitian positive definite matrix, e.g. -0.5 for S^{-1/2}.
Matrix hermitian_power(const Matrix& s, double exponent);

std::size_t numerical_rank(const Matrix& a, double rel_tol = kRankTol);

// Orthonormal columns spanning range(A), and the complement of that range.
Matrix range_basis(const Matrix& a, double rel_tol = kRankTol);
Matrix range_complement_basis(const Matrix& a, double rel_tol = kRankTol);

Matrix pseudo_inverse(const Matrix& a, double rel_tol = kRankTol);

// Max-entry comparison scaled by the larger operand, floored at 1.
bool approx_equal(const Matrix& a, const Matrix& b, double tol = kEqualityTol);
double max_abs(const Matrix& a);

}  // namespace framekit
