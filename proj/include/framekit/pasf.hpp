#pragma once

#include "framekit/linops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace framekit {

// Functional/vector pair on X = (K^d, l^p). Row n of the analysis matrix is
// the functional f_n, column n of the synthesis matrix is the vector tau_n.
class PAsf {
public:
    PAsf(double p, Matrix analysis, Matrix synthesis);

    double p() const { return p_; }
    double q() const { return conjugate_exponent(p_); }
    Eigen::Index dim() const { return analysis_.cols(); }
    Eigen::Index count() const { return analysis_.rows(); }

    const Matrix& analysis() const { return analysis_; }
    const Matrix& synthesis() const { return synthesis_; }
    Matrix frame_operator() const { return synthesis_ * analysis_; }

private:
    double p_;
    Matrix analysis_;
    Matrix synthesis_;
};

struct PasfCheck {
    bool is_pasf = false;
    NormInterval lower;  // 1 / ||S^-1||
    NormInterval upper;  // ||S||
};

PasfCheck check(const PAsf& pair, std::uint64_t seed = kDefaultSeed);

// f_n = zeta_n U, tau_n = V e_n.
PAsf from_shift_operators(const Matrix& u, const Matrix& v, double p);

// F S^-1 T, the idempotent on the coefficient space.
Matrix coefficient_projection(const PAsf& pair);

PAsf canonical_dual(const PAsf& pair);
bool dual_check(const PAsf& pair, const PAsf& other, double tol = kEqualityTol);
PAsf dual_from_operators(const PAsf& pair, const Matrix& u, const Matrix& v);

struct Similarity {
    Matrix analysis_map;   // g_n = f_n * analysis_map
    Matrix synthesis_map;  // omega_n = synthesis_map * tau_n
    double projection_residual = 0.0;
};

std::optional<Similarity> similarity(const PAsf& pair, const PAsf& other, double tol = 1e-8);
bool orthogonality_check(const PAsf& pair, const PAsf& other, double tol = kEqualityTol);

// (f_n A + g_n B, C tau_n + D omega_n) for orthogonal Parseval pairs with CA + DB = I.
PAsf interpolate(const PAsf& pair, const PAsf& other, const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

struct PasfDilation {
    PAsf dilated;                 // on K^d (+) range(I - P) in coordinates
    Matrix range_basis;           // m x k, columns span range(I - P)
    Matrix range_coordinates;     // k x m, (I - P) = range_basis * range_coordinates
    Matrix second_summands;       // m x m, column n is (I - P) e_n
    bool riesz = false;

    // Norm on the dilation space: l^p norm of (x, range_basis * y).
    double norm(const Vector& coords) const;
};

PasfDilation dilate(const PAsf& pair);
bool riesz_check(const PAsf& pair, double tol = kEqualityTol);

struct PasfPerturbReport {
    bool valid = false;
    bool sampled_only = false;
    double deviation = 0.0;  // quadratic: (sum ||tau_n - omega_n||^q)^(1/q); two-sided: the condition sum
    int samples_checked = 0;
    int samples_failed = 0;
    std::optional<double> predicted_lower;
    std::optional<double> predicted_upper;
};

struct PasfPerturbParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int samples = 256;
    std::uint64_t seed = kDefaultSeed;
};

PasfPerturbReport perturb_general(const PAsf& pair, const Matrix& replacement, const PasfPerturbParams& params);
PasfPerturbReport perturb_quadratic(const PAsf& pair, const Matrix& replacement, std::uint64_t seed = kDefaultSeed);
// Conditions (i)-(iv) for replacing both families: functionals g (m x d) and vectors omega (d x m).
PasfPerturbReport perturb_two_sided(const PAsf& pair, const Matrix& functionals, const Matrix& vectors, int condition);

struct Expansion {
    PAsf expanded;
    std::vector<bool> appended_nonzero;  // per appended pair, (I - S) omega_n != 0
    std::size_t rank_bound = 0;          // rank(lambda I - S)
};

// Appends (g_n, (I - S) omega_n) from a reconstructing family Q to a weak pair.
Expansion expand_to_asf(const PAsf& weak, const PAsf& reconstruction, double lambda = 1.0);

// Standard shift pair on K^d: f_n = zeta_n R with R x = (0, x), tau_n = L e_n.
PAsf shift_pair(Eigen::Index d, double p);

}  // namespace framekit
