#pragma once

#include "framekit/linops.hpp"

#include <optional>
#include <vector>

namespace framekit {

// Pair of block families A_n, Psi_n : K^d -> K^r, n < m, kept as stacked
// analysis operators (m r) x d whose n-th block row is A_n (resp. Psi_n).
class OvfPair {
public:
    OvfPair(Matrix analysis_a, Matrix analysis_psi, Eigen::Index block_rows);
    static OvfPair from_blocks(const std::vector<Matrix>& a, const std::vector<Matrix>& psi);

    Eigen::Index dim() const { return theta_a_.cols(); }
    Eigen::Index block_rows() const { return r_; }
    Eigen::Index count() const { return theta_a_.rows() / r_; }

    Matrix a(Eigen::Index n) const { return theta_a_.middleRows(n * r_, r_); }
    Matrix psi(Eigen::Index n) const { return theta_psi_.middleRows(n * r_, r_); }
    const Matrix& theta_a() const { return theta_a_; }
    const Matrix& theta_psi() const { return theta_psi_; }

    Matrix frame_operator() const { return theta_psi_.adjoint() * theta_a_; }
    // sum_n Psi_n^* A_n accumulated block by block
    Matrix frame_operator_blockwise() const;
    // theta_A S^{-1} theta_Psi^*
    Matrix projection() const;

private:
    Matrix theta_a_;
    Matrix theta_psi_;
    Eigen::Index r_;
};

// L_n : K^r -> K^{mr}, embedding into block n.
Matrix block_embedding(Eigen::Index n, Eigen::Index count, Eigen::Index block_rows);

struct OvfCheck {
    bool is_ovf = false;
    bool factorable = true;  // automatic at finite size
    double lower = 0.0;      // 1 / ||S^{-1}||
    double upper = 0.0;      // ||S||
};

OvfCheck check(const OvfPair& pair);
bool is_parseval(const OvfPair& pair, double tol = kParsevalTol);

OvfPair from_factors(const Matrix& u, const Matrix& v, Eigen::Index block_rows);
OvfPair canonical_dual(const OvfPair& pair);

bool duality_check(const OvfPair& p, const OvfPair& q, double tol = 1e-9);
bool orthogonality_check(const OvfPair& p, const OvfPair& q, double tol = 1e-9);

struct OvfSimilarity {
    Matrix right_a;    // B_n = A_n right_a
    Matrix right_psi;  // Phi_n = Psi_n right_psi
    bool parseval_preserving = false;
};

std::optional<OvfSimilarity> similarity(const OvfPair& p, const OvfPair& q, double tol = 1e-8);

struct OvfClass {
    bool riesz = false;
    bool orthonormal = false;
};

OvfClass classify(const OvfPair& pair, double tol = 1e-8);

struct OvfDilation {
    OvfPair dilated;
    Matrix complement;  // orthonormal basis of range(theta_A)^perp, columns
};

OvfDilation dilate(const OvfPair& pair, double tol = 1e-8);

// Sine of the largest principal angle, 1 when the ranks differ.
double range_gap(const Matrix& x, const Matrix& y);

OvfPair interpolate(const OvfPair& p, const OvfPair& q, const Matrix& c, const Matrix& d, const Matrix& e,
                    const Matrix& f, double tol = 1e-8);
OvfPair direct_sum(const OvfPair& p, const OvfPair& q, double tol = 1e-9);

// Finite group given by its multiplication table over 0..n-1.
class FiniteGroup {
public:
    explicit FiniteGroup(std::vector<std::vector<int>> table);
    static FiniteGroup cyclic(int order);

    int order() const { return static_cast<int>(table_.size()); }
    int identity() const { return identity_; }
    int multiply(int g, int h) const { return table_[g][h]; }
    int inverse(int g) const { return inverse_[g]; }

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = 0;
};

// Unitary d x d matrices, rotations by 2 pi g / n in the first two coordinates.
std::vector<Matrix> rotation_representation(int order, Eigen::Index dim);

struct GroupFrame {
    OvfPair pair;
    double commutant_residual = 0.0;
    double gc1_residual = 0.0;
};

GroupFrame group_generated(const FiniteGroup& group, const std::vector<Matrix>& rep, const Matrix& a, const Matrix& psi);
// Largest defect among A_{gp}A_{gq}^* = A_pA_q^*, A_{gp}Psi_{gq}^* = A_pPsi_q^*, Psi_{gp}Psi_{gq}^* = Psi_pPsi_q^*.
double gc1_residual(const FiniteGroup& group, const OvfPair& pair);
double commutant_residual(const Matrix& op, const std::vector<Matrix>& rep);

struct OvfPerturbParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int samples = 256;
    std::uint64_t seed = kDefaultSeed;
};

struct OvfPerturbReport {
    bool hypothesis_holds = true;  // triple mode: no sampled violation found
    bool sampled_only = false;
    double condition = 0.0;        // triple: alpha + gamma ||theta_Psi (S^*)^{-1}||; quadratic: the weighted sum
    double predicted_lower = 0.0;
    double predicted_upper = 0.0;
    OvfCheck measured;
    bool contained = false;
};

OvfPerturbReport perturb_triple(const OvfPair& pair, const Matrix& theta_b, const OvfPerturbParams& params);
OvfPerturbReport perturb_quadratic(const OvfPair& pair, const Matrix& theta_b);

}  // namespace framekit
