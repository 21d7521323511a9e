#pragma once

#include "framekit/linops.hpp"
#include "framekit/pasf.hpp"
#include "framekit/subset.hpp"

namespace framekit {

// Homogeneous semi-inner product on (K^d, l^p):
// [x, y] = sum x_n conj(y_n) |y_n|^(p-2) / ||y||_p^(p-2), [x, 0] = 0.
Complex sip(const Vector& x, const Vector& y, double p);

// Row vector r with r * x = [x, y].
Matrix sip_functional(const Vector& y, double p);

// Pair with functionals f_n = [., omega_n] and vectors tau_n, both stored as
// columns of d x m matrices.
class SipPasf {
public:
    SipPasf(double p, Matrix omegas, Matrix taus);

    double p() const { return p_; }
    Eigen::Index dim() const { return omegas_.rows(); }
    Eigen::Index count() const { return omegas_.cols(); }
    const Matrix& omegas() const { return omegas_; }
    const Matrix& taus() const { return taus_; }

    // Row n is the functional [., omega_n].
    Matrix analysis() const;
    Matrix frame_operator() const { return taus_ * analysis(); }
    Matrix partial_operator(const Subset& subset) const;
    PAsf to_pasf() const { return PAsf(p_, analysis(), taus_); }

private:
    double p_;
    Matrix omegas_;
    Matrix taus_;
};

// Keeps omega_n and chooses tau_n so that S = I: T = pinv(F).
SipPasf parseval_completion(double p, const Matrix& omegas);

double general_identity_residual(const SipPasf& pair, const Subset& subset, const Vector& x);
double parseval_identity_residual(const SipPasf& pair, const Subset& subset, const Vector& x);

struct LowerBoundCheck {
    bool condition_holds = false;  // [(S_M - I/2)^2 x, x] >= -1e-10
    double value = 0.0;
    double threshold = 0.0;        // 0.75 ||x||_p^2
    bool passes = false;
};

LowerBoundCheck lower_bound_check(const SipPasf& pair, const Subset& subset, const Vector& x);

double operator_identity_residual(const SipPasf& pair, const Subset& subset);

}  // namespace framekit
