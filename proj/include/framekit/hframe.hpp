#pragma once

#include "framekit/linops.hpp"
#include "framekit/subset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace framekit {

// Finite family tau_1..tau_m in K^d, stored as the columns of the synthesis
// matrix. The analysis matrix has rows conj(tau_n), so (analysis * h)_n = <h, tau_n>.
class HilbertFrame {
public:
    explicit HilbertFrame(Matrix synthesis);
    static HilbertFrame from_vectors(const std::vector<Vector>& vectors);

    Eigen::Index dim() const { return synthesis_.rows(); }
    Eigen::Index count() const { return synthesis_.cols(); }
    Vector vector(Eigen::Index n) const { return synthesis_.col(n); }

    const Matrix& synthesis() const { return synthesis_; }
    Matrix analysis() const { return synthesis_.adjoint(); }
    Matrix frame_operator() const { return synthesis_ * synthesis_.adjoint(); }

    // S_M h = sum over n in M of <h, tau_n> tau_n.
    Matrix partial_operator(const Subset& subset) const;

private:
    Matrix synthesis_;
};

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool is_frame = false;

    bool tight(double tol = kEqualityTol) const { return is_frame && upper - lower <= tol * std::max(1.0, upper); }
};

FrameBounds frame_bounds(const HilbertFrame& frame);
bool is_parseval(const HilbertFrame& frame, double tol = kParsevalTol);

HilbertFrame canonical_dual(const HilbertFrame& frame);
HilbertFrame parsevalize(const HilbertFrame& frame);

struct FrameAlgorithmRun {
    std::vector<Vector> approximants;  // h_1 .. h_n
    double ratio = 0.0;                // (b - a) / (b + a)
    std::vector<double> guaranteed;    // ratio^k * ||h||
};

FrameAlgorithmRun frame_algorithm(const HilbertFrame& frame, const Vector& h, int iterations);

enum class IdentityMode { General, Parseval };

struct FrameIdentityReport {
    double general_residual = 0.0;
    std::optional<double> parseval_residual;
    std::optional<double> lower_bound_value;  // compare against 0.75 * ||h||^2
    double norm_squared = 0.0;
};

FrameIdentityReport frame_identity_residuals(const HilbertFrame& frame, const Subset& subset, const Vector& h,
                                             IdentityMode mode);

bool riesz_basis_check(const HilbertFrame& frame);

struct NaimarkDilation {
    HilbertFrame family;      // omega_n in K^(d + extra)
    Matrix projection;        // orthogonal projection onto the first summand
    Eigen::Index base_dim = 0;
};

NaimarkDilation naimark_dilate(const HilbertFrame& frame);

struct PerturbParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int samples = 256;
    std::uint64_t seed = kDefaultSeed;
};

struct FramePerturbReport {
    bool valid = false;
    bool sampled_only = false;     // general mode never proves the hypothesis
    double deviation = 0.0;        // quadratic mode: sum ||tau_n - omega_n||^2
    int samples_checked = 0;
    int samples_failed = 0;
    std::optional<FrameBounds> predicted;
};

FramePerturbReport perturb_quadratic(const HilbertFrame& frame, const HilbertFrame& candidate);
FramePerturbReport perturb_general(const HilbertFrame& frame, const HilbertFrame& candidate, const PerturbParams& params);

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors);

HilbertFrame mercedes_benz_frame();
HilbertFrame harmonic_frame(int dim, int count);
HilbertFrame lines_frame(int count);
// e_1 followed by the standard basis of K^d.
HilbertFrame doubled_first_basis_frame(int dim);

// Accepts "mercedes", "harmonic(n,m)", "lines(n)".
HilbertFrame make_named_frame(const std::string& name);

}  // namespace framekit
