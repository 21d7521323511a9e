#pragma once

#include "framekit/linops.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace framekit {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Finite metric space. Points may carry coordinates in R^k, in which case the
// distance is the l^r norm of the coordinate difference.
class MetricSample {
public:
    MetricSample(std::vector<std::string> labels, RealMatrix dist, std::optional<std::size_t> base = std::nullopt);

    static MetricSample from_points(const RealMatrix& coords, double norm_exponent = 2.0,
                                    std::optional<std::size_t> base = std::nullopt);
    // Points on the real line, labelled by their value.
    static MetricSample line(const std::vector<double>& xs, std::optional<std::size_t> base = std::nullopt);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const RealMatrix& dist() const { return dist_; }
    double distance(std::size_t i, std::size_t j) const { return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
    std::optional<std::size_t> base() const { return base_; }
    const std::optional<RealMatrix>& coords() const { return coords_; }
    double norm_exponent() const { return norm_exponent_; }
    std::size_t index_of(const std::string& label) const;

    // Distance from point j to an arbitrary coordinate vector.
    double distance_to(std::size_t j, const RealVector& point) const;

private:
    std::vector<std::string> labels_;
    RealMatrix dist_;
    std::optional<std::size_t> base_;
    std::optional<RealMatrix> coords_;
    double norm_exponent_ = 2.0;
};

// values(n, j) = f_n(x_j). remainder bounds the l^1 sum of Lipschitz numbers
// of the dropped tail and also its pointwise size, so it widens both ratio
// bounds and reconstruction deviations.
struct LipschitzFamily {
    Matrix values;
    double remainder = 0.0;

    Eigen::Index count() const { return values.rows(); }
    Eigen::Index points() const { return values.cols(); }
};

struct MetricBounds {
    double lower = 0.0;
    double upper = 0.0;
    double truncated_upper = 0.0;  // before widening by the remainder
};

MetricBounds metric_frame_bounds(const MetricSample& sample, const LipschitzFamily& family, double p);
double lipschitz_number(const MetricSample& sample, const Vector& row);

// log(a): f_0 = 1, f_n = (log x)^n / n!;  rational(a,b): f_n = (1 - 1/x)^n.
LipschitzFamily make_named_family(const std::string& spec, const MetricSample& sample, Eigen::Index terms);
LipschitzFamily log_family(double a, const MetricSample& sample, Eigen::Index terms);
LipschitzFamily rational_family(double a, double b, const MetricSample& sample, Eigen::Index terms);

enum class CombineMode { Scale, Add };

struct CombineReport {
    MetricBounds predicted;
    MetricBounds measured;
    bool contained = false;
};

// Scale: lambda * F. Add: F + lambda * G with G a Bessel family.
CombineReport combine(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g,
                      Complex lambda, CombineMode mode, double p);

struct PerturbCertificate {
    bool hypothesis_holds = false;
    double worst_margin = 0.0;  // min over pairs and prefixes of rhs - lhs
    MetricBounds predicted;
    MetricBounds measured;
    bool contained = false;
};

PerturbCertificate perturb_certificate(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g,
                                       double alpha, double beta, double gamma, double p);

// (sum_n Lip(f_n - g_n)^p)^(1/p) on the sample.
double perturbation_radius(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g, double p);

using Reconstructor = std::function<RealVector(const Vector&)>;

struct ReconstructionReport {
    double max_deviation = 0.0;
    double reconstructor_lip = 0.0;  // columns measured in l^p
};

ReconstructionReport reconstruction_check(const MetricSample& sample, const LipschitzFamily& family,
                                          const Reconstructor& reconstructor, double p = 1.0);

// a -> 1 + |sum_{n>=1} a_n|, the inverse of the log family.
Reconstructor log_reconstructor();

struct StabilityBounds {
    double lower = 0.0;
    double upper = 0.0;
};

StabilityBounds stability_bounds(double theta_lip, double reconstruction_lip, double alpha, double gamma);

}  // namespace framekit
