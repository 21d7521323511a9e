#pragma once

#include "framekit/metricframe.hpp"

#include <optional>

namespace framekit {

struct BesselConstants {
    double family = 0.0;   // b: metric p-Bessel bound of the functions
    double vectors = 0.0;  // d: q-Bessel bound of the vectors
    bool family_supplied = false;
    bool vectors_supplied = false;
};

// x -> sum_n symbol_n f_n(x) tau_n on a pointed sample. Vectors are the
// columns of a d x m matrix; the output space carries the l^r norm.
class Multiplier {
public:
    Multiplier(MetricSample sample, LipschitzFamily family, Matrix vectors, Vector symbol, double p,
               double output_exponent = 2.0, std::optional<double> family_bound = std::nullopt,
               std::optional<double> vector_bound = std::nullopt);

    const MetricSample& sample() const { return sample_; }
    const LipschitzFamily& family() const { return family_; }
    const Matrix& vectors() const { return vectors_; }
    const Vector& symbol() const { return symbol_; }
    double p() const { return p_; }
    double q() const { return conjugate_exponent(p_); }
    double output_exponent() const { return output_exponent_; }
    const BesselConstants& constants() const { return constants_; }
    Eigen::Index count() const { return symbol_.size(); }

    Vector apply(std::size_t point) const;
    Vector apply(const std::string& label) const { return apply(sample_.index_of(label)); }
    // Columns are the images of all sample points.
    Matrix image() const;

    Multiplier with_symbol(Vector symbol) const;
    Multiplier with_vectors(Matrix vectors) const;

private:
    MetricSample sample_;
    LipschitzFamily family_;
    Matrix vectors_;
    Vector symbol_;
    double p_;
    double output_exponent_;
    BesselConstants constants_;
};

// b: largest pairwise ratio (l^p of differences over distance).
double family_bessel_bound(const MetricSample& sample, const LipschitzFamily& family, double p);
// d: sup over functionals of norm one on (K^d, l^r) of (sum |phi(tau_n)|^q)^(1/q),
// the r'->q norm of the matrix whose rows are tau_n^T. Certified upper value.
double vector_bessel_bound(const Matrix& vectors, double q, double output_exponent);

struct BoundCheck {
    double measured = 0.0;
    double bound = 0.0;
    bool holds = false;
};

// Sampled Lipschitz number of a map given by its images of the sample points.
double sampled_lipschitz(const MetricSample& sample, const Matrix& images, double output_exponent);

BoundCheck lip_bound_check(const Multiplier& m);
// M minus the multiplier built from the first `cut` symbol entries.
BoundCheck tail_decay(const Multiplier& m, Eigen::Index cut);
BoundCheck continuity_symbol(const Multiplier& m, const Vector& other_symbol);
BoundCheck continuity_vectors(const Multiplier& m, const Matrix& other_vectors);

}  // namespace framekit
