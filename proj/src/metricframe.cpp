#include "framekit/metricframe.hpp"

#include "framekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

namespace framekit {

namespace {

constexpr double kMetricTol = 1e-12;
constexpr double kBoundSlack = 1e-9;

double real_pnorm(const RealVector& v, double p) { return vec_pnorm(v.cast<Complex>(), p); }

void require_exponent(double p) {
    if (!(p >= 1.0)) throw InvalidParameter("exponent must be at least 1");
}

void require_family(const MetricSample& sample, const LipschitzFamily& family) {
    if (static_cast<std::size_t>(family.points()) != sample.size()) throw ShapeMismatch("family has wrong number of points");
    if (!family.values.allFinite()) throw InvalidInput("family values must be finite");
    if (!(family.remainder >= 0.0)) throw InvalidInput("remainder must be nonnegative");
}

// Calls visit(i, j, d) for every pair i < j at positive distance.
template <class Visit>
void for_each_pair(const MetricSample& sample, Visit&& visit) {
    if (sample.size() < 2) throw InvalidInput("need at least two points");
    bool any = false;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const double d = sample.distance(i, j);
            if (d <= 0.0) continue;
            any = true;
            visit(i, j, d);
        }
    }
    if (!any) throw InvalidInput("all distances vanish");
}

Vector column_difference(const LipschitzFamily& family, std::size_t i, std::size_t j) {
    return family.values.col(static_cast<Eigen::Index>(i)) - family.values.col(static_cast<Eigen::Index>(j));
}

bool inside(const MetricBounds& inner, const MetricBounds& outer) {
    return inner.lower >= outer.lower - kBoundSlack && inner.upper <= outer.upper + kBoundSlack;
}

std::vector<double> line_points(const MetricSample& sample) {
    const auto& coords = sample.coords();
    if (!coords || coords->rows() != 1) throw InvalidInput("named families need a sample on the real line");
    std::vector<double> xs(coords->cols());
    for (Eigen::Index j = 0; j < coords->cols(); ++j) xs[j] = (*coords)(0, j);
    return xs;
}

}  // namespace

MetricSample::MetricSample(std::vector<std::string> labels, RealMatrix dist, std::optional<std::size_t> base)
    : labels_(std::move(labels)), dist_(std::move(dist)), base_(base) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (dist_.rows() != n || dist_.cols() != n) throw ShapeMismatch("distance table does not match labels");
    if (base_ && *base_ >= labels_.size()) throw InvalidInput("base point out of range");
    if (!dist_.allFinite()) throw InvalidInput("distances must be finite");
    const double scale = std::max(1.0, n > 0 ? dist_.maxCoeff() : 0.0);
    const double tol = kMetricTol * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(dist_(i, i)) > tol) throw InvalidInput("distance table has nonzero diagonal");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (dist_(i, j) < -tol) throw InvalidInput("negative distance");
            if (std::abs(dist_(i, j) - dist_(j, i)) > tol) throw InvalidInput("distance table is not symmetric");
        }
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (dist_(i, j) > dist_(i, k) + dist_(k, j) + tol) throw InvalidInput("triangle inequality fails");
}

MetricSample MetricSample::from_points(const RealMatrix& coords, double norm_exponent, std::optional<std::size_t> base) {
    require_exponent(norm_exponent);
    const Eigen::Index n = coords.cols();
    RealMatrix dist = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = real_pnorm(coords.col(i) - coords.col(j), norm_exponent);
    std::vector<std::string> labels;
    for (Eigen::Index j = 0; j < n; ++j) labels.push_back("x" + std::to_string(j));
    MetricSample sample(std::move(labels), std::move(dist), base);
    sample.coords_ = coords;
    sample.norm_exponent_ = norm_exponent;
    return sample;
}

MetricSample MetricSample::line(const std::vector<double>& xs, std::optional<std::size_t> base) {
    RealMatrix coords(1, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) coords(0, static_cast<Eigen::Index>(j)) = xs[j];
    MetricSample sample = from_points(coords, 2.0, base);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        std::ostringstream os;
        os.precision(17);
        os << xs[j];
        sample.labels_[j] = os.str();
    }
    return sample;
}

std::size_t MetricSample::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidInput("unknown point '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

double MetricSample::distance_to(std::size_t j, const RealVector& point) const {
    if (!coords_) throw InvalidInput("sample has no coordinates");
    if (point.size() != coords_->rows()) throw ShapeMismatch("point has wrong dimension");
    return real_pnorm(coords_->col(static_cast<Eigen::Index>(j)) - point, norm_exponent_);
}

MetricBounds metric_frame_bounds(const MetricSample& sample, const LipschitzFamily& family, double p) {
    require_exponent(p);
    require_family(sample, family);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for_each_pair(sample, [&](std::size_t i, std::size_t j, double d) {
        const double ratio = vec_pnorm(column_difference(family, i, j), p) / d;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    });
    // Dropped terms only add to the l^p sum, so the lower ratio stays valid.
    return {lo, hi + family.remainder, hi};
}

double lipschitz_number(const MetricSample& sample, const Vector& row) {
    if (static_cast<std::size_t>(row.size()) != sample.size()) throw ShapeMismatch("function has wrong number of values");
    double lip = 0.0;
    for_each_pair(sample, [&](std::size_t i, std::size_t j, double d) {
        lip = std::max(lip, std::abs(row(static_cast<Eigen::Index>(i)) - row(static_cast<Eigen::Index>(j))) / d);
    });
    return lip;
}

LipschitzFamily log_family(double a, const MetricSample& sample, Eigen::Index terms) {
    if (!(a >= 1.0)) throw InvalidParameter("log family needs a >= 1");
    if (terms < 1) throw InvalidParameter("need at least one term");
    const auto xs = line_points(sample);
    double top = 0.0;
    for (double x : xs) {
        if (!(x >= a)) throw InvalidInput("point outside [a, inf) for the log family");
        top = std::max(top, std::log(x));
    }
    LipschitzFamily family;
    family.values = Matrix::Zero(terms, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double t = std::log(xs[j]);
        double term = 1.0;
        for (Eigen::Index n = 0; n < terms; ++n) {
            family.values(n, static_cast<Eigen::Index>(j)) = term;
            term *= t / static_cast<double>(n + 1);
        }
    }
    // Lip((log x)^n/n!) <= top^(n-1)/(n-1)! and the values are <= top^n/n!,
    // so both tails are dominated by sum_{k >= terms-1} top^k/k!.
    const auto k0 = static_cast<double>(terms - 1);
    if (top >= k0 + 1.0) {
        family.remainder = std::numeric_limits<double>::infinity();
    } else {
        const double lead = std::exp(k0 * std::log(std::max(top, 1e-300)) - std::lgamma(k0 + 1.0));
        family.remainder = (top == 0.0 ? (terms == 1 ? 1.0 : 0.0) : lead / (1.0 - top / (k0 + 1.0)));
    }
    return family;
}

LipschitzFamily rational_family(double a, double b, const MetricSample& sample, Eigen::Index terms) {
    if (!(a >= 1.0) || !(b > a)) throw InvalidParameter("rational family needs 1 <= a < b");
    if (terms < 1) throw InvalidParameter("need at least one term");
    const auto xs = line_points(sample);
    for (double x : xs)
        if (!(x >= a - kMetricTol && x <= b + kMetricTol)) throw InvalidInput("point outside [a, b] for the rational family");
    LipschitzFamily family;
    family.values = Matrix::Zero(terms, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double r = 1.0 - 1.0 / xs[j];
        double term = 1.0;
        for (Eigen::Index n = 0; n < terms; ++n) {
            family.values(n, static_cast<Eigen::Index>(j)) = term;
            term *= r;
        }
    }
    // r <= rb = 1 - 1/b. Values: sum_{n>=m} r^n <= rb^m b.
    // Lipschitz: sum_{n>=m} n rb^(n-1)/a^2 = (m rb^(m-1)/b + rb^m) b^2/a^2.
    const double rb = 1.0 - 1.0 / b;
    const auto m = static_cast<double>(terms);
    const double value_tail = std::pow(rb, m) * b;
    const double lip_tail = (m * std::pow(rb, m - 1.0) / b + std::pow(rb, m)) * b * b / (a * a);
    family.remainder = std::max(value_tail, lip_tail);
    return family;
}

LipschitzFamily make_named_family(const std::string& spec, const MetricSample& sample, Eigen::Index terms) {
    static const std::regex log_re(R"(\s*log\(\s*([-+0-9.eE]+)\s*\)\s*)");
    static const std::regex rat_re(R"(\s*rational\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, log_re)) return log_family(std::stod(m[1]), sample, terms);
    if (std::regex_match(spec, m, rat_re)) return rational_family(std::stod(m[1]), std::stod(m[2]), sample, terms);
    throw InvalidInput("unknown family '" + spec + "'");
}

CombineReport combine(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g,
                      Complex lambda, CombineMode mode, double p) {
    const MetricBounds fb = metric_frame_bounds(sample, f, p);
    const double scale = std::abs(lambda);
    CombineReport report;
    LipschitzFamily combined;
    if (mode == CombineMode::Scale) {
        combined = {lambda * f.values, scale * f.remainder};
        report.predicted = {scale * fb.lower, scale * fb.upper, scale * fb.truncated_upper};
    } else {
        if (g.values.rows() != f.values.rows()) throw ShapeMismatch("families differ in length");
        const MetricBounds gb = metric_frame_bounds(sample, g, p);
        const double spread = scale * gb.upper;
        if (spread >= fb.lower && spread > 0.0) throw HypothesisViolated("|lambda| must be below a_F / d_G");
        combined = {f.values + lambda * g.values, f.remainder + scale * g.remainder};
        report.predicted = {fb.lower - spread, fb.upper + spread, fb.truncated_upper + spread};
    }
    report.measured = metric_frame_bounds(sample, combined, p);
    report.contained = inside(report.measured, report.predicted);
    return report;
}

PerturbCertificate perturb_certificate(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g,
                                       double alpha, double beta, double gamma, double p) {
    if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0)) throw InvalidParameter("alpha, beta, gamma must be nonnegative");
    if (!(alpha < 1.0) || !(beta < 1.0)) throw InvalidParameter("alpha and beta must be below 1");
    if (g.values.rows() != f.values.rows()) throw ShapeMismatch("families differ in length");
    require_family(sample, g);
    const MetricBounds fb = metric_frame_bounds(sample, f, p);
    if (!(gamma < (1.0 - alpha) * fb.lower)) throw HypothesisViolated("gamma must be below (1 - alpha) a");

    PerturbCertificate cert;
    cert.worst_margin = std::numeric_limits<double>::infinity();
    const Eigen::Index terms = f.values.rows();
    for_each_pair(sample, [&](std::size_t i, std::size_t j, double d) {
        const Vector df = column_difference(f, i, j);
        const Vector dg = column_difference(g, i, j);
        double sf = 0.0, sg = 0.0, sr = 0.0;
        for (Eigen::Index n = 0; n < terms; ++n) {
            sf += std::pow(std::abs(df(n)), p);
            sg += std::pow(std::abs(dg(n)), p);
            sr += std::pow(std::abs(df(n) - dg(n)), p);
            const double lhs = std::pow(sr, 1.0 / p);
            const double rhs = alpha * std::pow(sf, 1.0 / p) + beta * std::pow(sg, 1.0 / p) + gamma * d;
            cert.worst_margin = std::min(cert.worst_margin, (rhs - lhs) / d);
        }
    });
    cert.hypothesis_holds = cert.worst_margin >= -kMetricTol;
    const double lo = ((1.0 - alpha) * fb.lower - gamma) / (1.0 + beta);
    const double hi = ((1.0 + alpha) * fb.upper + gamma) / (1.0 - beta);
    cert.predicted = {lo, hi, hi};
    cert.measured = metric_frame_bounds(sample, g, p);
    cert.contained = inside(cert.measured, cert.predicted);
    return cert;
}

double perturbation_radius(const MetricSample& sample, const LipschitzFamily& f, const LipschitzFamily& g, double p) {
    require_exponent(p);
    if (g.values.rows() != f.values.rows() || g.values.cols() != f.values.cols()) throw ShapeMismatch("families differ in shape");
    RealVector lips(f.values.rows());
    for (Eigen::Index n = 0; n < f.values.rows(); ++n) lips(n) = lipschitz_number(sample, (f.values.row(n) - g.values.row(n)).transpose());
    return real_pnorm(lips, p);
}

ReconstructionReport reconstruction_check(const MetricSample& sample, const LipschitzFamily& family,
                                          const Reconstructor& reconstructor, double p) {
    require_exponent(p);
    require_family(sample, family);
    const auto n = static_cast<std::size_t>(family.points());
    std::vector<RealVector> images;
    images.reserve(n);
    ReconstructionReport report;
    for (std::size_t j = 0; j < n; ++j) {
        images.push_back(reconstructor(family.values.col(static_cast<Eigen::Index>(j))));
        report.max_deviation = std::max(report.max_deviation, sample.distance_to(j, images.back()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double in = vec_pnorm(column_difference(family, i, j), p);
            if (in <= 0.0) continue;
            const double out = real_pnorm(images[i] - images[j], sample.norm_exponent());
            report.reconstructor_lip = std::max(report.reconstructor_lip, out / in);
        }
    }
    return report;
}

Reconstructor log_reconstructor() {
    return [](const Vector& a) {
        RealVector out(1);
        out(0) = 1.0 + std::abs(a.tail(a.size() - 1).sum());
        return out;
    };
}

StabilityBounds stability_bounds(double theta_lip, double reconstruction_lip, double alpha, double gamma) {
    if (!(theta_lip >= 0.0) || !(reconstruction_lip > 0.0)) throw InvalidParameter("Lipschitz norms must be positive");
    if (!(alpha >= 0.0 && gamma >= 0.0)) throw InvalidParameter("alpha and gamma must be nonnegative");
    const double shift = alpha * theta_lip + gamma;
    const double inv = 1.0 / reconstruction_lip;
    if (shift > inv) throw HypothesisViolated("alpha * Lip(theta) + gamma exceeds 1 / Lip(S)");
    return {inv - shift, theta_lip + shift};
}

}  // namespace framekit
