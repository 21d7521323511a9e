#include "framekit/hframe.hpp"

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"

#include <cmath>
#include <numbers>
#include <regex>

namespace framekit {

namespace {

void require_frame(const HilbertFrame& frame) {
    if (!frame_bounds(frame).is_frame) throw NotAFrame("family does not span the space");
}

double norm_squared_of_coefficients(const Matrix& analysis, const Subset& subset, const Vector& h) {
    const Vector coeffs = analysis * h;
    double total = 0.0;
    for (std::size_t n : subset.members()) total += std::norm(coeffs(static_cast<Eigen::Index>(n)));
    return total;
}

}  // namespace

HilbertFrame::HilbertFrame(Matrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.rows() < 1 || synthesis_.cols() < 1) throw InvalidInput("frame needs at least one vector in a nonzero space");
    if (!synthesis_.allFinite()) throw InvalidInput("frame vectors must be finite");
}

HilbertFrame HilbertFrame::from_vectors(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw InvalidInput("empty vector family");
    Matrix synthesis(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t n = 0; n < vectors.size(); ++n) {
        if (vectors[n].size() != synthesis.rows()) throw ShapeMismatch("frame vectors differ in length");
        synthesis.col(static_cast<Eigen::Index>(n)) = vectors[n];
    }
    return HilbertFrame(std::move(synthesis));
}

Matrix HilbertFrame::partial_operator(const Subset& subset) const {
    if (subset.universe() != static_cast<std::size_t>(count())) throw ShapeMismatch("subset universe differs from frame size");
    Matrix s = Matrix::Zero(dim(), dim());
    for (std::size_t n : subset.members()) {
        const auto col = synthesis_.col(static_cast<Eigen::Index>(n));
        s += col * col.adjoint();
    }
    return s;
}

FrameBounds frame_bounds(const HilbertFrame& frame) {
    const Extremes e = hermitian_extremes(frame.frame_operator());
    FrameBounds bounds;
    bounds.upper = std::max(0.0, e.max);
    bounds.is_frame = e.max > 0.0 && e.min > kInvertibilityRatio * e.max;
    bounds.lower = bounds.is_frame ? e.min : 0.0;
    return bounds;
}

bool is_parseval(const HilbertFrame& frame, double tol) {
    const Matrix s = frame.frame_operator();
    return max_abs(s - Matrix::Identity(s.rows(), s.cols())) <= tol;
}

HilbertFrame canonical_dual(const HilbertFrame& frame) {
    require_frame(frame);
    return HilbertFrame(inverse(frame.frame_operator()) * frame.synthesis());
}

HilbertFrame parsevalize(const HilbertFrame& frame) {
    require_frame(frame);
    return HilbertFrame(hermitian_power(frame.frame_operator(), -0.5) * frame.synthesis());
}

FrameAlgorithmRun frame_algorithm(const HilbertFrame& frame, const Vector& h, int iterations) {
    const FrameBounds bounds = frame_bounds(frame);
    if (!bounds.is_frame) throw NotAFrame("frame algorithm needs a frame");
    if (h.size() != frame.dim()) throw ShapeMismatch("vector length differs from frame dimension");
    if (iterations < 0) throw InvalidParameter("iteration count must be nonnegative");
    const Matrix s = frame.frame_operator();
    const double step = 2.0 / (bounds.lower + bounds.upper);
    FrameAlgorithmRun run;
    run.ratio = (bounds.upper - bounds.lower) / (bounds.upper + bounds.lower);
    Vector current = Vector::Zero(h.size());
    double guarantee = h.norm();
    for (int k = 1; k <= iterations; ++k) {
        current = current + step * (s * (h - current));
        guarantee *= run.ratio;
        run.approximants.push_back(current);
        run.guaranteed.push_back(guarantee);
    }
    return run;
}

FrameIdentityReport frame_identity_residuals(const HilbertFrame& frame, const Subset& subset, const Vector& h,
                                             IdentityMode mode) {
    if (h.size() != frame.dim()) throw ShapeMismatch("vector length differs from frame dimension");
    const Subset rest = subset.complement();
    const Matrix analysis = frame.analysis();
    const Matrix s_in = frame.partial_operator(subset);
    const Matrix s_out = frame.partial_operator(rest);
    const double in_sum = norm_squared_of_coefficients(analysis, subset, h);
    const double out_sum = norm_squared_of_coefficients(analysis, rest, h);

    FrameIdentityReport report;
    report.norm_squared = h.squaredNorm();

    if (mode == IdentityMode::Parseval && !is_parseval(frame)) throw InvalidInput("frame is not Parseval within tolerance");
    if (frame_bounds(frame).is_frame) {
        // |<S_M h, S^-1 tau_n>|^2 summed over n equals ||dual analysis applied to S_M h||^2.
        const Matrix dual_analysis = canonical_dual(frame).analysis();
        const double lhs = in_sum - (dual_analysis * (s_in * h)).squaredNorm();
        const double rhs = out_sum - (dual_analysis * (s_out * h)).squaredNorm();
        report.general_residual = std::abs(lhs - rhs);
    } else if (mode == IdentityMode::General) {
        throw NotAFrame("general identity needs a frame");
    }

    if (mode == IdentityMode::Parseval) {
        const Vector in_image = s_in * h;
        const Vector out_image = s_out * h;
        const double lhs = in_sum - in_image.squaredNorm();
        const double rhs = out_sum - out_image.squaredNorm();
        report.parseval_residual = std::abs(lhs - rhs);
        report.lower_bound_value = in_sum + out_image.squaredNorm();
    }
    return report;
}

bool riesz_basis_check(const HilbertFrame& frame) {
    if (frame.count() != frame.dim()) return false;
    const Matrix gram = frame.synthesis().adjoint() * frame.synthesis();
    return is_invertible(gram);
}

NaimarkDilation naimark_dilate(const HilbertFrame& frame) {
    require_frame(frame);
    const Matrix analysis = frame.analysis();
    // range(I - P) is the orthogonal complement of range(analysis) in K^m.
    const Matrix complement = range_complement_basis(analysis);
    const Eigen::Index d = frame.dim();
    const Eigen::Index extra = complement.cols();
    Matrix lifted(d + extra, frame.count());
    lifted.topRows(d) = frame.synthesis();
    if (extra > 0) lifted.bottomRows(extra) = complement.adjoint();

    Matrix projection = Matrix::Zero(d + extra, d + extra);
    projection.topLeftCorner(d, d).setIdentity();
    return {HilbertFrame(std::move(lifted)), std::move(projection), d};
}

FramePerturbReport perturb_quadratic(const HilbertFrame& frame, const HilbertFrame& candidate) {
    if (frame.dim() != candidate.dim() || frame.count() != candidate.count()) throw ShapeMismatch("perturbed family shape differs");
    const FrameBounds bounds = frame_bounds(frame);
    if (!bounds.is_frame) throw NotAFrame("perturbation base must be a frame");
    FramePerturbReport report;
    report.deviation = (frame.synthesis() - candidate.synthesis()).squaredNorm();
    report.valid = report.deviation < bounds.lower;
    if (report.valid) {
        const double c = report.deviation;
        FrameBounds predicted;
        predicted.lower = bounds.lower * std::pow(1.0 - std::sqrt(c / bounds.lower), 2);
        predicted.upper = bounds.upper * std::pow(1.0 + std::sqrt(c / bounds.upper), 2);
        predicted.is_frame = true;
        report.predicted = predicted;
    }
    return report;
}

FramePerturbReport perturb_general(const HilbertFrame& frame, const HilbertFrame& candidate, const PerturbParams& params) {
    if (frame.dim() != candidate.dim() || frame.count() != candidate.count()) throw ShapeMismatch("perturbed family shape differs");
    const FrameBounds bounds = frame_bounds(frame);
    if (!bounds.is_frame) throw NotAFrame("perturbation base must be a frame");
    const double a = bounds.lower;
    const double b = bounds.upper;
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double gamma = params.gamma;
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) throw InvalidParameter("perturbation parameters must be nonnegative");
    if (std::max(alpha + gamma / std::sqrt(a), beta) >= 1.0) {
        throw HypothesisViolated("max{alpha + gamma/sqrt(a), beta} must be below 1");
    }

    FramePerturbReport report;
    report.sampled_only = true;
    const Matrix difference = frame.synthesis() - candidate.synthesis();
    Rng rng(params.seed);
    const Eigen::Index m = frame.count();
    for (int s = 0; s < params.samples; ++s) {
        const Eigen::Index prefix = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
        Vector c = Vector::Zero(m);
        for (Eigen::Index n = 0; n < prefix; ++n) c(n) = rng.complex_normal();
        const double lhs = (difference * c).norm();
        const double rhs = alpha * (frame.synthesis() * c).norm() + beta * (candidate.synthesis() * c).norm() + gamma * c.norm();
        ++report.samples_checked;
        if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) ++report.samples_failed;
    }
    report.valid = report.samples_failed == 0;
    const double shift_lower = (alpha + beta + gamma / std::sqrt(a)) / (1.0 + beta);
    const double shift_upper = (alpha + beta + gamma / std::sqrt(b)) / (1.0 - beta);
    FrameBounds predicted;
    predicted.lower = a * std::pow(1.0 - shift_lower, 2);
    predicted.upper = b * std::pow(1.0 + shift_upper, 2);
    predicted.is_frame = true;
    report.predicted = predicted;
    return report;
}

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors) {
    std::vector<Vector> out;
    out.reserve(vectors.size());
    for (const Vector& v : vectors) {
        if (!out.empty() && v.size() != out.front().size()) throw ShapeMismatch("vectors differ in length");
        Vector w = v;
        // Two passes of modified Gram-Schmidt keep the output orthonormal to round-off.
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : out) w -= q.dot(w) * q;
        }
        const double norm = w.norm();
        if (norm <= 1e-10 * std::max(1.0, v.norm())) throw DependentInput("vectors are linearly dependent");
        out.push_back(w / norm);
    }
    return out;
}

HilbertFrame mercedes_benz_frame() {
    const double h = std::sqrt(3.0) / 2.0;
    Matrix synthesis(2, 3);
    synthesis << 0.0, -h, h, 1.0, -0.5, -0.5;
    return HilbertFrame(std::move(synthesis));
}

HilbertFrame harmonic_frame(int dim, int count) {
    if (dim < 1 || count < dim) throw InvalidParameter("harmonic frame needs 1 <= n <= m");
    Matrix synthesis(dim, count);
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    for (int k = 1; k <= count; ++k) {
        for (int j = 1; j <= dim; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(k) / count;
            synthesis(j - 1, k - 1) = scale * std::polar(1.0, angle);
        }
    }
    return HilbertFrame(std::move(synthesis));
}

HilbertFrame lines_frame(int count) {
    if (count < 2) throw InvalidParameter("lines frame needs at least two lines");
    Matrix synthesis(2, count);
    for (int j = 0; j < count; ++j) {
        const double angle = std::numbers::pi * j / count;
        synthesis(0, j) = std::cos(angle);
        synthesis(1, j) = std::sin(angle);
    }
    return HilbertFrame(std::move(synthesis));
}

HilbertFrame doubled_first_basis_frame(int dim) {
    if (dim < 1) throw InvalidParameter("dimension must be positive");
    Matrix synthesis = Matrix::Zero(dim, dim + 1);
    synthesis(0, 0) = 1.0;
    synthesis.rightCols(dim).setIdentity();
    return HilbertFrame(std::move(synthesis));
}

HilbertFrame make_named_frame(const std::string& name) {
    static const std::regex harmonic(R"(harmonic\((\d+),(\d+)\))");
    static const std::regex lines(R"(lines\((\d+)\))");
    std::smatch match;
    if (name == "mercedes") return mercedes_benz_frame();
    if (std::regex_match(name, match, harmonic)) return harmonic_frame(std::stoi(match[1]), std::stoi(match[2]));
    if (std::regex_match(name, match, lines)) return lines_frame(std::stoi(match[1]));
    throw InvalidParameter("unknown named frame: " + name);
}

}  // namespace framekit
