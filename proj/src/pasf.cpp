#include "framekit/pasf.hpp"

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"

#include <cmath>
#include <sstream>

namespace framekit {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

void require_same_shape(const PAsf& a, const PAsf& b) {
    if (a.dim() != b.dim() || a.count() != b.count()) throw ShapeMismatch("pairs differ in dimension or length");
}

Matrix frame_inverse(const PAsf& pair) { return inverse(pair.frame_operator()); }

// ||row||_q is the norm of the functional x -> row * x on (K^d, l^p).
double functional_norm(const Matrix& row, double p) { return vec_pnorm(row.transpose(), conjugate_exponent(p)); }

double coefficient_norm(const Vector& c, double p) { return vec_pnorm(c, p); }

}  // namespace

PAsf::PAsf(double p, Matrix analysis, Matrix synthesis)
    : p_(p), analysis_(std::move(analysis)), synthesis_(std::move(synthesis)) {
    if (!(p_ >= 1.0) || std::isinf(p_)) throw InvalidParameter("p must lie in [1, inf)");
    if (analysis_.size() == 0 || synthesis_.size() == 0) throw InvalidInput("empty functional or vector family");
    if (synthesis_.rows() != analysis_.cols() || synthesis_.cols() != analysis_.rows()) {
        throw ShapeMismatch("analysis must be m x d and synthesis d x m");
    }
    if (!analysis_.allFinite() || !synthesis_.allFinite()) throw InvalidInput("entries must be finite");
}

PasfCheck check(const PAsf& pair, std::uint64_t seed) {
    PasfCheck out;
    const Matrix s = pair.frame_operator();
    out.upper = opnorm_interval(s, pair.p(), seed);
    out.is_pasf = is_invertible(s);
    if (out.is_pasf) out.lower = opnorm_interval(inverse(s), pair.p(), seed).reciprocal();
    return out;
}

PAsf from_shift_operators(const Matrix& u, const Matrix& v, double p) {
    if (u.rows() != v.cols() || u.cols() != v.rows()) throw ShapeMismatch("U must be m x d and V d x m");
    if (!is_invertible(v * u)) throw NotInvertible("VU is not invertible");
    return PAsf(p, u, v);
}

Matrix coefficient_projection(const PAsf& pair) { return pair.analysis() * frame_inverse(pair) * pair.synthesis(); }

PAsf canonical_dual(const PAsf& pair) {
    const Matrix s_inv = frame_inverse(pair);
    return PAsf(pair.p(), pair.analysis() * s_inv, s_inv * pair.synthesis());
}

bool dual_check(const PAsf& pair, const PAsf& other, double tol) {
    require_same_shape(pair, other);
    const Matrix id = identity(pair.dim());
    return approx_equal(pair.synthesis() * other.analysis(), id, tol) && approx_equal(other.synthesis() * pair.analysis(), id, tol);
}

PAsf dual_from_operators(const PAsf& pair, const Matrix& u, const Matrix& v) {
    const Eigen::Index m = pair.count();
    const Eigen::Index d = pair.dim();
    if (u.rows() != m || u.cols() != d || v.rows() != d || v.cols() != m) throw ShapeMismatch("U must be m x d and V d x m");
    const Matrix s_inv = frame_inverse(pair);
    const Matrix& f = pair.analysis();
    const Matrix& t = pair.synthesis();
    const Matrix correction = v * u - v * f * s_inv * t * u;
    const Matrix validity = s_inv + correction;
    // Measured against the cancelling terms, since a ratio of singular values
    // cannot see a 1 x 1 operator that is zero up to rounding.
    const double scale = spectral_norm(s_inv) + spectral_norm(v * u) + spectral_norm(v * f * s_inv * t * u);
    Eigen::JacobiSVD<Matrix> svd(validity);
    if (!is_invertible(validity) || svd.singularValues().tail(1)(0) <= kInvertibilityRatio * scale) throw NotADual("validity operator S^-1 + VU - V F S^-1 T U is singular");
    Matrix g = f * s_inv + u - f * s_inv * t * u;
    Matrix omega = s_inv * t + v - v * f * s_inv * t;
    return PAsf(pair.p(), std::move(g), std::move(omega));
}

std::optional<Similarity> similarity(const PAsf& pair, const PAsf& other, double tol) {
    require_same_shape(pair, other);
    if (!is_invertible(pair.frame_operator()) || !is_invertible(other.frame_operator())) return std::nullopt;
    const Matrix p1 = coefficient_projection(pair);
    const Matrix p2 = coefficient_projection(other);
    const double residual = max_abs(p1 - p2);
    if (!approx_equal(p1, p2, tol)) return std::nullopt;
    const Matrix s_inv = frame_inverse(pair);
    Similarity out;
    out.analysis_map = s_inv * pair.synthesis() * other.analysis();
    out.synthesis_map = other.synthesis() * pair.analysis() * s_inv;
    out.projection_residual = residual;
    if (!is_invertible(out.analysis_map) || !is_invertible(out.synthesis_map)) return std::nullopt;
    return out;
}

bool orthogonality_check(const PAsf& pair, const PAsf& other, double tol) {
    require_same_shape(pair, other);
    const double scale = std::max({1.0, max_abs(pair.analysis()), max_abs(other.analysis())}) *
                         std::max({1.0, max_abs(pair.synthesis()), max_abs(other.synthesis())});
    return max_abs(pair.synthesis() * other.analysis()) <= tol * scale &&
           max_abs(other.synthesis() * pair.analysis()) <= tol * scale;
}

PAsf interpolate(const PAsf& pair, const PAsf& other, const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    require_same_shape(pair, other);
    const Eigen::Index n = pair.dim();
    for (const Matrix* op : {&a, &b, &c, &d}) {
        if (op->rows() != n || op->cols() != n) throw ShapeMismatch("interpolation operators must be d x d");
    }
    std::vector<std::string> failures;
    const Matrix id = identity(n);
    if (max_abs(pair.frame_operator() - id) > kParsevalTol) failures.emplace_back("first pair is not Parseval");
    if (max_abs(other.frame_operator() - id) > kParsevalTol) failures.emplace_back("second pair is not Parseval");
    if (!orthogonality_check(pair, other)) failures.emplace_back("pairs are not orthogonal");
    if (!approx_equal(c * a + d * b, id)) failures.emplace_back("CA + DB differs from I");
    if (!failures.empty()) {
        std::ostringstream msg;
        for (std::size_t i = 0; i < failures.size(); ++i) msg << (i ? "; " : "") << failures[i];
        throw HypothesisViolated(msg.str());
    }
    return PAsf(pair.p(), pair.analysis() * a + other.analysis() * b, c * pair.synthesis() + d * other.synthesis());
}

double PasfDilation::norm(const Vector& coords) const {
    const Eigen::Index d = dilated.dim() - range_basis.cols();
    if (coords.size() != dilated.dim()) throw ShapeMismatch("coordinate vector has the wrong length");
    Vector full(d + range_basis.rows());
    full.head(d) = coords.head(d);
    full.tail(range_basis.rows()) = range_basis * coords.tail(range_basis.cols());
    return vec_pnorm(full, dilated.p());
}

PasfDilation dilate(const PAsf& pair) {
    const Eigen::Index m = pair.count();
    const Eigen::Index d = pair.dim();
    const Matrix complement = identity(m) - coefficient_projection(pair);
    // I - P is idempotent of rank m - d. A relative rank test misreads the
    // rounding noise left when m = d, so take the leading m - d directions.
    Eigen::JacobiSVD<Matrix> svd(complement, Eigen::ComputeFullU);
    Matrix basis = svd.matrixU().leftCols(m - d);
    Matrix coords = basis.adjoint() * complement;
    const Eigen::Index k = basis.cols();

    Matrix f1(m, d + k);
    f1.leftCols(d) = pair.analysis();
    f1.rightCols(k) = basis;
    Matrix t1(d + k, m);
    t1.topRows(d) = pair.synthesis();
    t1.bottomRows(k) = coords;

    PasfDilation out{PAsf(pair.p(), std::move(f1), std::move(t1)), std::move(basis), std::move(coords), complement, false};
    out.riesz = riesz_check(out.dilated, 1e-8);
    return out;
}

bool riesz_check(const PAsf& pair, double tol) {
    return approx_equal(coefficient_projection(pair), identity(pair.count()), tol);
}

PasfPerturbReport perturb_general(const PAsf& pair, const Matrix& replacement, const PasfPerturbParams& params) {
    const Eigen::Index d = pair.dim();
    const Eigen::Index m = pair.count();
    if (replacement.rows() != d || replacement.cols() != m) throw ShapeMismatch("replacement vectors must be d x m");
    if (params.alpha < 0.0 || params.beta < 0.0 || params.gamma < 0.0) throw InvalidParameter("parameters must be nonnegative");
    const double p = pair.p();
    const Matrix s_inv = frame_inverse(pair);
    const double dual_norm = opnorm_interval(pair.analysis() * s_inv, p, params.seed).hi;
    if (std::max(params.alpha + params.gamma * dual_norm, params.beta) >= 1.0) {
        throw HypothesisViolated("max{alpha + gamma ||theta_f S^-1||, beta} must be below 1");
    }
    PasfPerturbReport report;
    report.sampled_only = true;
    const Matrix difference = pair.synthesis() - replacement;
    Rng rng(params.seed);
    for (int s = 0; s < params.samples; ++s) {
        const Eigen::Index prefix = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
        Vector c = Vector::Zero(m);
        for (Eigen::Index n = 0; n < prefix; ++n) c(n) = rng.complex_normal();
        const double lhs = vec_pnorm(difference * c, p);
        const double rhs = params.alpha * vec_pnorm(pair.synthesis() * c, p) + params.gamma * coefficient_norm(c, p) +
                           params.beta * vec_pnorm(replacement * c, p);
        ++report.samples_checked;
        if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) ++report.samples_failed;
    }
    report.valid = report.samples_failed == 0;
    const double s_inv_norm = opnorm_interval(s_inv, p, params.seed).hi;
    const double synth_norm = opnorm_interval(pair.synthesis(), p, params.seed).hi;
    const double anal_norm = opnorm_interval(pair.analysis(), p, params.seed).hi;
    report.predicted_lower = (1.0 - (params.alpha + params.gamma * dual_norm)) / ((1.0 + params.beta) * s_inv_norm);
    report.predicted_upper =
        ((1.0 + params.alpha) / (1.0 - params.beta) * synth_norm + params.gamma / (1.0 - params.beta)) * anal_norm;
    return report;
}

PasfPerturbReport perturb_quadratic(const PAsf& pair, const Matrix& replacement, std::uint64_t seed) {
    const Eigen::Index d = pair.dim();
    const Eigen::Index m = pair.count();
    if (replacement.rows() != d || replacement.cols() != m) throw ShapeMismatch("replacement vectors must be d x m");
    const double p = pair.p();
    const double q = pair.q();
    Vector distances(m);
    for (Eigen::Index n = 0; n < m; ++n) distances(n) = vec_pnorm(pair.synthesis().col(n) - replacement.col(n), p);
    // Hoelder: ||sum c_n (tau_n - omega_n)|| <= (sum ||tau_n - omega_n||^q)^(1/q) ||c||_p.
    const double gamma = vec_pnorm(distances, q);
    const Matrix s_inv = frame_inverse(pair);
    const double dual_norm = opnorm_interval(pair.analysis() * s_inv, p, seed).hi;

    PasfPerturbReport report;
    report.deviation = gamma;
    report.valid = gamma * dual_norm < 1.0;
    if (report.valid) {
        const double s_inv_norm = opnorm_interval(s_inv, p, seed).hi;
        const double synth_norm = opnorm_interval(pair.synthesis(), p, seed).hi;
        const double anal_norm = opnorm_interval(pair.analysis(), p, seed).hi;
        report.predicted_lower = (1.0 - gamma * dual_norm) / s_inv_norm;
        report.predicted_upper = (synth_norm + gamma) * anal_norm;
    }
    return report;
}

PasfPerturbReport perturb_two_sided(const PAsf& pair, const Matrix& functionals, const Matrix& vectors, int condition) {
    const Eigen::Index d = pair.dim();
    const Eigen::Index m = pair.count();
    if (functionals.rows() != m || functionals.cols() != d || vectors.rows() != d || vectors.cols() != m) {
        throw ShapeMismatch("replacement families have the wrong shape");
    }
    if (condition < 1 || condition > 4) throw InvalidParameter("condition must be 1..4");
    const double p = pair.p();
    const Matrix s_inv = frame_inverse(pair);
    const Matrix& f = pair.analysis();
    const Matrix& t = pair.synthesis();
    double sum = 0.0;
    for (Eigen::Index n = 0; n < m; ++n) {
        const Matrix df = f.row(n) - functionals.row(n);
        const Vector dv = t.col(n) - vectors.col(n);
        switch (condition) {
            case 1:
                sum += functional_norm(df, p) * vec_pnorm(s_inv * t.col(n), p) +
                       functional_norm(functionals.row(n), p) * vec_pnorm(s_inv * dv, p);
                break;
            case 2:
                sum += functional_norm(df, p) * vec_pnorm(s_inv * vectors.col(n), p) +
                       functional_norm(f.row(n), p) * vec_pnorm(s_inv * dv, p);
                break;
            case 3:
                sum += functional_norm(df * s_inv, p) * vec_pnorm(t.col(n), p) +
                       functional_norm(functionals.row(n) * s_inv, p) * vec_pnorm(dv, p);
                break;
            default:
                sum += functional_norm(df * s_inv, p) * vec_pnorm(vectors.col(n), p) +
                       functional_norm(f.row(n) * s_inv, p) * vec_pnorm(dv, p);
                break;
        }
    }
    PasfPerturbReport report;
    report.deviation = sum;
    report.valid = sum < 1.0;
    return report;
}

Expansion expand_to_asf(const PAsf& weak, const PAsf& reconstruction, double lambda) {
    if (weak.dim() != reconstruction.dim()) throw ShapeMismatch("families live on different spaces");
    const Eigen::Index d = weak.dim();
    if (!approx_equal(reconstruction.frame_operator(), identity(d), kEqualityTol)) {
        throw InvalidInput("second family does not reconstruct: T_Q F_Q differs from I");
    }
    const Matrix s = weak.frame_operator();
    const Matrix appended = (identity(d) - s) * reconstruction.synthesis();
    const Eigen::Index m = weak.count();
    const Eigen::Index k = reconstruction.count();
    Matrix f(m + k, d);
    f.topRows(m) = weak.analysis();
    f.bottomRows(k) = reconstruction.analysis();
    Matrix t(d, m + k);
    t.leftCols(m) = weak.synthesis();
    t.rightCols(k) = appended;

    Expansion out{PAsf(weak.p(), std::move(f), std::move(t)), {}, 0};
    const double scale = std::max(1.0, max_abs(reconstruction.synthesis()));
    for (Eigen::Index n = 0; n < k; ++n) out.appended_nonzero.push_back(appended.col(n).cwiseAbs().maxCoeff() > 1e-12 * scale);
    const Matrix gap = lambda * identity(d) - s;
    out.rank_bound = max_abs(gap) <= 1e-12 * std::max(1.0, std::abs(lambda)) ? 0 : numerical_rank(gap);
    return out;
}

PAsf shift_pair(Eigen::Index d, double p) {
    if (d < 1) throw InvalidParameter("dimension must be positive");
    // R: K^d -> K^(d+1), x -> (0, x); L drops the first coordinate.
    Matrix right = Matrix::Zero(d + 1, d);
    right.bottomRows(d).setIdentity();
    Matrix left = Matrix::Zero(d, d + 1);
    left.rightCols(d).setIdentity();
    return PAsf(p, std::move(right), std::move(left));
}

}  // namespace framekit
