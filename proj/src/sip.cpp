#include "framekit/sip.hpp"

#include "framekit/errors.hpp"

#include <cmath>

namespace framekit {

namespace {

void require_exponent(double p) {
    if (!(p > 1.0) || std::isinf(p)) throw InvalidParameter("semi-inner product needs 1 < p < inf");
}

void require_parseval(const SipPasf& pair) {
    const Matrix s = pair.frame_operator();
    if (max_abs(s - Matrix::Identity(s.rows(), s.cols())) > kParsevalTol) throw InvalidInput("pair is not Parseval within tolerance");
}

void require_subset(const SipPasf& pair, const Subset& subset) {
    if (subset.universe() != static_cast<std::size_t>(pair.count())) throw ShapeMismatch("subset universe differs from family size");
}

// sum over n in M of [x, omega_n][tau_n, x]
Complex diagonal_sum(const SipPasf& pair, const Subset& subset, const Vector& x) {
    Complex total = 0.0;
    for (std::size_t n : subset.members()) {
        const auto i = static_cast<Eigen::Index>(n);
        total += sip(x, pair.omegas().col(i), pair.p()) * sip(pair.taus().col(i), x, pair.p());
    }
    return total;
}

// sum over n, k in M of [x, omega_n][tau_n, omega_k][tau_k, x]
Complex double_sum(const SipPasf& pair, const Subset& subset, const Vector& x) {
    Complex total = 0.0;
    const auto members = subset.members();
    for (std::size_t n : members) {
        const auto i = static_cast<Eigen::Index>(n);
        const Complex left = sip(x, pair.omegas().col(i), pair.p());
        for (std::size_t k : members) {
            const auto j = static_cast<Eigen::Index>(k);
            total += left * sip(pair.taus().col(i), pair.omegas().col(j), pair.p()) * sip(pair.taus().col(j), x, pair.p());
        }
    }
    return total;
}

}  // namespace

Matrix sip_functional(const Vector& y, double p) {
    require_exponent(p);
    Matrix row = Matrix::Zero(1, y.size());
    const double norm = vec_pnorm(y, p);
    if (norm == 0.0) return row;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
        const double mag = std::abs(y(n));
        if (mag == 0.0) continue;
        row(0, n) = std::conj(y(n)) * std::pow(mag / norm, p - 2.0);
    }
    return row;
}

Complex sip(const Vector& x, const Vector& y, double p) {
    if (x.size() != y.size()) throw ShapeMismatch("vectors differ in length");
    return (sip_functional(y, p) * x)(0, 0);
}

SipPasf::SipPasf(double p, Matrix omegas, Matrix taus) : p_(p), omegas_(std::move(omegas)), taus_(std::move(taus)) {
    require_exponent(p_);
    if (omegas_.size() == 0) throw InvalidInput("empty family");
    if (omegas_.rows() != taus_.rows() || omegas_.cols() != taus_.cols()) throw ShapeMismatch("omega and tau families differ in shape");
}

Matrix SipPasf::analysis() const {
    Matrix f(count(), dim());
    for (Eigen::Index n = 0; n < count(); ++n) f.row(n) = sip_functional(omegas_.col(n), p_);
    return f;
}

Matrix SipPasf::partial_operator(const Subset& subset) const {
    require_subset(*this, subset);
    Matrix s = Matrix::Zero(dim(), dim());
    for (std::size_t n : subset.members()) {
        const auto i = static_cast<Eigen::Index>(n);
        s += taus_.col(i) * sip_functional(omegas_.col(i), p_);
    }
    return s;
}

SipPasf parseval_completion(double p, const Matrix& omegas) {
    SipPasf seed(p, omegas, omegas);
    const Matrix f = seed.analysis();
    if (numerical_rank(f) < static_cast<std::size_t>(f.cols())) throw NotInvertible("functionals do not separate points");
    return SipPasf(p, omegas, pseudo_inverse(f));
}

double general_identity_residual(const SipPasf& pair, const Subset& subset, const Vector& x) {
    require_subset(pair, subset);
    const Matrix s_inv = inverse(pair.frame_operator());
    const double p = pair.p();
    auto side = [&](const Subset& part) {
        const Matrix s_part = pair.partial_operator(part);
        const Vector image = s_inv * (s_part * x);
        // [S_M x, dual omega_n] = [S^-1 S_M x, omega_n]; [dual tau_n, S_M^dagger x] = [S_M S^-1 tau_n, x].
        Complex second = 0.0;
        for (Eigen::Index n = 0; n < pair.count(); ++n) {
            second += sip(image, pair.omegas().col(n), p) * sip(s_part * (s_inv * pair.taus().col(n)), x, p);
        }
        return diagonal_sum(pair, part, x) - second;
    };
    return std::abs(side(subset) - side(subset.complement()));
}

double parseval_identity_residual(const SipPasf& pair, const Subset& subset, const Vector& x) {
    require_subset(pair, subset);
    require_parseval(pair);
    const Subset rest = subset.complement();
    const Complex lhs = diagonal_sum(pair, subset, x) - double_sum(pair, subset, x);
    const Complex rhs = diagonal_sum(pair, rest, x) - double_sum(pair, rest, x);
    return std::abs(lhs - rhs);
}

LowerBoundCheck lower_bound_check(const SipPasf& pair, const Subset& subset, const Vector& x) {
    require_subset(pair, subset);
    require_parseval(pair);
    const Matrix centered = pair.partial_operator(subset) - 0.5 * Matrix::Identity(pair.dim(), pair.dim());
    LowerBoundCheck out;
    out.condition_holds = sip(centered * (centered * x), x, pair.p()).real() >= -1e-10;
    out.value = (diagonal_sum(pair, subset, x) + double_sum(pair, subset.complement(), x)).real();
    const double norm = vec_pnorm(x, pair.p());
    out.threshold = 0.75 * norm * norm;
    out.passes = !out.condition_holds || out.value >= out.threshold - 1e-9;
    return out;
}

double operator_identity_residual(const SipPasf& pair, const Subset& subset) {
    require_subset(pair, subset);
    const Matrix in = pair.partial_operator(subset);
    const Matrix out = pair.partial_operator(subset.complement());
    return spectral_norm(in + out * out - out - in * in);
}

}  // namespace framekit
