#include "framekit/multiplier.hpp"

#include "framekit/errors.hpp"

#include <cmath>

namespace framekit {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kBaseTol = 1e-12;

BoundCheck finish(double measured, double bound) { return {measured, bound, measured <= bound + kSlack}; }

}  // namespace

double family_bessel_bound(const MetricSample& sample, const LipschitzFamily& family, double p) {
    return metric_frame_bounds(sample, family, p).upper;
}

double vector_bessel_bound(const Matrix& vectors, double q, double output_exponent) {
    const double dual = conjugate_exponent(output_exponent);
    return opnorm_interval(vectors.transpose(), dual, q).hi;
}

Multiplier::Multiplier(MetricSample sample, LipschitzFamily family, Matrix vectors, Vector symbol, double p,
                       double output_exponent, std::optional<double> family_bound, std::optional<double> vector_bound)
    : sample_(std::move(sample)), family_(std::move(family)), vectors_(std::move(vectors)), symbol_(std::move(symbol)),
      p_(p), output_exponent_(output_exponent) {
    if (!(p_ >= 1.0)) throw InvalidParameter("exponent must be at least 1");
    if (!(output_exponent_ >= 1.0)) throw InvalidParameter("output exponent must be at least 1");
    const auto base = sample_.base();
    if (!base) throw InvalidInput("multipliers need a pointed sample");
    if (static_cast<std::size_t>(family_.points()) != sample_.size()) throw ShapeMismatch("family has wrong number of points");
    if (family_.count() != symbol_.size() || vectors_.cols() != symbol_.size())
        throw ShapeMismatch("symbol, family and vectors differ in length");
    if (!symbol_.allFinite() || !vectors_.allFinite() || !family_.values.allFinite()) throw InvalidInput("non-finite data");
    const double scale = std::max(1.0, max_abs(family_.values));
    if (family_.values.col(static_cast<Eigen::Index>(*base)).cwiseAbs().maxCoeff() > kBaseTol * scale)
        throw InvalidInput("functions must vanish at the base point");

    constants_.family_supplied = family_bound.has_value();
    constants_.vectors_supplied = vector_bound.has_value();
    constants_.family = family_bound ? *family_bound : family_bessel_bound(sample_, family_, p_);
    constants_.vectors = vector_bound ? *vector_bound : vector_bessel_bound(vectors_, q(), output_exponent_);
}

Vector Multiplier::apply(std::size_t point) const {
    if (point >= sample_.size()) throw InvalidInput("unknown point");
    return image().col(static_cast<Eigen::Index>(point));
}

Matrix Multiplier::image() const { return vectors_ * symbol_.asDiagonal() * family_.values; }

Multiplier Multiplier::with_symbol(Vector symbol) const {
    if (symbol.size() != symbol_.size()) throw ShapeMismatch("symbol has wrong length");
    Multiplier copy = *this;
    copy.symbol_ = std::move(symbol);
    return copy;
}

Multiplier Multiplier::with_vectors(Matrix vectors) const {
    if (vectors.rows() != vectors_.rows() || vectors.cols() != vectors_.cols()) throw ShapeMismatch("vectors have wrong shape");
    Multiplier copy = *this;
    copy.vectors_ = std::move(vectors);
    if (!constants_.vectors_supplied) copy.constants_.vectors = vector_bessel_bound(copy.vectors_, q(), output_exponent_);
    return copy;
}

double sampled_lipschitz(const MetricSample& sample, const Matrix& images, double output_exponent) {
    if (static_cast<std::size_t>(images.cols()) != sample.size()) throw ShapeMismatch("image has wrong number of points");
    if (sample.size() < 2) throw InvalidInput("need at least two points");
    double lip = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const double d = sample.distance(i, j);
            if (d <= 0.0) continue;
            const Vector diff = images.col(static_cast<Eigen::Index>(i)) - images.col(static_cast<Eigen::Index>(j));
            lip = std::max(lip, vec_pnorm(diff, output_exponent) / d);
        }
    return lip;
}

BoundCheck lip_bound_check(const Multiplier& m) {
    const double measured = sampled_lipschitz(m.sample(), m.image(), m.output_exponent());
    const double sup = m.count() ? m.symbol().cwiseAbs().maxCoeff() : 0.0;
    return finish(measured, m.constants().family * m.constants().vectors * sup);
}

BoundCheck tail_decay(const Multiplier& m, Eigen::Index cut) {
    if (cut < 0 || cut >= m.count()) throw InvalidParameter("cut must lie in [0, m)");
    Vector tail = m.symbol();
    tail.head(cut).setZero();
    const Multiplier rest = m.with_symbol(tail);
    const double measured = sampled_lipschitz(m.sample(), rest.image(), m.output_exponent());
    const double sup = tail.tail(m.count() - cut).cwiseAbs().maxCoeff();
    return finish(measured, m.constants().family * m.constants().vectors * sup);
}

BoundCheck continuity_symbol(const Multiplier& m, const Vector& other_symbol) {
    const Multiplier other = m.with_symbol(other_symbol);
    const double measured = sampled_lipschitz(m.sample(), other.image() - m.image(), m.output_exponent());
    return finish(measured, m.constants().family * m.constants().vectors * vec_pnorm(other_symbol - m.symbol(), m.p()));
}

BoundCheck continuity_vectors(const Multiplier& m, const Matrix& other_vectors) {
    const Multiplier other = m.with_vectors(other_vectors);
    const double measured = sampled_lipschitz(m.sample(), other.image() - m.image(), m.output_exponent());
    Vector gaps(m.count());
    for (Eigen::Index n = 0; n < m.count(); ++n) gaps(n) = vec_pnorm(other_vectors.col(n) - m.vectors().col(n), m.output_exponent());
    return finish(measured, m.constants().family * vec_pnorm(m.symbol(), m.p()) * vec_pnorm(gaps, m.q()));
}

}  // namespace framekit
