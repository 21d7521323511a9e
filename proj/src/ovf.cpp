#include "framekit/ovf.hpp"

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace framekit {

namespace {

void require_same_shape(const OvfPair& p, const OvfPair& q) {
    if (p.dim() != q.dim() || p.block_rows() != q.block_rows() || p.count() != q.count())
        throw ShapeMismatch("weak OVF pairs differ in shape");
}

Matrix require_inverse(const OvfPair& pair) {
    const Matrix s = pair.frame_operator();
    if (!is_invertible(s)) throw NotInvertible("frame operator is not invertible");
    return inverse(s);
}

bool near(const Matrix& a, const Matrix& b, double tol) { return max_abs(a - b) <= tol * std::max(1.0, std::max(max_abs(a), max_abs(b))); }

void throw_joined(const std::vector<std::string>& failures) {
    if (failures.empty()) return;
    std::string msg;
    for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
    throw HypothesisViolated(msg);
}

}  // namespace

OvfPair::OvfPair(Matrix analysis_a, Matrix analysis_psi, Eigen::Index block_rows)
    : theta_a_(std::move(analysis_a)), theta_psi_(std::move(analysis_psi)), r_(block_rows) {
    if (r_ < 1) throw InvalidParameter("block size must be positive");
    if (theta_a_.rows() != theta_psi_.rows() || theta_a_.cols() != theta_psi_.cols()) throw ShapeMismatch("A and Psi stacks differ in shape");
    if (theta_a_.rows() == 0 || theta_a_.cols() == 0) throw InvalidInput("empty family");
    if (theta_a_.rows() % r_ != 0) throw ShapeMismatch("stack height is not a multiple of the block size");
}

OvfPair OvfPair::from_blocks(const std::vector<Matrix>& a, const std::vector<Matrix>& psi) {
    if (a.empty() || a.size() != psi.size()) throw ShapeMismatch("families must be nonempty and of equal length");
    const Eigen::Index r = a.front().rows(), d = a.front().cols();
    const auto m = static_cast<Eigen::Index>(a.size());
    Matrix ta(m * r, d), tp(m * r, d);
    for (Eigen::Index n = 0; n < m; ++n) {
        const Matrix& an = a[static_cast<std::size_t>(n)];
        const Matrix& pn = psi[static_cast<std::size_t>(n)];
        if (an.rows() != r || an.cols() != d || pn.rows() != r || pn.cols() != d) throw ShapeMismatch("blocks differ in shape");
        ta.middleRows(n * r, r) = an;
        tp.middleRows(n * r, r) = pn;
    }
    return OvfPair(std::move(ta), std::move(tp), r);
}

Matrix OvfPair::frame_operator_blockwise() const {
    Matrix s = Matrix::Zero(dim(), dim());
    for (Eigen::Index n = 0; n < count(); ++n) s += psi(n).adjoint() * a(n);
    return s;
}

Matrix OvfPair::projection() const {
    const Matrix s = frame_operator();
    if (!is_invertible(s)) throw NotInvertible("frame operator is not invertible");
    return theta_a_ * inverse(s) * theta_psi_.adjoint();
}

Matrix block_embedding(Eigen::Index n, Eigen::Index count, Eigen::Index block_rows) {
    if (n < 0 || n >= count) throw InvalidParameter("block index out of range");
    Matrix l = Matrix::Zero(count * block_rows, block_rows);
    l.middleRows(n * block_rows, block_rows).setIdentity();
    return l;
}

OvfCheck check(const OvfPair& pair) {
    const Matrix s = pair.frame_operator();
    OvfCheck out;
    out.upper = spectral_norm(s);
    out.is_ovf = is_invertible(s);
    out.lower = out.is_ovf ? smallest_singular_value(s) : 0.0;
    return out;
}

bool is_parseval(const OvfPair& pair, double tol) {
    return max_abs(pair.frame_operator() - Matrix::Identity(pair.dim(), pair.dim())) <= tol;
}

OvfPair from_factors(const Matrix& u, const Matrix& v, Eigen::Index block_rows) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) throw ShapeMismatch("U and V differ in shape");
    if (!is_invertible(v.adjoint() * u)) throw NotInvertible("V^* U is not invertible");
    return OvfPair(u, v, block_rows);
}

OvfPair canonical_dual(const OvfPair& pair) {
    const Matrix inv = require_inverse(pair);
    return OvfPair(pair.theta_a() * inv, pair.theta_psi() * inv.adjoint(), pair.block_rows());
}

bool duality_check(const OvfPair& p, const OvfPair& q, double tol) {
    require_same_shape(p, q);
    const Matrix id = Matrix::Identity(p.dim(), p.dim());
    return max_abs(p.theta_psi().adjoint() * q.theta_a() - id) <= tol && max_abs(q.theta_psi().adjoint() * p.theta_a() - id) <= tol;
}

bool orthogonality_check(const OvfPair& p, const OvfPair& q, double tol) {
    require_same_shape(p, q);
    return max_abs(p.theta_psi().adjoint() * q.theta_a()) <= tol && max_abs(q.theta_psi().adjoint() * p.theta_a()) <= tol;
}

std::optional<OvfSimilarity> similarity(const OvfPair& p, const OvfPair& q, double tol) {
    require_same_shape(p, q);
    const Matrix s = p.frame_operator();
    if (!is_invertible(s) || !is_invertible(q.frame_operator())) return std::nullopt;
    if (!near(p.projection(), q.projection(), tol)) return std::nullopt;
    const Matrix inv = inverse(s);
    OvfSimilarity out;
    out.right_a = inv * p.theta_psi().adjoint() * q.theta_a();
    out.right_psi = inv.adjoint() * p.theta_a().adjoint() * q.theta_psi();
    if (!is_invertible(out.right_a) || !is_invertible(out.right_psi)) return std::nullopt;
    // the pair must actually be reproduced, not only share a projection
    if (!near(p.theta_a() * out.right_a, q.theta_a(), tol) || !near(p.theta_psi() * out.right_psi, q.theta_psi(), tol)) return std::nullopt;
    out.parseval_preserving = max_abs(out.right_psi.adjoint() * out.right_a - Matrix::Identity(p.dim(), p.dim())) <= tol;
    return out;
}

OvfClass classify(const OvfPair& pair, double tol) {
    const Matrix proj = pair.projection();
    OvfClass out;
    out.riesz = max_abs(proj - Matrix::Identity(proj.rows(), proj.cols())) <= tol;
    if (!is_parseval(pair, tol)) return out;
    const Matrix cross = pair.theta_a() * pair.theta_psi().adjoint();
    out.orthonormal = max_abs(cross - Matrix::Identity(cross.rows(), cross.cols())) <= tol;
    return out;
}

double range_gap(const Matrix& x, const Matrix& y) {
    const Matrix qx = range_basis(x), qy = range_basis(y);
    if (qx.cols() != qy.cols()) return 1.0;
    if (qx.cols() == 0) return 0.0;
    return spectral_norm(qy - qx * (qx.adjoint() * qy));
}

OvfDilation dilate(const OvfPair& pair, double tol) {
    std::vector<std::string> failures;
    if (!is_parseval(pair, tol)) failures.emplace_back("pair is not Parseval");
    if (range_gap(pair.theta_a(), pair.theta_psi()) > tol) failures.emplace_back("ranges of theta_A and theta_Psi differ");
    if (failures.empty()) {
        const Matrix proj = pair.projection();
        if (max_abs(proj * proj - proj) > tol) failures.emplace_back("P_{A,Psi} is not idempotent");
        if (max_abs(proj - proj.adjoint()) > tol) failures.emplace_back("P_{A,Psi} is not Hermitian");
    }
    throw_joined(failures);

    // range(I - P) = range(theta_A)^perp; B_n(h + g) = A_n h + L_n^* Q g.
    const Matrix complement = range_complement_basis(pair.theta_a());
    const Eigen::Index d = pair.dim(), extra = complement.cols(), rows = pair.theta_a().rows();
    Matrix ta(rows, d + extra), tp(rows, d + extra);
    ta.leftCols(d) = pair.theta_a();
    tp.leftCols(d) = pair.theta_psi();
    if (extra > 0) {
        ta.rightCols(extra) = complement;
        tp.rightCols(extra) = complement;
    }
    return {OvfPair(std::move(ta), std::move(tp), pair.block_rows()), complement};
}

OvfPair interpolate(const OvfPair& p, const OvfPair& q, const Matrix& c, const Matrix& d, const Matrix& e,
                    const Matrix& f, double tol) {
    require_same_shape(p, q);
    const Eigen::Index n = p.dim();
    for (const Matrix* m : {&c, &d, &e, &f})
        if (m->rows() != n || m->cols() != n) throw ShapeMismatch("interpolation operators must be d x d");
    std::vector<std::string> failures;
    if (!is_parseval(p, tol)) failures.emplace_back("first pair is not Parseval");
    if (!is_parseval(q, tol)) failures.emplace_back("second pair is not Parseval");
    if (!orthogonality_check(p, q, tol)) failures.emplace_back("pairs are not orthogonal");
    if (max_abs(c.adjoint() * e + d.adjoint() * f - Matrix::Identity(n, n)) > tol) failures.emplace_back("C^*E + D^*F != I");
    throw_joined(failures);
    return OvfPair(p.theta_a() * c + q.theta_a() * d, p.theta_psi() * e + q.theta_psi() * f, p.block_rows());
}

OvfPair direct_sum(const OvfPair& p, const OvfPair& q, double tol) {
    require_same_shape(p, q);
    if (!orthogonality_check(p, q, tol)) throw HypothesisViolated("pairs are not orthogonal");
    const Eigen::Index rows = p.theta_a().rows(), d = p.dim();
    Matrix ta(rows, 2 * d), tp(rows, 2 * d);
    ta << p.theta_a(), q.theta_a();
    tp << p.theta_psi(), q.theta_psi();
    return OvfPair(std::move(ta), std::move(tp), p.block_rows());
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int n = order();
    if (n == 0) throw InvalidInput("group must be nonempty");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw InvalidInput("multiplication table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw InvalidInput("multiplication table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) throw InvalidInput("no identity element");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw InvalidInput("multiplication is not associative");
    inverse_.assign(static_cast<std::size_t>(n), -1);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (table_[g][h] == identity_ && table_[h][g] == identity_) inverse_[g] = h;
    for (int g = 0; g < n; ++g)
        if (inverse_[g] < 0) throw InvalidInput("element without inverse");
}

FiniteGroup FiniteGroup::cyclic(int order) {
    if (order < 1) throw InvalidParameter("group order must be positive");
    std::vector<std::vector<int>> table(static_cast<std::size_t>(order), std::vector<int>(static_cast<std::size_t>(order)));
    for (int g = 0; g < order; ++g)
        for (int h = 0; h < order; ++h) table[g][h] = (g + h) % order;
    return FiniteGroup(std::move(table));
}

std::vector<Matrix> rotation_representation(int order, Eigen::Index dim) {
    if (dim < 2) throw InvalidParameter("rotations need dimension at least 2");
    std::vector<Matrix> rep;
    for (int g = 0; g < order; ++g) {
        const double t = 2.0 * std::numbers::pi * g / order;
        Matrix u = Matrix::Identity(dim, dim);
        u(0, 0) = std::cos(t);
        u(0, 1) = -std::sin(t);
        u(1, 0) = std::sin(t);
        u(1, 1) = std::cos(t);
        rep.push_back(std::move(u));
    }
    return rep;
}

double commutant_residual(const Matrix& op, const std::vector<Matrix>& rep) {
    double worst = 0.0;
    for (const Matrix& u : rep) worst = std::max(worst, spectral_norm(op * u - u * op));
    return worst;
}

double gc1_residual(const FiniteGroup& group, const OvfPair& pair) {
    if (pair.count() != group.order()) throw ShapeMismatch("family must be indexed by the group");
    const int n = group.order();
    double worst = 0.0;
    for (int g = 0; g < n; ++g)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                const int gp = group.multiply(g, p), gq = group.multiply(g, q);
                worst = std::max(worst, spectral_norm(pair.a(gp) * pair.a(gq).adjoint() - pair.a(p) * pair.a(q).adjoint()));
                worst = std::max(worst, spectral_norm(pair.a(gp) * pair.psi(gq).adjoint() - pair.a(p) * pair.psi(q).adjoint()));
                worst = std::max(worst, spectral_norm(pair.psi(gp) * pair.psi(gq).adjoint() - pair.psi(p) * pair.psi(q).adjoint()));
            }
    return worst;
}

GroupFrame group_generated(const FiniteGroup& group, const std::vector<Matrix>& rep, const Matrix& a, const Matrix& psi) {
    const int n = group.order();
    if (static_cast<int>(rep.size()) != n) throw ShapeMismatch("representation must list one matrix per element");
    const Eigen::Index d = a.cols();
    if (psi.rows() != a.rows() || psi.cols() != d) throw ShapeMismatch("A and Psi differ in shape");
    for (const Matrix& u : rep) {
        if (u.rows() != d || u.cols() != d) throw ShapeMismatch("representation has wrong dimension");
        if (max_abs(u.adjoint() * u - Matrix::Identity(d, d)) > kEqualityTol) throw InvalidInput("representation is not unitary");
    }
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (max_abs(rep[g] * rep[h] - rep[group.multiply(g, h)]) > kEqualityTol) throw InvalidInput("representation is not a homomorphism");

    std::vector<Matrix> as, ps;
    for (int g = 0; g < n; ++g) {
        as.push_back(a * rep[group.inverse(g)]);
        ps.push_back(psi * rep[group.inverse(g)]);
    }
    OvfPair pair = OvfPair::from_blocks(as, ps);
    const double comm = commutant_residual(pair.frame_operator(), rep);
    const double gc1 = gc1_residual(group, pair);
    return {std::move(pair), comm, gc1};
}

OvfPerturbReport perturb_triple(const OvfPair& pair, const Matrix& theta_b, const OvfPerturbParams& params) {
    if (theta_b.rows() != pair.theta_a().rows() || theta_b.cols() != pair.dim()) throw ShapeMismatch("perturbed family has wrong shape");
    if (!(params.alpha >= 0.0 && params.beta >= 0.0 && params.gamma >= 0.0)) throw InvalidParameter("alpha, beta, gamma must be nonnegative");
    const Matrix inv_adj = require_inverse(pair).adjoint();
    const double weight = spectral_norm(pair.theta_psi() * inv_adj);
    OvfPerturbReport report;
    report.sampled_only = true;
    report.condition = params.alpha + params.gamma * weight;
    if (!(std::max(report.condition, params.beta) < 1.0)) throw HypothesisViolated("max{alpha + gamma ||theta_Psi (S^*)^{-1}||, beta} must be below 1");

    const Eigen::Index r = pair.block_rows(), m = pair.count(), rows = m * r;
    const Matrix diff = pair.theta_a() - theta_b;
    Rng rng(params.seed);
    for (int s = 0; s < params.samples && report.hypothesis_holds; ++s) {
        Vector y(rows);
        for (Eigen::Index i = 0; i < rows; ++i) y(i) = rng.complex_normal();
        for (Eigen::Index k = 1; k <= m; ++k) {
            const Eigen::Index top = k * r;
            const Vector head = y.head(top);
            const double lhs = (diff.topRows(top).adjoint() * head).norm();
            const double rhs = params.alpha * (pair.theta_a().topRows(top).adjoint() * head).norm() +
                               params.beta * (theta_b.topRows(top).adjoint() * head).norm() + params.gamma * head.norm();
            if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
                report.hypothesis_holds = false;
                break;
            }
        }
    }
    report.predicted_lower = (1.0 - report.condition) / ((1.0 + params.beta) * spectral_norm(inv_adj));
    report.predicted_upper = spectral_norm(pair.theta_psi()) * ((1.0 + params.alpha) * spectral_norm(pair.theta_a()) + params.gamma) / (1.0 - params.beta);
    report.measured = check(OvfPair(theta_b, pair.theta_psi(), r));
    report.contained = report.measured.is_ovf && report.measured.lower >= report.predicted_lower - 1e-9 &&
                       report.measured.upper <= report.predicted_upper + 1e-9;
    return report;
}

OvfPerturbReport perturb_quadratic(const OvfPair& pair, const Matrix& theta_b) {
    if (theta_b.rows() != pair.theta_a().rows() || theta_b.cols() != pair.dim()) throw ShapeMismatch("perturbed family has wrong shape");
    const Matrix inv_adj = require_inverse(pair).adjoint();
    const Eigen::Index r = pair.block_rows();
    double weighted = 0.0, squares = 0.0;
    for (Eigen::Index n = 0; n < pair.count(); ++n) {
        const double gap = spectral_norm(pair.a(n) - theta_b.middleRows(n * r, r));
        weighted += gap * spectral_norm(pair.psi(n) * inv_adj);
        squares += gap * gap;
    }
    OvfPerturbReport report;
    report.condition = weighted;
    if (!(weighted < 1.0)) throw HypothesisViolated("sum ||A_n - B_n|| ||Psi_n (S^*)^{-1}|| must be below 1");
    report.predicted_lower = (1.0 - weighted) / spectral_norm(inv_adj);
    report.predicted_upper = spectral_norm(pair.theta_psi()) * (std::sqrt(squares) + spectral_norm(pair.theta_a()));
    report.measured = check(OvfPair(theta_b, pair.theta_psi(), r));
    report.contained = report.measured.is_ovf && report.measured.lower >= report.predicted_lower - 1e-9 &&
                       report.measured.upper <= report.predicted_upper + 1e-9;
    return report;
}

}  // namespace framekit
